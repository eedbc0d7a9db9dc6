#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "lbforge/lattice_model.hpp"

using namespace lbforge;

namespace {

// Published fourth-order models (Tables of the 33- and 95-velocity sets).
LatticeModel table2_model() {
  LatticeModel m;
  m.dimension = 2;
  m.order = 4;
  m.c = 0.819381;
  m.groups = {
      {{{0, 0}}, 0.161987},     {{{1, 0}}, 0.143204},
      {{{1, 1}}, 0.0338840},    {{{2, 0}}, 0.00556112},
      {{{2, 2}}, 8.44799e-5},   {{{3, 0}}, 0.00113254},
      {{{2, 1}}, 0.0128169},    {{{4, 4}}, 3.45552e-6},
  };
  return m;
}

LatticeModel table3_model() {
  LatticeModel m;
  m.dimension = 3;
  m.order = 4;
  m.c = 0.421803;
  m.groups = {
      {{{0, 0, 0}}, 0.206847},    {{{2, 0, 0}}, 0.00442257},
      {{{2, 2, 0}}, 0.0333341},   {{{2, 2, 2}}, 0.0128902},
      {{{3, 0, 0}}, 0.0287920},   {{{3, 3, 0}}, 0.00264319},
      {{{3, 3, 3}}, 0.000927908}, {{{2, 2, 5}}, 0.00106078},
      {{{4, 4, 0}}, 0.000804376}, {{{5, 0, 0}}, 0.00274697},
  };
  return m;
}

}  // namespace

TEST_CASE("orbit generation") {
  SUBCASE("named examples") {
    const auto o = orbit({{1, 0}});
    CHECK(o.size() == 4);
    const std::set<std::vector<int>> expected = {
        {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    CHECK(std::set<std::vector<int>>(o.begin(), o.end()) == expected);
    CHECK(orbit({{2, 1}}).size() == 8);
    CHECK(orbit({{5, 2, 2}}).size() == 24);
    CHECK(orbit({{0, 0, 0}}).size() == 1);
  }
  SUBCASE("rejects D=4") {
    CHECK_THROWS(orbit({{1, 0, 0, 0}}));
  }
  SUBCASE("closure under sign flip and coordinate swap") {
    for (const auto& gen : {std::vector<int>{3, 1}, {2, 2}, {4, 0}}) {
      const auto o = orbit({gen});
      const std::set<std::vector<int>> members(o.begin(), o.end());
      for (auto v : members) {
        std::swap(v[0], v[1]);
        CHECK(members.count(v) == 1);
        v[0] = -v[0];
        CHECK(members.count(v) == 1);
      }
    }
  }
}

TEST_CASE("orbit sizes") {
  CHECK(orbit_size({{3, 3, 0}}) == 12);
  CHECK(orbit_size({{2, 2, 2}}) == 8);
  CHECK(orbit_size({{5, 0, 0}}) == 6);
  CHECK(orbit_size({{3, 2, 1}}) == 48);
  CHECK(orbit_size({{1}}) == 2);
  CHECK(orbit_size({{0}}) == 1);

  SUBCASE("matches |orbit| exhaustively up to components of 6") {
    for (int a = 0; a <= 6; ++a)
      for (int b = 0; b <= a; ++b) {
        CHECK(orbit_size({{a, b}}) == static_cast<int>(orbit({{a, b}}).size()));
        for (int c = 0; c <= b; ++c)
          CHECK(orbit_size({{a, b, c}}) ==
                static_cast<int>(orbit({{a, b, c}}).size()));
      }
  }
  SUBCASE("sizes land in the allowed class sets") {
    const std::set<int> allowed2 = {1, 4, 8};
    for (int a = 0; a <= 5; ++a)
      for (int b = 0; b <= a; ++b)
        CHECK(allowed2.count(orbit_size({{a, b}})) == 1);
    const std::set<int> allowed3 = {1, 6, 8, 12, 24, 48};
    for (int a = 0; a <= 5; ++a)
      for (int b = 0; b <= a; ++b)
        for (int c = 0; c <= b; ++c)
          CHECK(allowed3.count(orbit_size({{a, b, c}})) == 1);
  }
}

TEST_CASE("velocity counts of the published specs") {
  CHECK(velocity_count(table2_model()) == 33);
  CHECK(velocity_count(table3_model()) == 95);
  ModelSpec origin;
  origin.dimension = 3;
  origin.order = 0;
  origin.generators = {{{0, 0, 0}}};
  CHECK(velocity_count(origin) == 1);
}

TEST_CASE("build_velocities") {
  const auto model = table2_model();
  const auto vs = build_velocities(model);
  REQUIRE(vs.size() == 33);

  SUBCASE("published entry for shift (1,0)") {
    bool found = false;
    for (const auto& dv : vs)
      if (dv.shift[0] == 1 && dv.shift[1] == 0) {
        found = true;
        CHECK(dv.weight == doctest::Approx(0.143204));
        CHECK(dv.velocity[0] == doctest::Approx(0.819381));
        CHECK(dv.velocity[1] == doctest::Approx(0.0));
      }
    CHECK(found);
  }
  SUBCASE("rest entry carries the rest weight") {
    CHECK(vs[0].shift == std::array<int, 3>{0, 0, 0});
    CHECK(vs[0].weight == doctest::Approx(0.161987));
  }
  SUBCASE("published weights sum to one") {
    double sum = 0;
    for (const auto& dv : vs) sum += dv.weight;
    CHECK(sum == doctest::Approx(1.0).epsilon(5e-6));
  }
  SUBCASE("parity cancellation: odd-exponent orbit sums vanish exactly") {
    for (const auto& group : model.groups) {
      const auto members = orbit(group.generator);
      for (int ax = 0; ax <= 5; ++ax)
        for (int ay = 0; ay + ax <= 5; ++ay) {
          if (ax % 2 == 0 && ay % 2 == 0) continue;
          long long sum = 0;
          for (const auto& v : members) {
            long long term = 1;
            for (int k = 0; k < ax; ++k) term *= v[0];
            for (int k = 0; k < ay; ++k) term *= v[1];
            sum += term;
          }
          CHECK(sum == 0);
        }
    }
  }
  SUBCASE("permutation symmetry of even orbit sums") {
    for (const auto& group : table3_model().groups) {
      const auto members = orbit(group.generator);
      auto moment = [&](int ax, int ay, int az) {
        long long sum = 0;
        for (const auto& v : members) {
          long long term = 1;
          for (int k = 0; k < ax; ++k) term *= v[0];
          for (int k = 0; k < ay; ++k) term *= v[1];
          for (int k = 0; k < az; ++k) term *= v[2];
          sum += term;
        }
        return sum;
      };
      CHECK(moment(4, 2, 0) == moment(0, 4, 2));
      CHECK(moment(2, 0, 0) == moment(0, 0, 2));
    }
  }
}

TEST_CASE("model JSON persistence") {
  const auto model = table3_model();
  const std::string text = model_to_json(model);
  SUBCASE("serialization is deterministic") {
    CHECK(text == model_to_json(model));
  }
  SUBCASE("round trip") {
    const LatticeModel back = model_from_json(text);
    CHECK(back.dimension == model.dimension);
    CHECK(back.order == model.order);
    CHECK(back.c == model.c);
    REQUIRE(back.groups.size() == model.groups.size());
    for (std::size_t i = 0; i < back.groups.size(); ++i) {
      CHECK(back.groups[i].generator == model.groups[i].generator.canonical());
      CHECK(back.groups[i].weight == model.groups[i].weight);
    }
  }
  SUBCASE("reader accepts any key order") {
    const std::string reordered = R"({
      "groups": [{"weight": 0.5, "generator": [1]}, {"generator": [0], "weight": 0.5}],
      "c": 1.25, "order": 1, "dimension": 1
    })";
    const LatticeModel m = model_from_json(reordered);
    CHECK(m.dimension == 1);
    CHECK(m.c == 1.25);
    CHECK(m.groups.size() == 2);
  }
  SUBCASE("canonical generator storage") {
    CHECK(text.find("[5, 2, 2]") != std::string::npos);
    CHECK(text.find("[2, 2, 5]") == std::string::npos);
  }
}
