#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lbforge/riemann.hpp"

using namespace lbforge;

namespace {

// Independent oracle: bisection on a separately written pressure function.
double oracle_p_star(const PrimitiveState& l, const PrimitiveState& r,
                     double gamma) {
  auto f_side = [gamma](double p, const PrimitiveState& s) {
    const double a = std::sqrt(gamma * s.p / s.rho);
    if (p > s.p) {
      const double A = 2.0 / ((gamma + 1.0) * s.rho);
      const double B = (gamma - 1.0) / (gamma + 1.0) * s.p;
      return (p - s.p) * std::sqrt(A / (p + B));
    }
    return 2.0 * a / (gamma - 1.0) *
           (std::pow(p / s.p, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
  };
  auto g = [&](double p) { return f_side(p, l) + f_side(p, r) + (r.u - l.u); };
  double lo = 1e-14, hi = std::max(l.p, r.p);
  while (g(hi) < 0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Rankine-Hugoniot residuals (mass, momentum, energy flux) across a shock
// in the shock frame.
double shock_rh_residual(const PrimitiveState& pre, double rho_post,
                         double u_post, double p_post, double shock_speed,
                         double gamma) {
  const double m1 = pre.rho * (pre.u - shock_speed);
  const double m2 = rho_post * (u_post - shock_speed);
  const double mom1 = m1 * (pre.u - shock_speed) + pre.p;
  const double mom2 = m2 * (u_post - shock_speed) + p_post;
  auto enthalpy_flux = [gamma](double rho, double w, double p) {
    const double e = p / ((gamma - 1.0) * rho);
    return rho * w * (0.5 * w * w + e + p / rho);
  };
  const double e1 = enthalpy_flux(pre.rho, pre.u - shock_speed, pre.p);
  const double e2 = enthalpy_flux(rho_post, u_post - shock_speed, p_post);
  const double scale = std::abs(m1) + std::abs(mom1) + std::abs(e1) + 1.0;
  return (std::abs(m1 - m2) + std::abs(mom1 - mom2) + std::abs(e1 - e2)) /
         scale;
}

}  // namespace

TEST_CASE("trivial and classic star states") {
  SUBCASE("equal states solve to themselves") {
    const PrimitiveState s{1.5, 0.3, 0.7};
    const RiemannSolution sol = solve_star(s, s, 1.4);
    CHECK(sol.p_star == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(sol.u_star == doctest::Approx(0.3).epsilon(1e-14));
  }
  SUBCASE("Sod test matches the bisection oracle") {
    const PrimitiveState l{1.0, 0.0, 1.0}, r{0.125, 0.0, 0.1};
    const RiemannSolution sol = solve_star(l, r, 1.4);
    CHECK(sol.p_star == doctest::Approx(oracle_p_star(l, r, 1.4)).epsilon(1e-8));
    CHECK(sol.left_wave == WaveType::Rarefaction);
    CHECK(sol.right_wave == WaveType::Shock);
  }
  SUBCASE("tube case: left rarefaction, right shock") {
    const PrimitiveState l{4.0, 0.0, 2.0}, r{1.0, 0.0, 0.5};
    const RiemannSolution sol = solve_star(l, r, 5.0 / 3.0);
    CHECK(sol.left_wave == WaveType::Rarefaction);
    CHECK(sol.right_wave == WaveType::Shock);
    CHECK(sol.p_star ==
          doctest::Approx(oracle_p_star(l, r, 5.0 / 3.0)).epsilon(1e-8));
  }
  SUBCASE("vacuum-generating input is rejected") {
    CHECK_THROWS(solve_star({1.0, -10.0, 0.01}, {1.0, 10.0, 0.01}, 1.4));
  }
}

TEST_CASE("random states agree with the oracle and satisfy wave relations") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dpos(0.1, 4.0);
  std::uniform_real_distribution<double> dvel(-0.5, 0.5);
  for (double gamma : {1.4, 5.0 / 3.0}) {
    for (int trial = 0; trial < 100; ++trial) {
      const PrimitiveState l{dpos(rng), dvel(rng), dpos(rng)};
      const PrimitiveState r{dpos(rng), dvel(rng), dpos(rng)};
      const RiemannSolution sol = solve_star(l, r, gamma);
      CHECK(sol.p_star ==
            doctest::Approx(oracle_p_star(l, r, gamma)).epsilon(1e-8));

      // shock branches: Rankine-Hugoniot residuals
      if (sol.right_wave == WaveType::Shock) {
        const double ratio = sol.p_star / r.p;
        const double a = std::sqrt(gamma * r.p / r.rho);
        const double S =
            r.u + a * std::sqrt((gamma + 1.0) / (2.0 * gamma) * ratio +
                                (gamma - 1.0) / (2.0 * gamma));
        const double beta = (gamma - 1.0) / (gamma + 1.0);
        const double rho_star = r.rho * (ratio + beta) / (beta * ratio + 1.0);
        CHECK(shock_rh_residual(r, rho_star, sol.u_star, sol.p_star, S,
                                gamma) < 1e-10);
      }
      // rarefaction branches: Riemann invariant and entropy along the fan
      if (sol.left_wave == WaveType::Rarefaction) {
        const double a_l = std::sqrt(gamma * l.p / l.rho);
        const double head = l.u - a_l;
        const double tail =
            sol.u_star -
            a_l * std::pow(sol.p_star / l.p, (gamma - 1.0) / (2.0 * gamma));
        const double inv_ref = l.u + 2.0 * a_l / (gamma - 1.0);
        const double s_ref = l.p / std::pow(l.rho, gamma);
        for (int k = 0; k <= 10; ++k) {
          const double xi = head + (tail - head) * k / 10.0;
          const PrimitiveState st = sample(sol, xi - 1e-14);
          const double a = std::sqrt(gamma * st.p / st.rho);
          CHECK(st.u + 2.0 * a / (gamma - 1.0) ==
                doctest::Approx(inv_ref).epsilon(1e-10));
          CHECK(st.p / std::pow(st.rho, gamma) ==
                doctest::Approx(s_ref).epsilon(1e-10));
        }
        // continuity at the fan edges
        const PrimitiveState just_out = sample(sol, head - 1e-12);
        const PrimitiveState just_in = sample(sol, head + 1e-12);
        CHECK(std::abs(just_out.rho - just_in.rho) < 1e-10);
        const PrimitiveState tail_in = sample(sol, tail - 1e-12);
        const PrimitiveState tail_out = sample(sol, tail + 1e-12);
        CHECK(std::abs(tail_in.rho - tail_out.rho) < 1e-10);
      }
      // contact: pressure and velocity continuous
      const PrimitiveState cl = sample(sol, sol.u_star - 1e-12);
      const PrimitiveState cr = sample(sol, sol.u_star + 1e-12);
      CHECK(cl.p == doctest::Approx(cr.p).epsilon(1e-10));
      CHECK(cl.u == doctest::Approx(cr.u).epsilon(1e-10));
    }
  }
}

TEST_CASE("sampling far field and profile") {
  const PrimitiveState l{4.0, 0.0, 2.0}, r{1.0, 0.0, 0.5};
  const RiemannSolution sol = solve_star(l, r, 5.0 / 3.0);
  CHECK(sample(sol, -100.0).rho == doctest::Approx(4.0));
  CHECK(sample(sol, 100.0).rho == doctest::Approx(1.0));

  SUBCASE("profile matches pointwise sampling") {
    const std::vector<double> xs = {-3.0, -1.0, 0.0, 0.5, 2.0};
    const auto prof = profile(sol, 2.0, xs);
    REQUIRE(prof.size() == xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      CHECK(prof[i].rho == doctest::Approx(sample(sol, xs[i] / 2.0).rho));
  }
  SUBCASE("t <= 0 is rejected") {
    CHECK_THROWS(profile(sol, 0.0, {0.0}));
  }
  SUBCASE("mirror symmetry") {
    const RiemannSolution mirrored = solve_star(
        {r.rho, -r.u, r.p}, {l.rho, -l.u, l.p}, 5.0 / 3.0);
    for (double xi : {-2.0, -0.5, 0.1, 1.0}) {
      const PrimitiveState a = sample(sol, xi);
      const PrimitiveState b = sample(mirrored, -xi);
      CHECK(a.rho == doctest::Approx(b.rho).epsilon(1e-10));
      CHECK(a.u == doctest::Approx(-b.u).epsilon(1e-10));
      CHECK(a.p == doctest::Approx(b.p).epsilon(1e-10));
    }
  }
}

TEST_CASE("profile comparison and plateau detection") {
  const PrimitiveState l{4.0, 0.0, 2.0}, r{1.0, 0.0, 0.5};
  const RiemannSolution sol = solve_star(l, r, 5.0 / 3.0);
  const int n = 800;
  std::vector<ProfileSample> exact(n);
  for (int i = 0; i < n; ++i) {
    const double xi = (i - n / 2 + 0.5) / 100.0;
    const PrimitiveState s = sample(sol, xi);
    exact[static_cast<std::size_t>(i)] = {s.rho, 2.0 * s.p / s.rho};
  }
  SUBCASE("identical profiles have zero error") {
    const CompareReport rep = compare_profiles(exact, exact, 10);
    CHECK(rep.rho_linf_plateau == 0.0);
    CHECK(rep.theta_linf_plateau == 0.0);
    CHECK(rep.rho_l1_full == 0.0);
    CHECK(!rep.windows.empty());
  }
  SUBCASE("one-node shift: full-domain error nonzero, plateau error tiny") {
    std::vector<ProfileSample> shifted(exact);
    std::rotate(shifted.begin(), shifted.begin() + 1, shifted.end());
    const CompareReport rep = compare_profiles(shifted, exact, 10);
    CHECK(rep.rho_l1_full > 0.0);
    CHECK(rep.rho_linf_plateau < 1e-9);
  }
  SUBCASE("misaligned inputs rejected") {
    std::vector<ProfileSample> shorter(exact.begin(), exact.end() - 1);
    CHECK_THROWS(compare_profiles(shorter, exact, 10));
  }
  SUBCASE("windows sit between the waves") {
    const CompareReport rep = compare_profiles(exact, exact, 10);
    // two star plateaus for this rarefaction-contact-shock structure
    CHECK(rep.windows.size() == 2);
  }
}
