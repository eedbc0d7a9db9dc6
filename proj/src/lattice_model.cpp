#include "lbforge/lattice_model.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lbforge {

GeneratorVector GeneratorVector::canonical() const {
  GeneratorVector c = *this;
  for (int v : c.components)
    if (v < 0) throw std::invalid_argument("generator components must be >= 0");
  std::sort(c.components.begin(), c.components.end(), std::greater<int>());
  return c;
}

ModelSpec LatticeModel::spec() const {
  ModelSpec s;
  s.dimension = dimension;
  s.order = order;
  for (const auto& g : groups) s.generators.push_back(g.generator);
  return s;
}

std::vector<std::vector<int>> orbit(const GeneratorVector& generator) {
  const int D = generator.dim();
  if (D < 1 || D > 3)
    throw std::invalid_argument(
        "orbit: only D in {1,2,3} is supported (D=4 orbit classes are not "
        "implemented)");
  std::vector<int> base = generator.components;
  std::sort(base.begin(), base.end());
  std::set<std::vector<int>> members;
  do {
    // independent sign flips of every component (flips of zeros collapse)
    const int n = 1 << D;
    for (int mask = 0; mask < n; ++mask) {
      std::vector<int> v = base;
      for (int i = 0; i < D; ++i)
        if (mask & (1 << i)) v[static_cast<std::size_t>(i)] = -v[static_cast<std::size_t>(i)];
      members.insert(v);
    }
  } while (std::next_permutation(base.begin(), base.end()));
  return {members.begin(), members.end()};
}

int orbit_size(const GeneratorVector& generator) {
  const int D = generator.dim();
  if (D < 1 || D > 3)
    throw std::invalid_argument(
        "orbit_size: only D in {1,2,3} is supported");
  int nonzero = 0;
  std::map<int, int> mult;
  for (int v : generator.components) {
    if (v != 0) ++nonzero;
    ++mult[v];
  }
  int fact = 1;
  for (int k = 2; k <= D; ++k) fact *= k;
  int denom = 1;
  for (const auto& [value, count] : mult)
    for (int k = 2; k <= count; ++k) denom *= k;
  return (1 << nonzero) * fact / denom;
}

int velocity_count(const ModelSpec& spec) {
  int total = 0;
  for (const auto& g : spec.generators) total += orbit_size(g);
  return total;
}

int velocity_count(const LatticeModel& model) {
  return velocity_count(model.spec());
}

std::vector<DiscreteVelocity> build_velocities(const LatticeModel& model) {
  std::vector<DiscreteVelocity> out;
  for (const auto& group : model.groups) {
    for (const auto& member : orbit(group.generator)) {
      DiscreteVelocity dv;
      dv.weight = group.weight;
      for (int i = 0; i < model.dimension; ++i) {
        dv.shift[static_cast<std::size_t>(i)] = member[static_cast<std::size_t>(i)];
        dv.velocity[static_cast<std::size_t>(i)] = model.c * member[static_cast<std::size_t>(i)];
      }
      out.push_back(dv);
    }
  }
  return out;
}

namespace {
std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // make it a valid JSON float even for integral values
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}
}  // namespace

std::string model_to_json(const LatticeModel& model) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"dimension\": " << model.dimension << ",\n";
  os << "  \"order\": " << model.order << ",\n";
  os << "  \"c\": " << format_double(model.c) << ",\n";
  os << "  \"groups\": [\n";
  for (std::size_t g = 0; g < model.groups.size(); ++g) {
    const auto& group = model.groups[g];
    os << "    {\"generator\": [";
    const auto canon = group.generator.canonical();
    for (int i = 0; i < canon.dim(); ++i) {
      if (i) os << ", ";
      os << canon.components[static_cast<std::size_t>(i)];
    }
    os << "], \"weight\": " << format_double(group.weight) << "}";
    if (g + 1 < model.groups.size()) os << ",";
    os << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

LatticeModel model_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  LatticeModel model;
  model.dimension = j.at("dimension").get<int>();
  model.order = j.at("order").get<int>();
  model.c = j.at("c").get<double>();
  for (const auto& jg : j.at("groups")) {
    VelocityGroup group;
    group.generator.components = jg.at("generator").get<std::vector<int>>();
    group.generator = group.generator.canonical();
    group.weight = jg.at("weight").get<double>();
    if (group.generator.dim() != model.dimension)
      throw std::invalid_argument("model JSON: generator dimension mismatch");
    model.groups.push_back(group);
  }
  if (model.c <= 0) throw std::invalid_argument("model JSON: c must be > 0");
  return model;
}

void save_model(const LatticeModel& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << model_to_json(model);
}

LatticeModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace lbforge
