#pragma once

#include <string>
#include <vector>

#include "lbforge/moment_system.hpp"

namespace lbforge {

// Canonical representative of a velocity orbit under the hyperoctahedral
// group: components sorted non-increasing, all non-negative.
struct GeneratorVector {
  std::vector<int> components;

  int dim() const { return static_cast<int>(components.size()); }
  GeneratorVector canonical() const;
  bool operator==(const GeneratorVector&) const = default;
};

struct VelocityGroup {
  GeneratorVector generator;
  double weight = 0.0;
};

// A velocity-set request: generators known, weights and scale unknown.
struct ModelSpec {
  int dimension = 0;
  int order = 0;
  std::vector<GeneratorVector> generators;
};

// A solved discrete-velocity model: scale c and per-orbit weights.
struct LatticeModel {
  int dimension = 0;
  int order = 0;
  double c = 0.0;
  std::vector<VelocityGroup> groups;

  ModelSpec spec() const;
};

struct DiscreteVelocity {
  std::array<double, 3> velocity{0.0, 0.0, 0.0};
  double weight = 0.0;
  std::array<int, 3> shift{0, 0, 0};
};

// Orbit of a generator under all coordinate permutations and independent
// sign flips. Members sorted lexicographically. D in {1,2,3}.
std::vector<std::vector<int>> orbit(const GeneratorVector& generator);

// |orbit|, computed combinatorially: 2^{#nonzero} * D! / prod(mult!).
int orbit_size(const GeneratorVector& generator);

int velocity_count(const ModelSpec& spec);
int velocity_count(const LatticeModel& model);

// Flattened velocity list: groups in listed order, orbit members in
// lexicographic order. velocity = c * shift.
std::vector<DiscreteVelocity> build_velocities(const LatticeModel& model);

// Model JSON persistence. Writer emits keys in the fixed documented order
// and floats with 17 significant digits; reader accepts any key order.
std::string model_to_json(const LatticeModel& model);
LatticeModel model_from_json(const std::string& text);
void save_model(const LatticeModel& model, const std::string& path);
LatticeModel load_model(const std::string& path);

}  // namespace lbforge
