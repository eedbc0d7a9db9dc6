#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lbforge/equilibrium.hpp"
#include "lbforge/lattice_model.hpp"

namespace lbforge {

struct ScenarioConfig {
  int nx = 11;
  int ny = 11;
  int nz = 800;
  int steps = 120;
  double omega = 1.5;
  MacroState left_state{4.0, {0.0, 0.0, 0.0}, 1.0};
  MacroState right_state{1.0, {0.0, 0.0, 0.0}, 1.0};
  int snapshot_every = 0;   // 0: only initial and final
  bool periodic_z = false;  // all-periodic box (conservation experiments)
};

struct ProfileRow {
  int z_index = 0;      // 1-based interior node index along the tube
  double z_phys = 0.0;  // (z - interface) * dx, dx = c
  double rho = 0.0;
  double uz = 0.0;
  double theta = 0.0;
  double p = 0.0;  // kinetic pressure rho*theta/2
};

struct ProfileSnapshot {
  int step = 0;
  std::vector<ProfileRow> rows;
};

struct Totals {
  double mass = 0.0;
  std::array<double, 3> momentum{0.0, 0.0, 0.0};
  double energy = 0.0;
};

struct RunResult {
  std::vector<ProfileSnapshot> snapshots;
  double wall_seconds = 0.0;
  int steps_completed = 0;
  std::string warning;
};

// BGK lattice Boltzmann on a rectangular grid, tube axis = last model axis.
// Populations live in two buffers (collide in the source, stream by gather
// into the alternate); z-end ghost slabs are held at the boundary
// equilibria and rewritten every step. x and y are periodic.
class Simulator {
public:
  Simulator(LatticeModel model, ScenarioConfig config);

  void initialize();
  // One collide+stream step. The parallel path is bit-identical across
  // thread counts; the serial reference goes through the equilibrium
  // module per node and is used to cross-check the flattened kernels.
  void step_parallel();
  void step_reference();

  RunResult run(bool use_parallel = true);

  ProfileSnapshot extract_profile() const;
  Totals interior_totals() const;
  MacroState node_state(int x, int y, int z_interior) const;
  std::vector<double>& raw_populations() { return current_; }
  const LatticeModel& model() const { return model_; }
  const ScenarioConfig& config() const { return config_; }
  int ghost_depth() const { return ghost_; }
  int current_step() const { return step_count_; }

private:
  void collide_kernel(bool parallel);
  void stream_kernel(bool parallel);
  void freeze_ghosts();
  std::size_t node_offset(int x, int y, int z_total) const;

  LatticeModel model_;
  ScenarioConfig config_;
  EquilibriumProjector proj_;
  std::vector<DiscreteVelocity> velocities_;
  int dim_ = 3;
  int axis_z_ = 2;
  int q_ = 0;
  int ghost_ = 0;
  int nz_total_ = 0;
  int step_count_ = 0;
  std::vector<double> current_;
  std::vector<double> scratch_;
  std::vector<double> left_eq_;
  std::vector<double> right_eq_;
  // flattened kernels data
  std::vector<double> emap_;        // q x basis, row-major
  std::vector<int> basis_exp_;      // basis x dim
  std::vector<double> vel_flat_;    // q x 3
  std::vector<int> shift_flat_;     // q x 3
};

std::string profile_to_csv(const std::vector<ProfileSnapshot>& snapshots);
std::vector<ProfileSnapshot> profile_from_csv(const std::string& text);
void save_profile_csv(const std::vector<ProfileSnapshot>& snapshots,
                      const std::string& path);
std::vector<ProfileSnapshot> load_profile_csv(const std::string& path);

}  // namespace lbforge
