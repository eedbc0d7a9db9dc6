#pragma once

#include <string>
#include <vector>

namespace lbforge {

// Primitive state for the 1D ideal-gas Riemann problem. The pressure
// follows the kinetic convention p = rho*theta/2, so theta = 2p/rho.
struct PrimitiveState {
  double rho = 1.0;
  double u = 0.0;
  double p = 1.0;
};

enum class WaveType { Shock, Rarefaction };

struct RiemannSolution {
  PrimitiveState left;
  PrimitiveState right;
  double gamma = 5.0 / 3.0;
  double p_star = 0.0;
  double u_star = 0.0;
  WaveType left_wave = WaveType::Rarefaction;
  WaveType right_wave = WaveType::Shock;
};

// Newton iteration on the standard pressure function (two-rarefaction
// initial guess, bisection fallback) to |dp| < 1e-12 * p_star.
RiemannSolution solve_star(const PrimitiveState& left,
                           const PrimitiveState& right, double gamma);

// State at similarity coordinate xi = x/t.
PrimitiveState sample(const RiemannSolution& solution, double xi);

// Sample at xi = position/t for each requested position. t > 0.
std::vector<PrimitiveState> profile(const RiemannSolution& solution, double t,
                                    const std::vector<double>& positions);

struct PlateauWindow {
  std::size_t begin = 0;  // index range [begin, end)
  std::size_t end = 0;
};

struct CompareReport {
  double rho_linf_plateau = 0.0;
  double theta_linf_plateau = 0.0;
  double rho_l1_plateau = 0.0;
  double theta_l1_plateau = 0.0;
  double rho_l1_full = 0.0;
  double theta_l1_full = 0.0;
  std::vector<PlateauWindow> windows;
};

struct ProfileSample {
  double rho = 0.0;
  double theta = 0.0;
};

// Relative errors of rho and theta over star-region plateau windows.
// Windows are the maximal constant runs of the exact density profile,
// excluding the runs touching the domain ends (the undisturbed states)
// and shrunk by n_smear samples on each side.
CompareReport compare_profiles(const std::vector<ProfileSample>& sim,
                               const std::vector<ProfileSample>& exact,
                               int n_smear);

}  // namespace lbforge
