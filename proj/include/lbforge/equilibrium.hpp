#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lbforge/lattice_model.hpp"
#include "lbforge/moment_system.hpp"

namespace lbforge {

// Precomputed machinery for the order-N discrete equilibrium
// f_i^eq = rho w_i P^(N)(v_i): the polynomial P^(N) is the unique degree-N
// polynomial whose normalized-Gaussian moments equal the Maxwellian's
// through order N, obtained by one solve against the monomial Gram matrix.
struct EquilibriumProjector {
  int dimension = 0;
  int order = 0;                    // N
  std::vector<MultiIndex> basis;    // all indices of order <= N
  Eigen::MatrixXd gram_inverse;     // inverse of G[a][b] = gaussian_moment(a+b)
  Eigen::MatrixXd monomial_table;   // V[i][b] = v_i^b
  std::vector<double> weights;      // w_i aligned with monomial_table rows
  Eigen::MatrixXd equilibrium_map;  // diag(w) * V * G^{-1}; f^eq = rho * map * targets
};

// Precompute G^{-1} and V for a model. Requires N <= model order m
// (quadrature exactness needs degree m + N <= 2m).
EquilibriumProjector build_projector(const LatticeModel& model, int N);

// Coefficients p of P^(N) = sum_b p_b v^b for the given state.
Eigen::VectorXd equilibrium_coefficients(const EquilibriumProjector& proj,
                                         const MacroState& state);

// Per-basis-index Maxwellian targets divided by rho.
Eigen::VectorXd moment_targets(const EquilibriumProjector& proj,
                               const MacroState& state);

// f_i^eq = rho w_i P^(N)(v_i), one entry per discrete velocity.
std::vector<double> discrete_equilibrium(const EquilibriumProjector& proj,
                                         const MacroState& state);

// Recover (rho, u, theta) from populations:
// rho = sum f, u = sum f v / rho, theta = (2/D)(sum f |v|^2 / rho - |u|^2).
// Throws on non-positive density; non-positive theta is returned as-is
// (diagnostic, not fatal).
MacroState macro_from_populations(const LatticeModel& model,
                                  const std::vector<double>& populations);

}  // namespace lbforge
