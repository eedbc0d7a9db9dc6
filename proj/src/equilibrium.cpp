#include "lbforge/equilibrium.hpp"

#include <cmath>
#include <stdexcept>

#include "lbforge/model_solver.hpp"

namespace lbforge {

EquilibriumProjector build_projector(const LatticeModel& model, int N) {
  if (N > model.order)
    throw std::invalid_argument(
        "build_projector: N must not exceed the model order (quadrature "
        "cannot support the moment contract)");
  EquilibriumProjector proj;
  proj.dimension = model.dimension;
  proj.order = N;
  proj.basis = enumerate_all_indices(model.dimension, N);

  const auto B = static_cast<Eigen::Index>(proj.basis.size());
  Eigen::MatrixXd gram(B, B);
  for (Eigen::Index a = 0; a < B; ++a) {
    for (Eigen::Index b = 0; b < B; ++b) {
      MultiIndex sum;
      for (int i = 0; i < model.dimension; ++i)
        sum.exponents.push_back(proj.basis[static_cast<std::size_t>(a)].exponents[static_cast<std::size_t>(i)] +
                                proj.basis[static_cast<std::size_t>(b)].exponents[static_cast<std::size_t>(i)]);
      gram(a, b) = gaussian_moment(sum).to_double();
    }
  }
  proj.gram_inverse = gram.fullPivLu().inverse();

  const auto velocities = build_velocities(model);
  const auto V = static_cast<Eigen::Index>(velocities.size());
  proj.monomial_table.resize(V, B);
  proj.weights.resize(static_cast<std::size_t>(V));
  for (Eigen::Index i = 0; i < V; ++i) {
    const auto& dv = velocities[static_cast<std::size_t>(i)];
    proj.weights[static_cast<std::size_t>(i)] = dv.weight;
    for (Eigen::Index b = 0; b < B; ++b) {
      double m = 1.0;
      for (int alpha = 0; alpha < model.dimension; ++alpha)
        for (int k = 0; k < proj.basis[static_cast<std::size_t>(b)].exponents[static_cast<std::size_t>(alpha)]; ++k)
          m *= dv.velocity[static_cast<std::size_t>(alpha)];
      proj.monomial_table(i, b) = m;
    }
  }
  proj.equilibrium_map = proj.monomial_table * proj.gram_inverse;
  for (Eigen::Index i = 0; i < V; ++i)
    proj.equilibrium_map.row(i) *= proj.weights[static_cast<std::size_t>(i)];
  return proj;
}

Eigen::VectorXd moment_targets(const EquilibriumProjector& proj,
                               const MacroState& state) {
  MacroState unit = state;
  unit.rho = 1.0;
  Eigen::VectorXd t(static_cast<Eigen::Index>(proj.basis.size()));
  for (Eigen::Index a = 0; a < t.size(); ++a)
    t(a) = maxwellian_moment(proj.basis[static_cast<std::size_t>(a)], unit);
  return t;
}

Eigen::VectorXd equilibrium_coefficients(const EquilibriumProjector& proj,
                                         const MacroState& state) {
  return proj.gram_inverse * moment_targets(proj, state);
}

std::vector<double> discrete_equilibrium(const EquilibriumProjector& proj,
                                         const MacroState& state) {
  const Eigen::VectorXd f = state.rho * (proj.equilibrium_map * moment_targets(proj, state));
  return {f.data(), f.data() + f.size()};
}

MacroState macro_from_populations(const LatticeModel& model,
                                  const std::vector<double>& populations) {
  const auto velocities = build_velocities(model);
  if (populations.size() != velocities.size())
    throw std::invalid_argument("macro_from_populations: population size mismatch");
  double rho = 0.0;
  std::array<double, 3> mom{0.0, 0.0, 0.0};
  double energy = 0.0;
  for (std::size_t i = 0; i < populations.size(); ++i) {
    const double f = populations[i];
    rho += f;
    double v2 = 0.0;
    for (int alpha = 0; alpha < model.dimension; ++alpha) {
      const double v = velocities[i].velocity[static_cast<std::size_t>(alpha)];
      mom[static_cast<std::size_t>(alpha)] += f * v;
      v2 += v * v;
    }
    energy += f * v2;
  }
  if (!(rho > 0.0))
    throw std::runtime_error("macro_from_populations: non-positive density");
  MacroState state;
  state.rho = rho;
  double u2 = 0.0;
  for (int alpha = 0; alpha < model.dimension; ++alpha) {
    state.u[static_cast<std::size_t>(alpha)] = mom[static_cast<std::size_t>(alpha)] / rho;
    u2 += state.u[static_cast<std::size_t>(alpha)] * state.u[static_cast<std::size_t>(alpha)];
  }
  state.theta = (2.0 / model.dimension) * (energy / rho - u2);
  return state;
}

}  // namespace lbforge
