#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lbforge/lattice_model.hpp"
#include "lbforge/moment_system.hpp"
#include "lbforge/rational.hpp"

namespace lbforge {

// Assembled quadrature constraints for one spec: with v = c*xi each
// constraint a of order n reads  c^n sum_g w_g S[a][g] = target(a),
// where S[a][g] = sum over the orbit of g of prod xi_alpha^{a_alpha}
// (an exact non-negative integer, all exponents even).
struct MomentSystem {
  int dimension = 0;
  int order = 0;
  std::vector<MultiIndex> constraints;
  std::vector<std::vector<std::int64_t>> orbit_sums;  // [constraint][group]
  std::vector<Rational> targets;
  // Deterministic split into an invertible square block plus closure rows.
  // Greedy in canonical order; z only scales whole rows, so the selection
  // is independent of z. Empty closure_rows flags a rank-deficient spec.
  std::vector<std::size_t> square_rows;
  std::vector<std::size_t> closure_rows;

  std::size_t num_constraints() const { return constraints.size(); }
  std::size_t num_groups() const {
    return constraints.empty() ? 0 : orbit_sums.front().size();
  }
};

struct ConsistencyResult {
  double residual = 0.0;        // |closure| of the constraints beyond the square block
  double signed_closure = 0.0;  // signed value, used for root bracketing
  double lsq_residual = 0.0;    // full-system least-squares cross-check
  bool singular = false;
  std::vector<double> weights;
};

struct RejectedRoot {
  double z = 0.0;
  std::string reason;
};

struct SolveReport {
  std::vector<LatticeModel> solutions;
  std::vector<double> residuals;  // max relative residual per solution
  std::vector<RejectedRoot> rejected_roots;
  std::string diagnostic;
};

struct SolveOptions {
  double z_min = 0.0;   // exclusive
  double z_max = 4.0;
  int scan_samples = 4000;
  double tolerance = 1e-9;  // max relative residual for acceptance
};

struct VerifyReport {
  double max_relative_residual = 0.0;  // worst even-all constraint violation
  MultiIndex worst_even;
  double max_parity_violation = 0.0;   // worst scaled any-odd sum
  MultiIndex worst_odd;
};

MomentSystem assemble(const ModelSpec& spec);

// Substitute z = c^2, solve the leading square block for w(z) by
// full-pivot LU, and report the residual of the remaining constraint(s).
ConsistencyResult consistency_residual(const MomentSystem& system, double z);

// Scan the signed closure over z, bracket sign changes, polish by
// bisection, keep roots with all-positive weights and full-system max
// relative residual below tolerance.
SolveReport solve(const ModelSpec& spec, const SolveOptions& options = {});

// Evaluate sum_i w_i v_i^a against the Gaussian targets over ALL
// multi-indices of order <= 2m (all parities, not just canonical).
VerifyReport verify(const LatticeModel& model, int m);

// All multi-indices of length D with total order <= max_order.
std::vector<MultiIndex> enumerate_all_indices(int D, int max_order);

}  // namespace lbforge
