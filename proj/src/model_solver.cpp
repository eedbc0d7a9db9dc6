#include "lbforge/model_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Dense>

namespace lbforge {

namespace {

std::int64_t ipow(int base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Rows of the z-substituted system: A[a][g] = z^{order(a)/2} * S[a][g].
Eigen::MatrixXd substituted_matrix(const MomentSystem& sys, double z) {
  const auto rows = static_cast<Eigen::Index>(sys.num_constraints());
  const auto cols = static_cast<Eigen::Index>(sys.num_groups());
  Eigen::MatrixXd A(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const int n = sys.constraints[static_cast<std::size_t>(r)].order();
    const double zf = std::pow(z, n / 2);
    for (Eigen::Index c = 0; c < cols; ++c)
      A(r, c) = zf * static_cast<double>(
                         sys.orbit_sums[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  }
  return A;
}

Eigen::VectorXd target_vector(const MomentSystem& sys) {
  Eigen::VectorXd b(static_cast<Eigen::Index>(sys.targets.size()));
  for (Eigen::Index r = 0; r < b.size(); ++r)
    b(r) = sys.targets[static_cast<std::size_t>(r)].to_double();
  return b;
}

double max_relative_residual(const MomentSystem& sys, double z,
                             const Eigen::VectorXd& w) {
  const Eigen::MatrixXd A = substituted_matrix(sys, z);
  const Eigen::VectorXd b = target_vector(sys);
  const Eigen::VectorXd r = A * w - b;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double scale = std::max(std::abs(b(i)), 1e-300);
    worst = std::max(worst, std::abs(r(i)) / scale);
  }
  return worst;
}

// Row/column equilibration before the pivoted LU: orbit sums span many
// orders of magnitude, which otherwise trips the rank threshold.
bool solve_square_equilibrated(const Eigen::MatrixXd& A,
                               const Eigen::VectorXd& b, Eigen::VectorXd* w) {
  const Eigen::Index n = A.rows();
  Eigen::VectorXd row_scale(n), col_scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = A.row(i).cwiseAbs().maxCoeff();
    row_scale(i) = m > 0 ? 1.0 / m : 1.0;
  }
  Eigen::MatrixXd S = row_scale.asDiagonal() * A;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double m = S.col(j).cwiseAbs().maxCoeff();
    col_scale(j) = m > 0 ? 1.0 / m : 1.0;
  }
  S = S * col_scale.asDiagonal();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  if (lu.rank() < n) return false;
  const Eigen::VectorXd y = lu.solve(row_scale.asDiagonal() * b);
  *w = col_scale.asDiagonal() * y;
  return true;
}

}  // namespace

std::vector<MultiIndex> enumerate_all_indices(int D, int max_order) {
  std::vector<MultiIndex> out;
  MultiIndex cur;
  cur.exponents.assign(static_cast<std::size_t>(D), 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == D) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      cur.exponents[static_cast<std::size_t>(pos)] = e;
      rec(pos + 1, remaining - e);
    }
    cur.exponents[static_cast<std::size_t>(pos)] = 0;
  };
  rec(0, max_order);
  std::sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.exponents > b.exponents;
  });
  return out;
}

MomentSystem assemble(const ModelSpec& spec) {
  MomentSystem sys;
  sys.dimension = spec.dimension;
  sys.order = spec.order;
  sys.constraints = enumerate_constraints(spec.order, spec.dimension);
  sys.targets.reserve(sys.constraints.size());
  for (const auto& a : sys.constraints) sys.targets.push_back(gaussian_moment(a));

  std::vector<std::vector<std::vector<int>>> orbits;
  for (const auto& g : spec.generators) orbits.push_back(orbit(g));

  for (const auto& a : sys.constraints) {
    std::vector<std::int64_t> row;
    row.reserve(spec.generators.size());
    for (const auto& members : orbits) {
      std::int64_t s = 0;
      for (const auto& xi : members) {
        std::int64_t term = 1;
        for (int alpha = 0; alpha < a.dim(); ++alpha)
          term *= ipow(xi[static_cast<std::size_t>(alpha)],
                       a.exponents[static_cast<std::size_t>(alpha)]);
        s += term;
      }
      row.push_back(s);
    }
    sys.orbit_sums.push_back(std::move(row));
  }

  // Greedy square-block selection: keep rows that raise the rank of the
  // row-normalized integer matrix, leave the rest as closure rows.
  const auto G = static_cast<Eigen::Index>(spec.generators.size());
  Eigen::MatrixXd picked(G, G);
  Eigen::Index n_picked = 0;
  for (std::size_t r = 0; r < sys.constraints.size(); ++r) {
    if (n_picked == G) {
      sys.closure_rows.push_back(r);
      continue;
    }
    Eigen::VectorXd row(G);
    for (Eigen::Index c = 0; c < G; ++c)
      row(c) = static_cast<double>(sys.orbit_sums[r][static_cast<std::size_t>(c)]);
    const double m = row.cwiseAbs().maxCoeff();
    if (m > 0) row /= m;
    picked.row(n_picked) = row;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(
        picked.topRows(n_picked + 1).transpose());
    qr.setThreshold(1e-9);
    if (qr.rank() == n_picked + 1) {
      sys.square_rows.push_back(r);
      ++n_picked;
    } else {
      sys.closure_rows.push_back(r);
    }
  }
  // a rank-deficient spec leaves square_rows short of the group count;
  // closure_rows then names the dependent constraints
  return sys;
}

ConsistencyResult consistency_residual(const MomentSystem& sys, double z) {
  ConsistencyResult out;
  const auto G = static_cast<Eigen::Index>(sys.num_groups());
  const auto R = static_cast<Eigen::Index>(sys.num_constraints());
  if (R < G) throw std::invalid_argument("consistency_residual: underdetermined system");
  const Eigen::MatrixXd A = substituted_matrix(sys, z);
  const Eigen::VectorXd b = target_vector(sys);

  if (sys.square_rows.size() != static_cast<std::size_t>(G)) {
    out.singular = true;
    out.residual = 1e30;
    out.signed_closure = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  Eigen::MatrixXd Asq(G, G);
  Eigen::VectorXd bsq(G);
  for (Eigen::Index i = 0; i < G; ++i) {
    const auto r = static_cast<Eigen::Index>(sys.square_rows[static_cast<std::size_t>(i)]);
    Asq.row(i) = A.row(r);
    bsq(i) = b(r);
  }
  Eigen::VectorXd w;
  if (!solve_square_equilibrated(Asq, bsq, &w)) {
    out.singular = true;
    out.residual = 1e30;
    out.signed_closure = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.weights.assign(w.data(), w.data() + w.size());

  double closure = 0.0, abs_res = 0.0;
  bool first = true;
  for (std::size_t cr : sys.closure_rows) {
    const auto r = static_cast<Eigen::Index>(cr);
    const double res = A.row(r).dot(w) - b(r);
    if (first) {
      closure = res;
      first = false;
    }
    abs_res += std::abs(res);
  }
  out.signed_closure = closure;
  out.residual = abs_res;

  const Eigen::VectorXd wls = A.colPivHouseholderQr().solve(b);
  out.lsq_residual = (A * wls - b).norm();
  return out;
}

SolveReport solve(const ModelSpec& spec, const SolveOptions& options) {
  SolveReport report;
  const MomentSystem sys = assemble(spec);
  const auto G = sys.num_groups();
  const auto R = sys.num_constraints();
  if (R != G + 1) {
    std::ostringstream os;
    os << "square solve expects constraints = groups + 1; got " << R
       << " constraints for " << G << " groups (equation_count("
       << spec.order << ", " << spec.dimension << ") = " << R << ")";
    throw std::invalid_argument(os.str());
  }

  if (sys.square_rows.size() != G) {
    std::ostringstream os;
    os << "rank-deficient spec: only " << sys.square_rows.size()
       << " independent constraints for " << G
       << " groups; dependent constraints:";
    for (std::size_t cr : sys.closure_rows) {
      const auto& a = sys.constraints[cr];
      os << " (";
      for (int i = 0; i < a.dim(); ++i)
        os << (i ? "," : "") << a.exponents[static_cast<std::size_t>(i)];
      os << ")";
    }
    throw std::invalid_argument(os.str());
  }

  const double lo = options.z_min > 0 ? options.z_min
                                      : options.z_max / options.scan_samples;
  std::vector<double> zs(static_cast<std::size_t>(options.scan_samples));
  for (int i = 0; i < options.scan_samples; ++i)
    zs[static_cast<std::size_t>(i)] =
        lo + (options.z_max - lo) * i / (options.scan_samples - 1);

  double prev_z = 0.0, prev_f = 0.0;
  bool have_prev = false;
  for (double z : zs) {
    const ConsistencyResult c = consistency_residual(sys, z);
    if (c.singular) {
      have_prev = false;
      continue;
    }
    const double f = c.signed_closure;
    if (have_prev && ((prev_f < 0) != (f < 0) || f == 0.0)) {
      // bisect to |dz| < 1e-14
      double a = prev_z, fa = prev_f, b = z;
      for (int it = 0; it < 200 && (b - a) > 1e-14; ++it) {
        const double mid = 0.5 * (a + b);
        const ConsistencyResult cm = consistency_residual(sys, mid);
        if (cm.singular) break;
        if ((cm.signed_closure < 0) == (fa < 0)) {
          a = mid;
          fa = cm.signed_closure;
        } else {
          b = mid;
        }
      }
      const double z_root = 0.5 * (a + b);
      const ConsistencyResult cr = consistency_residual(sys, z_root);
      Eigen::VectorXd w(static_cast<Eigen::Index>(cr.weights.size()));
      for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = cr.weights[static_cast<std::size_t>(i)];
      const double worst = max_relative_residual(sys, z_root, w);
      const double min_w = cr.weights.empty()
                               ? 0.0
                               : *std::min_element(cr.weights.begin(), cr.weights.end());
      if (min_w <= 0.0) {
        std::ostringstream os;
        os << "non-positive weight " << min_w;
        report.rejected_roots.push_back({z_root, os.str()});
      } else if (worst > options.tolerance) {
        std::ostringstream os;
        os << "max relative residual " << worst << " above tolerance";
        report.rejected_roots.push_back({z_root, os.str()});
      } else {
        LatticeModel model;
        model.dimension = spec.dimension;
        model.order = spec.order;
        model.c = std::sqrt(z_root);
        for (std::size_t g = 0; g < G; ++g)
          model.groups.push_back({spec.generators[g], cr.weights[g]});
        report.solutions.push_back(std::move(model));
        report.residuals.push_back(worst);
      }
    }
    prev_z = z;
    prev_f = f;
    have_prev = true;
  }
  if (report.solutions.empty()) {
    std::ostringstream os;
    os << "no positive-weight root in z range (" << lo << ", " << options.z_max
       << "]; " << report.rejected_roots.size() << " root(s) rejected";
    report.diagnostic = os.str();
  }
  return report;
}

VerifyReport verify(const LatticeModel& model, int m) {
  VerifyReport out;
  const auto velocities = build_velocities(model);
  for (const auto& a : enumerate_all_indices(model.dimension, 2 * m)) {
    double sum = 0.0, abs_sum = 0.0;
    for (const auto& dv : velocities) {
      double term = dv.weight, abs_term = dv.weight;
      for (int alpha = 0; alpha < model.dimension; ++alpha) {
        const double v = dv.velocity[static_cast<std::size_t>(alpha)];
        for (int k = 0; k < a.exponents[static_cast<std::size_t>(alpha)]; ++k) {
          term *= v;
          abs_term *= std::abs(v);
        }
      }
      sum += term;
      abs_sum += abs_term;
    }
    if (a.all_even()) {
      const double target = gaussian_moment(a).to_double();
      const double rel = std::abs(sum - target) / std::max(std::abs(target), 1e-300);
      if (rel > out.max_relative_residual) {
        out.max_relative_residual = rel;
        out.worst_even = a;
      }
    } else {
      const double scaled = std::abs(sum) / std::max(abs_sum, 1e-300);
      if (scaled > out.max_parity_violation) {
        out.max_parity_violation = scaled;
        out.worst_odd = a;
      }
    }
  }
  return out;
}

}  // namespace lbforge
