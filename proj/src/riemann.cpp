#include "lbforge/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lbforge {

namespace {

double sound_speed(const PrimitiveState& s, double gamma) {
  return std::sqrt(gamma * s.p / s.rho);
}

// f_K(p): velocity change across the K-side wave for star pressure p.
double wave_function(double p, const PrimitiveState& s, double gamma) {
  if (p > s.p) {  // shock
    const double A = 2.0 / ((gamma + 1.0) * s.rho);
    const double B = (gamma - 1.0) / (gamma + 1.0) * s.p;
    return (p - s.p) * std::sqrt(A / (p + B));
  }
  // rarefaction
  const double a = sound_speed(s, gamma);
  return 2.0 * a / (gamma - 1.0) *
         (std::pow(p / s.p, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
}

double wave_function_derivative(double p, const PrimitiveState& s,
                                double gamma) {
  if (p > s.p) {
    const double A = 2.0 / ((gamma + 1.0) * s.rho);
    const double B = (gamma - 1.0) / (gamma + 1.0) * s.p;
    return std::sqrt(A / (p + B)) * (1.0 - (p - s.p) / (2.0 * (p + B)));
  }
  const double a = sound_speed(s, gamma);
  return 1.0 / (s.rho * a) * std::pow(p / s.p, -(gamma + 1.0) / (2.0 * gamma));
}

}  // namespace

RiemannSolution solve_star(const PrimitiveState& left,
                           const PrimitiveState& right, double gamma) {
  if (!(left.rho > 0 && left.p > 0 && right.rho > 0 && right.p > 0))
    throw std::invalid_argument("solve_star: states must be positive");
  if (!(gamma > 1.0)) throw std::invalid_argument("solve_star: gamma must exceed 1");

  const double a_l = sound_speed(left, gamma);
  const double a_r = sound_speed(right, gamma);
  const double du = right.u - left.u;
  if (2.0 * (a_l + a_r) / (gamma - 1.0) <= du)
    throw std::invalid_argument("solve_star: vacuum-generating input states");

  RiemannSolution sol;
  sol.left = left;
  sol.right = right;
  sol.gamma = gamma;

  if (left.rho == right.rho && left.u == right.u && left.p == right.p) {
    sol.p_star = left.p;
    sol.u_star = left.u;
    sol.left_wave = WaveType::Rarefaction;
    sol.right_wave = WaveType::Rarefaction;
    return sol;
  }

  // two-rarefaction initial guess
  const double z = (gamma - 1.0) / (2.0 * gamma);
  double p = std::pow(
      (a_l + a_r - 0.5 * (gamma - 1.0) * du) /
          (a_l / std::pow(left.p, z) + a_r / std::pow(right.p, z)),
      1.0 / z);
  p = std::max(p, 1e-12 * std::min(left.p, right.p));

  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const double g = wave_function(p, left, gamma) +
                     wave_function(p, right, gamma) + du;
    const double dg = wave_function_derivative(p, left, gamma) +
                      wave_function_derivative(p, right, gamma);
    double p_next = p - g / dg;
    if (p_next <= 0) p_next = 0.5 * p;
    if (std::abs(p_next - p) < 1e-12 * p_next) {
      p = p_next;
      converged = true;
      break;
    }
    p = p_next;
  }
  if (!converged) {
    // bisection fallback on a widening bracket
    double lo = 1e-12 * std::min(left.p, right.p);
    double hi = std::max(left.p, right.p);
    auto g = [&](double q) {
      return wave_function(q, left, gamma) + wave_function(q, right, gamma) + du;
    };
    while (g(hi) < 0) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < 0 ? lo : hi) = mid;
    }
    p = 0.5 * (lo + hi);
  }

  sol.p_star = p;
  sol.u_star = 0.5 * (left.u + right.u) +
               0.5 * (wave_function(p, right, gamma) -
                      wave_function(p, left, gamma));
  sol.left_wave = p > left.p ? WaveType::Shock : WaveType::Rarefaction;
  sol.right_wave = p > right.p ? WaveType::Shock : WaveType::Rarefaction;
  return sol;
}

PrimitiveState sample(const RiemannSolution& sol, double xi) {
  const double g = sol.gamma;
  if (xi <= sol.u_star) {
    const PrimitiveState& s = sol.left;
    const double a = sound_speed(s, g);
    if (sol.left_wave == WaveType::Shock) {
      const double ratio = sol.p_star / s.p;
      const double S = s.u - a * std::sqrt((g + 1.0) / (2.0 * g) * ratio +
                                           (g - 1.0) / (2.0 * g));
      if (xi <= S) return s;
      const double beta = (g - 1.0) / (g + 1.0);
      return {s.rho * (ratio + beta) / (beta * ratio + 1.0), sol.u_star,
              sol.p_star};
    }
    const double a_star = a * std::pow(sol.p_star / s.p, (g - 1.0) / (2.0 * g));
    const double head = s.u - a;
    const double tail = sol.u_star - a_star;
    if (xi <= head) return s;
    if (xi >= tail)
      return {s.rho * std::pow(sol.p_star / s.p, 1.0 / g), sol.u_star,
              sol.p_star};
    // inside the fan
    const double u = 2.0 / (g + 1.0) * (a + 0.5 * (g - 1.0) * s.u + xi);
    const double a_fan = 2.0 / (g + 1.0) * (a + 0.5 * (g - 1.0) * (s.u - xi));
    const double rho = s.rho * std::pow(a_fan / a, 2.0 / (g - 1.0));
    return {rho, u, s.p * std::pow(a_fan / a, 2.0 * g / (g - 1.0))};
  }

  const PrimitiveState& s = sol.right;
  const double a = sound_speed(s, g);
  if (sol.right_wave == WaveType::Shock) {
    const double ratio = sol.p_star / s.p;
    const double S = s.u + a * std::sqrt((g + 1.0) / (2.0 * g) * ratio +
                                         (g - 1.0) / (2.0 * g));
    if (xi >= S) return s;
    const double beta = (g - 1.0) / (g + 1.0);
    return {s.rho * (ratio + beta) / (beta * ratio + 1.0), sol.u_star,
            sol.p_star};
  }
  const double a_star = a * std::pow(sol.p_star / s.p, (g - 1.0) / (2.0 * g));
  const double head = s.u + a;
  const double tail = sol.u_star + a_star;
  if (xi >= head) return s;
  if (xi <= tail)
    return {s.rho * std::pow(sol.p_star / s.p, 1.0 / g), sol.u_star,
            sol.p_star};
  const double u = 2.0 / (g + 1.0) * (-a + 0.5 * (g - 1.0) * s.u + xi);
  const double a_fan = 2.0 / (g + 1.0) * (a - 0.5 * (g - 1.0) * (s.u - xi));
  const double rho = s.rho * std::pow(a_fan / a, 2.0 / (g - 1.0));
  return {rho, u, s.p * std::pow(a_fan / a, 2.0 * g / (g - 1.0))};
}

std::vector<PrimitiveState> profile(const RiemannSolution& sol, double t,
                                    const std::vector<double>& positions) {
  if (!(t > 0)) throw std::invalid_argument("profile: t must be positive");
  std::vector<PrimitiveState> out;
  out.reserve(positions.size());
  for (double x : positions) out.push_back(sample(sol, x / t));
  return out;
}

CompareReport compare_profiles(const std::vector<ProfileSample>& sim,
                               const std::vector<ProfileSample>& exact,
                               int n_smear) {
  if (sim.size() != exact.size() || sim.empty())
    throw std::invalid_argument("compare_profiles: misaligned inputs");
  CompareReport report;

  const std::size_t n = exact.size();
  for (std::size_t i = 0; i < n; ++i) {
    report.rho_l1_full += std::abs(sim[i].rho - exact[i].rho) / exact[i].rho;
    report.theta_l1_full +=
        std::abs(sim[i].theta - exact[i].theta) / exact[i].theta;
  }
  report.rho_l1_full /= static_cast<double>(n);
  report.theta_l1_full /= static_cast<double>(n);

  // maximal constant runs of exact density
  const double run_tol = 1e-9;
  std::vector<PlateauWindow> runs;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n ||
        std::abs(exact[i].rho - exact[start].rho) > run_tol * exact[start].rho) {
      runs.push_back({start, i});
      start = i;
    }
  }
  // drop the runs touching the domain ends (undisturbed left/right states)
  for (const auto& run : runs) {
    if (run.begin == 0 || run.end == n) continue;
    const std::size_t margin = static_cast<std::size_t>(n_smear);
    if (run.end - run.begin <= 2 * margin) continue;
    report.windows.push_back({run.begin + margin, run.end - margin});
  }

  std::size_t count = 0;
  for (const auto& w : report.windows)
    for (std::size_t i = w.begin; i < w.end; ++i) {
      const double er = std::abs(sim[i].rho - exact[i].rho) / exact[i].rho;
      const double et =
          std::abs(sim[i].theta - exact[i].theta) / exact[i].theta;
      report.rho_linf_plateau = std::max(report.rho_linf_plateau, er);
      report.theta_linf_plateau = std::max(report.theta_linf_plateau, et);
      report.rho_l1_plateau += er;
      report.theta_l1_plateau += et;
      ++count;
    }
  if (count > 0) {
    report.rho_l1_plateau /= static_cast<double>(count);
    report.theta_l1_plateau /= static_cast<double>(count);
  }
  return report;
}

}  // namespace lbforge
