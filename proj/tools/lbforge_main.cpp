#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lbforge/equilibrium.hpp"
#include "lbforge/lattice_model.hpp"
#include "lbforge/model_solver.hpp"
#include "lbforge/moment_system.hpp"
#include "lbforge/riemann.hpp"
#include "lbforge/shock_sim.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace lbforge;

// Published scale values; roots matching one of these get flagged in the
// solve log.
constexpr double kKnownScales[] = {0.819381, 0.421803};

LatticeModel load_model_checked(const std::string& path) {
  try {
    return load_model(path);
  } catch (const std::exception& e) {
    throw std::invalid_argument(e.what());
  }
}

std::vector<GeneratorVector> parse_generators(const std::string& text, int dim) {
  std::vector<GeneratorVector> out;
  std::stringstream groups(text);
  std::string item;
  while (std::getline(groups, item, ';')) {
    GeneratorVector g;
    std::stringstream comps(item);
    std::string c;
    while (std::getline(comps, c, ',')) g.components.push_back(std::stoi(c));
    if (g.dim() != dim)
      throw std::invalid_argument("generator '" + item + "' has wrong dimension");
    out.push_back(g.canonical());
  }
  return out;
}

PrimitiveState parse_state(const std::string& text) {
  PrimitiveState s;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &s.rho, &s.u, &s.p) != 3)
    throw std::invalid_argument("state must be 'rho,u,p': " + text);
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << text;
}

int cmd_omega_table(int max_m, int max_d, bool csv) {
  if (max_m > 16 || max_d > 4)
    throw std::invalid_argument("omega-table: max-m <= 16 and max-d <= 4");
  std::ostringstream os;
  if (csv) {
    os << "D";
    for (int m = 0; m <= max_m; ++m) os << ",m=" << m;
    os << "\n";
    for (int d = 1; d <= max_d; ++d) {
      os << d;
      for (int m = 0; m <= max_m; ++m) os << "," << equation_count(m, d);
      os << "\n";
    }
  } else {
    os << std::setw(6) << "";
    for (int m = 0; m <= max_m; ++m) os << std::setw(8) << ("m=" + std::to_string(m));
    os << "\n";
    for (int d = 1; d <= max_d; ++d) {
      os << std::setw(6) << ("D=" + std::to_string(d));
      for (int m = 0; m <= max_m; ++m) os << std::setw(8) << equation_count(m, d);
      os << "\n";
    }
  }
  std::cout << os.str();
  return 0;
}

int cmd_solve(int dim, int order, const std::string& generators, double zmax,
              double tolerance, const std::string& out) {
  ModelSpec spec;
  spec.dimension = dim;
  spec.order = order;
  spec.generators = parse_generators(generators, dim);
  SolveOptions opts;
  opts.z_max = zmax;
  opts.tolerance = tolerance;
  const SolveReport report = solve(spec, opts);
  for (std::size_t k = 0; k < report.solutions.size(); ++k) {
    const LatticeModel& m = report.solutions[k];
    double min_w = m.groups.front().weight;
    for (const auto& g : m.groups) min_w = std::min(min_w, g.weight);
    std::cout << "root: z=" << std::setprecision(15) << m.c * m.c
              << " c=" << m.c << " residual=" << report.residuals[k]
              << " min_weight=" << min_w;
    for (double known : kKnownScales)
      if (std::abs(m.c - known) / known < 1e-4) std::cout << "  [published]";
    std::cout << "\n";
  }
  for (const auto& rej : report.rejected_roots)
    std::cout << "rejected: z=" << rej.z << " (" << rej.reason << ")\n";
  if (report.solutions.empty()) {
    std::cerr << "solve: " << report.diagnostic << "\n";
    return 2;
  }
  if (!out.empty()) save_model(report.solutions.front(), out);
  return 0;
}

int cmd_verify(const std::string& model_path, int order) {
  const LatticeModel model = load_model_checked(model_path);
  const int m = order > 0 ? order : model.order;
  const VerifyReport rep = verify(model, m);
  auto idx_str = [](const MultiIndex& a) {
    std::string s = "(";
    for (int i = 0; i < a.dim(); ++i)
      s += (i ? "," : "") + std::to_string(a.exponents[static_cast<std::size_t>(i)]);
    return s + ")";
  };
  std::cout << "max relative residual: " << rep.max_relative_residual << " at "
            << idx_str(rep.worst_even) << "\n";
  std::cout << "max parity violation:  " << rep.max_parity_violation << " at "
            << idx_str(rep.worst_odd) << "\n";
  return 0;
}

int cmd_eq_check(const std::string& model_path, int order, int samples,
                 unsigned seed, double tolerance) {
  const LatticeModel model = load_model_checked(model_path);
  const int n = order > 0 ? order : model.order;
  const EquilibriumProjector proj = build_projector(model, n);
  const auto vs = build_velocities(model);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> du(-0.3, 0.3);
  std::uniform_real_distribution<double> dth(0.8, 1.2);
  std::uniform_real_distribution<double> drho(0.5, 4.0);
  double worst = 0.0;
  MultiIndex worst_idx;
  const auto indices = enumerate_all_indices(model.dimension, n);
  for (int t = 0; t < samples; ++t) {
    MacroState state;
    state.rho = drho(rng);
    for (int a = 0; a < model.dimension; ++a)
      state.u[static_cast<std::size_t>(a)] = du(rng) / std::sqrt(3.0);
    state.theta = dth(rng);
    const auto f = discrete_equilibrium(proj, state);
    for (const auto& a : indices) {
      double got = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        double term = f[i];
        for (int alpha = 0; alpha < model.dimension; ++alpha)
          for (int k = 0; k < a.exponents[static_cast<std::size_t>(alpha)]; ++k)
            term *= vs[i].velocity[static_cast<std::size_t>(alpha)];
        got += term;
      }
      const double want = maxwellian_moment(a, state);
      const double rel = std::abs(got - want) / std::max(std::abs(want), 1e-3);
      if (rel > worst) {
        worst = rel;
        worst_idx = a;
      }
    }
  }
  std::cout << "worst moment-contract violation over " << samples
            << " states: " << worst << "\n";
  return worst <= tolerance ? 0 : 2;
}

int cmd_shocktube(const std::string& model_path, const ScenarioConfig& cfg,
                  const std::string& out, bool serial) {
  const LatticeModel model = load_model_checked(model_path);
  Simulator sim(model, cfg);
  sim.initialize();
  const RunResult result = sim.run(!serial);
  if (!result.warning.empty()) std::cerr << "warning: " << result.warning << "\n";
  write_text(out, profile_to_csv(result.snapshots));
  std::cerr << "completed " << result.steps_completed << " steps in "
            << result.wall_seconds << " s\n";
  return result.warning.rfind("aborted", 0) == 0 ? 2 : 0;
}

int cmd_riemann(double gamma, const std::string& left, const std::string& right,
                double time, double zmin, double zmax, int nodes,
                const std::string& out) {
  const RiemannSolution sol =
      solve_star(parse_state(left), parse_state(right), gamma);
  std::vector<double> positions(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i)
    positions[static_cast<std::size_t>(i)] =
        zmin + (zmax - zmin) * (i + 0.5) / nodes;
  const auto states = profile(sol, time, positions);
  ProfileSnapshot snap;
  snap.step = 0;
  for (int i = 0; i < nodes; ++i) {
    const auto& s = states[static_cast<std::size_t>(i)];
    ProfileRow row;
    row.z_index = i + 1;
    row.z_phys = positions[static_cast<std::size_t>(i)];
    row.rho = s.rho;
    row.uz = s.u;
    row.theta = 2.0 * s.p / s.rho;
    row.p = s.p;
    snap.rows.push_back(row);
  }
  write_text(out, profile_to_csv({snap}));
  return 0;
}

void print_compare(const CompareReport& rep) {
  std::cout << "plateau windows: " << rep.windows.size() << "\n";
  for (const auto& w : rep.windows)
    std::cout << "  [" << w.begin << ", " << w.end << ")\n";
  std::cout << "rho   Linf plateau: " << rep.rho_linf_plateau << "\n";
  std::cout << "theta Linf plateau: " << rep.theta_linf_plateau << "\n";
  std::cout << "rho   L1 plateau:   " << rep.rho_l1_plateau << "\n";
  std::cout << "theta L1 plateau:   " << rep.theta_l1_plateau << "\n";
  std::cout << "rho   L1 full:      " << rep.rho_l1_full << "\n";
  std::cout << "theta L1 full:      " << rep.theta_l1_full << "\n";
}

std::vector<ProfileSample> samples_of(const ProfileSnapshot& snap) {
  std::vector<ProfileSample> out;
  for (const auto& r : snap.rows) out.push_back({r.rho, r.theta});
  return out;
}

int cmd_compare_files(const std::string& sim_path, const std::string& exact_path,
                      int smear) {
  const auto sim_prof = load_profile_csv(sim_path);
  const auto exact_prof = load_profile_csv(exact_path);
  if (sim_prof.empty() || exact_prof.empty())
    throw std::invalid_argument("compare: empty profile file");
  const CompareReport rep = compare_profiles(
      samples_of(sim_prof.back()), samples_of(exact_prof.back()), smear);
  print_compare(rep);
  return 0;
}

// Full pipeline: simulate, build the exact profile at t = steps, compare.
int cmd_compare_model(const std::string& model_path, const ScenarioConfig& cfg,
                      double gamma, int smear, const std::string& out_sim,
                      const std::string& out_exact) {
  if (cfg.steps <= 0)
    throw std::invalid_argument("compare: steps must be positive (t = 0 is "
                                "invalid for the oracle)");
  const LatticeModel model = load_model_checked(model_path);
  Simulator sim(model, cfg);
  sim.initialize();
  const RunResult result = sim.run();
  if (result.warning.rfind("aborted", 0) == 0) {
    std::cerr << "simulation " << result.warning << "\n";
    return 2;
  }
  if (!result.warning.empty()) std::cerr << "warning: " << result.warning << "\n";

  const PrimitiveState left{cfg.left_state.rho, cfg.left_state.u[2],
                            cfg.left_state.rho * cfg.left_state.theta / 2.0};
  const PrimitiveState right{cfg.right_state.rho, cfg.right_state.u[2],
                             cfg.right_state.rho * cfg.right_state.theta / 2.0};
  const RiemannSolution sol = solve_star(left, right, gamma);

  const ProfileSnapshot& last = result.snapshots.back();
  const double t = static_cast<double>(cfg.steps);
  ProfileSnapshot exact_snap;
  exact_snap.step = cfg.steps;
  std::vector<ProfileSample> sim_samples, exact_samples;
  for (const auto& row : last.rows) {
    const PrimitiveState s = sample(sol, row.z_phys / t);
    ProfileRow er = row;
    er.rho = s.rho;
    er.uz = s.u;
    er.theta = 2.0 * s.p / s.rho;
    er.p = s.p;
    exact_snap.rows.push_back(er);
    sim_samples.push_back({row.rho, row.theta});
    exact_samples.push_back({s.rho, 2.0 * s.p / s.rho});
  }
  if (!out_sim.empty()) save_profile_csv(result.snapshots, out_sim);
  if (!out_exact.empty()) save_profile_csv({exact_snap}, out_exact);
  print_compare(compare_profiles(sim_samples, exact_samples, smear));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
  if (const char* env = std::getenv("LBFORGE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif

  CLI::App app{"on-lattice discrete-velocity model toolkit"};
  app.require_subcommand(1);

  // omega-table
  int max_m = 7, max_d = 4;
  bool csv = false;
  auto* omega = app.add_subcommand("omega-table",
                                   "print the constraint-count table");
  omega->add_option("--max-m", max_m);
  omega->add_option("--max-d", max_d);
  omega->add_flag("--csv", csv);

  // solve
  int dim = 2, order = 4;
  std::string generators, out;
  double zmax = 4.0, tolerance = 1e-9;
  auto* solve_cmd =
      app.add_subcommand("solve", "solve a generator spec for weights and c");
  solve_cmd->add_option("--dim", dim)->required();
  solve_cmd->add_option("--order", order)->required();
  solve_cmd->add_option("--generators", generators, "semicolon-separated integer tuples")
      ->required();
  solve_cmd->add_option("--zmax", zmax);
  solve_cmd->add_option("--tolerance", tolerance);
  solve_cmd->add_option("--out", out);

  // verify
  std::string model_path;
  int verify_order = 0;
  auto* verify_cmd = app.add_subcommand("verify", "check a model's quadrature residuals");
  verify_cmd->add_option("--model", model_path)->required();
  verify_cmd->add_option("--order", verify_order);

  // eq-check
  std::string eq_model;
  int eq_order = 0, eq_samples = 100;
  unsigned eq_seed = 1;
  double eq_tol = 1e-8;
  auto* eq_cmd = app.add_subcommand("eq-check",
                                    "sample random states, report worst moment-contract violation");
  eq_cmd->add_option("--model", eq_model)->required();
  eq_cmd->add_option("--order", eq_order);
  eq_cmd->add_option("--samples", eq_samples);
  eq_cmd->add_option("--seed", eq_seed);
  eq_cmd->add_option("--tolerance", eq_tol);

  // shocktube
  std::string st_model, st_out;
  ScenarioConfig cfg;
  bool serial = false;
  auto* st_cmd = app.add_subcommand("shocktube", "run the shock-tube scenario");
  st_cmd->add_option("--model", st_model)->required();
  st_cmd->add_option("--nx", cfg.nx);
  st_cmd->add_option("--ny", cfg.ny);
  st_cmd->add_option("--nz", cfg.nz);
  st_cmd->add_option("--steps", cfg.steps);
  st_cmd->add_option("--omega", cfg.omega);
  st_cmd->add_option("--rho-left", cfg.left_state.rho);
  st_cmd->add_option("--rho-right", cfg.right_state.rho);
  st_cmd->add_option("--theta-left", cfg.left_state.theta);
  st_cmd->add_option("--theta-right", cfg.right_state.theta);
  st_cmd->add_option("--snapshot-every", cfg.snapshot_every);
  st_cmd->add_option("--out", st_out);
  st_cmd->add_flag("--serial", serial, "use the serial reference kernel");

  // riemann
  double gamma = 5.0 / 3.0, r_time = 120.0, zmin = -200.0, zmax_r = 200.0;
  int nodes = 800;
  std::string left = "4,0,2", right = "1,0,0.5", r_out;
  auto* r_cmd = app.add_subcommand("riemann", "exact Riemann profile as CSV");
  r_cmd->add_option("--gamma", gamma);
  r_cmd->add_option("--left", left, "rho,u,p");
  r_cmd->add_option("--right", right, "rho,u,p");
  r_cmd->add_option("--time", r_time);
  r_cmd->add_option("--zmin", zmin);
  r_cmd->add_option("--zmax", zmax_r);
  r_cmd->add_option("--nodes", nodes);
  r_cmd->add_option("--out", r_out);

  // compare
  std::string c_sim, c_exact, c_model, c_out_sim, c_out_exact;
  int smear = 30;
  double c_gamma = 5.0 / 3.0;
  ScenarioConfig c_cfg;
  auto* c_cmd = app.add_subcommand(
      "compare", "plateau error report (two CSVs, or full pipeline via --model)");
  c_cmd->add_option("--sim", c_sim);
  c_cmd->add_option("--exact", c_exact);
  c_cmd->add_option("--model", c_model);
  c_cmd->add_option("--smear", smear);
  c_cmd->add_option("--gamma", c_gamma);
  c_cmd->add_option("--nx", c_cfg.nx);
  c_cmd->add_option("--ny", c_cfg.ny);
  c_cmd->add_option("--nz", c_cfg.nz);
  c_cmd->add_option("--steps", c_cfg.steps);
  c_cmd->add_option("--omega", c_cfg.omega);
  c_cmd->add_option("--rho-left", c_cfg.left_state.rho);
  c_cmd->add_option("--rho-right", c_cfg.right_state.rho);
  c_cmd->add_option("--theta-left", c_cfg.left_state.theta);
  c_cmd->add_option("--theta-right", c_cfg.right_state.theta);
  c_cmd->add_option("--out-sim", c_out_sim);
  c_cmd->add_option("--out-exact", c_out_exact);

  CLI11_PARSE(app, argc, argv);

  try {
    if (omega->parsed()) return cmd_omega_table(max_m, max_d, csv);
    if (solve_cmd->parsed())
      return cmd_solve(dim, order, generators, zmax, tolerance, out);
    if (verify_cmd->parsed()) return cmd_verify(model_path, verify_order);
    if (eq_cmd->parsed())
      return cmd_eq_check(eq_model, eq_order, eq_samples, eq_seed, eq_tol);
    if (st_cmd->parsed()) return cmd_shocktube(st_model, cfg, st_out, serial);
    if (r_cmd->parsed())
      return cmd_riemann(gamma, left, right, r_time, zmin, zmax_r, nodes, r_out);
    if (c_cmd->parsed()) {
      if (!c_model.empty())
        return cmd_compare_model(c_model, c_cfg, c_gamma, smear, c_out_sim,
                                 c_out_exact);
      if (c_sim.empty() || c_exact.empty())
        throw std::invalid_argument(
            "compare: provide either --model or both --sim and --exact");
      return cmd_compare_files(c_sim, c_exact, smear);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
