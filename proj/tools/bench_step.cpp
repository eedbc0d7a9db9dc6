// Timing comparison: flattened OpenMP step vs the serial reference step.
#include <chrono>
#include <cstdlib>
#include <iostream>

#include "lbforge/model_solver.hpp"
#include "lbforge/shock_sim.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace lbforge;

namespace {

LatticeModel solved_3d() {
  ModelSpec s;
  s.dimension = 3;
  s.order = 4;
  s.generators = {{{0, 0, 0}}, {{2, 0, 0}}, {{2, 2, 0}}, {{2, 2, 2}},
                  {{3, 0, 0}}, {{3, 3, 0}}, {{3, 3, 3}}, {{2, 2, 5}},
                  {{4, 4, 0}}, {{5, 0, 0}}};
  return solve(s).solutions.front();
}

template <typename F>
double time_steps(F&& fn, int steps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < steps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / steps;
}

}  // namespace

int main(int argc, char** argv) {
  int nx = 11, ny = 11, nz = 200, steps = 20;
  if (argc > 1) nz = std::atoi(argv[1]);
  if (argc > 2) steps = std::atoi(argv[2]);

  const LatticeModel model = solved_3d();
  ScenarioConfig cfg;
  cfg.nx = nx;
  cfg.ny = ny;
  cfg.nz = nz;
  cfg.steps = steps;

  std::cout << "grid " << nx << "x" << ny << "x" << nz << ", " << model.c
            << " scale, " << steps << " steps per measurement\n";
#ifdef _OPENMP
  std::cout << "OpenMP threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "OpenMP: not enabled\n";
#endif

  Simulator ref(model, cfg);
  ref.initialize();
  ref.step_reference();  // warm up
  const double t_ref = time_steps([&] { ref.step_reference(); }, steps);

  Simulator par(model, cfg);
  par.initialize();
  par.step_parallel();
  const double t_par = time_steps([&] { par.step_parallel(); }, steps);

  const double nodes = static_cast<double>(nx) * ny * nz;
  std::cout << "reference: " << t_ref * 1e3 << " ms/step  ("
            << nodes / t_ref / 1e6 << " Mnode/s)\n";
  std::cout << "parallel:  " << t_par * 1e3 << " ms/step  ("
            << nodes / t_par / 1e6 << " Mnode/s)\n";
  std::cout << "speedup:   " << t_ref / t_par << "x\n";
  return 0;
}
