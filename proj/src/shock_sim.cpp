#include "lbforge/shock_sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lbforge {

namespace {
constexpr int kMaxQ = 256;
constexpr int kMaxBasis = 128;
constexpr int kMaxOrder = 16;
}  // namespace

Simulator::Simulator(LatticeModel model, ScenarioConfig config)
    : model_(std::move(model)), config_(config) {
  dim_ = model_.dimension;
  if (dim_ != 2 && dim_ != 3)
    throw std::invalid_argument("Simulator: model dimension must be 2 or 3");
  if (dim_ == 2 && config_.ny != 1)
    throw std::invalid_argument("Simulator: 2D models require ny = 1");
  if (!(config_.omega > 0.0 && config_.omega < 2.0))
    throw std::invalid_argument("Simulator: omega must be in (0, 2)");

  proj_ = build_projector(model_, model_.order);
  velocities_ = build_velocities(model_);
  q_ = static_cast<int>(velocities_.size());
  const int basis_count = static_cast<int>(proj_.basis.size());
  if (q_ > kMaxQ || basis_count > kMaxBasis || model_.order > kMaxOrder)
    throw std::invalid_argument("Simulator: model exceeds kernel size limits");

  for (const auto& dv : velocities_)
    for (int i = 0; i < dim_; ++i)
      ghost_ = std::max(ghost_, std::abs(dv.shift[static_cast<std::size_t>(i)]));
  if (config_.periodic_z) ghost_ = 0;
  nz_total_ = config_.nz + 2 * ghost_;
  if (config_.nz < 2 * std::max(ghost_, 1))
    throw std::invalid_argument("Simulator: nz too small for the model's shifts");

  // component -> grid axis: last model axis is the tube axis z
  const int axis_of_comp[3] = {0, dim_ == 3 ? 1 : 2, 2};
  emap_.assign(static_cast<std::size_t>(q_) * basis_count, 0.0);
  for (int i = 0; i < q_; ++i)
    for (int b = 0; b < basis_count; ++b)
      emap_[static_cast<std::size_t>(i) * basis_count + b] = proj_.equilibrium_map(i, b);
  basis_exp_.assign(static_cast<std::size_t>(basis_count) * dim_, 0);
  for (int b = 0; b < basis_count; ++b)
    for (int a = 0; a < dim_; ++a)
      basis_exp_[static_cast<std::size_t>(b) * dim_ + a] =
          proj_.basis[static_cast<std::size_t>(b)].exponents[static_cast<std::size_t>(a)];
  vel_flat_.assign(static_cast<std::size_t>(q_) * 3, 0.0);
  shift_flat_.assign(static_cast<std::size_t>(q_) * 3, 0);
  for (int i = 0; i < q_; ++i) {
    for (int a = 0; a < dim_; ++a) {
      const int axis = axis_of_comp[a];
      vel_flat_[static_cast<std::size_t>(i) * 3 + axis] =
          velocities_[static_cast<std::size_t>(i)].velocity[static_cast<std::size_t>(a)];
      shift_flat_[static_cast<std::size_t>(i) * 3 + axis] =
          velocities_[static_cast<std::size_t>(i)].shift[static_cast<std::size_t>(a)];
    }
  }

  const std::size_t total =
      static_cast<std::size_t>(config_.nx) * config_.ny * nz_total_ * q_;
  current_.assign(total, 0.0);
  scratch_.assign(total, 0.0);
  left_eq_ = discrete_equilibrium(proj_, config_.left_state);
  right_eq_ = discrete_equilibrium(proj_, config_.right_state);
}

std::size_t Simulator::node_offset(int x, int y, int z_total) const {
  return ((static_cast<std::size_t>(z_total) * config_.ny + y) * config_.nx + x) *
         q_;
}

void Simulator::initialize() {
  step_count_ = 0;
  const int half = config_.nz / 2;
  for (int z = 0; z < nz_total_; ++z) {
    const int zi = z - ghost_;  // interior index, may be in ghost range
    const bool left = zi < half;
    const std::vector<double>& eq = left ? left_eq_ : right_eq_;
    for (int y = 0; y < config_.ny; ++y)
      for (int x = 0; x < config_.nx; ++x)
        std::copy(eq.begin(), eq.end(), current_.begin() + static_cast<std::ptrdiff_t>(node_offset(x, y, z)));
  }
}

void Simulator::collide_kernel(bool parallel) {
  const int nx = config_.nx, ny = config_.ny;
  const int basis_count = static_cast<int>(proj_.basis.size());
  const double omega = config_.omega;
  const int n_nodes = nx * ny * config_.nz;
  const double* vel = vel_flat_.data();
  const double* emap = emap_.data();
  const int* bexp = basis_exp_.data();
  double* f_all = current_.data();
  int bad_node = -1;  // exceptions cannot cross the parallel region

#pragma omp parallel for schedule(static) if (parallel)
  for (int node = 0; node < n_nodes; ++node) {
    const int x = node % nx;
    const int y = (node / nx) % ny;
    const int z = node / (nx * ny) + ghost_;
    double* f = f_all + node_offset(x, y, z);

    double rho = 0.0, mx = 0.0, my = 0.0, mz = 0.0, e = 0.0;
    for (int i = 0; i < q_; ++i) {
      const double fi = f[i];
      const double vx = vel[i * 3 + 0], vy = vel[i * 3 + 1], vz = vel[i * 3 + 2];
      rho += fi;
      mx += fi * vx;
      my += fi * vy;
      mz += fi * vz;
      e += fi * (vx * vx + vy * vy + vz * vz);
    }
    const double ux = mx / rho, uy = my / rho, uz = mz / rho;
    const double u[3] = {ux, uy, uz};
    const double theta =
        (2.0 / dim_) * (e / rho - (ux * ux + uy * uy + uz * uz));
    if (!std::isfinite(rho) || !(rho > 0.0) || !std::isfinite(theta)) {
#pragma omp critical
      {
        if (bad_node < 0) bad_node = node;
      }
      continue;
    }

    // raw 1D Gaussian moments per axis: mu_k = u mu_{k-1} + (k-1) var mu_{k-2}
    const double var = theta / 2.0;
    double mu[3][kMaxOrder + 1];
    const int axis_of_comp[3] = {0, dim_ == 3 ? 1 : 2, 2};
    for (int a = 0; a < dim_; ++a) {
      const double ua = u[axis_of_comp[a]];
      mu[a][0] = 1.0;
      if (proj_.order >= 1) mu[a][1] = ua;
      for (int k = 2; k <= proj_.order; ++k)
        mu[a][k] = ua * mu[a][k - 1] + (k - 1) * var * mu[a][k - 2];
    }
    double targets[kMaxBasis];
    for (int b = 0; b < basis_count; ++b) {
      double t = 1.0;
      for (int a = 0; a < dim_; ++a) t *= mu[a][bexp[b * dim_ + a]];
      targets[b] = t;
    }
    for (int i = 0; i < q_; ++i) {
      double feq = 0.0;
      const double* row = emap + static_cast<std::size_t>(i) * basis_count;
      for (int b = 0; b < basis_count; ++b) feq += row[b] * targets[b];
      f[i] = (1.0 - omega) * f[i] + omega * rho * feq;
    }
  }
  if (bad_node >= 0) {
    const int x = bad_node % nx;
    const int y = (bad_node / nx) % ny;
    const int z = bad_node / (nx * ny);
    std::ostringstream os;
    os << "non-finite or non-positive state at step " << step_count_
       << " node (" << x << ", " << y << ", " << z << ")";
    throw std::runtime_error(os.str());
  }
}

void Simulator::stream_kernel(bool parallel) {
  const int nx = config_.nx, ny = config_.ny, nz = config_.nz;
  const int n_nodes = nx * ny * nz;
  const bool periodic_z = config_.periodic_z;
  const double* src = current_.data();
  double* dst = scratch_.data();
  const int* shifts = shift_flat_.data();

#pragma omp parallel for schedule(static) if (parallel)
  for (int node = 0; node < n_nodes; ++node) {
    const int x = node % nx;
    const int y = (node / nx) % ny;
    const int z = node / (nx * ny) + ghost_;
    double* out = dst + node_offset(x, y, z);
    for (int i = 0; i < q_; ++i) {
      int sx = x - shifts[i * 3 + 0];
      int sy = y - shifts[i * 3 + 1];
      int sz = z - shifts[i * 3 + 2];
      sx = (sx % nx + nx) % nx;
      sy = (sy % ny + ny) % ny;
      if (periodic_z) sz = (sz % nz + nz) % nz;
      out[i] = src[node_offset(sx, sy, sz) + i];
    }
  }
  std::swap(current_, scratch_);
}

void Simulator::freeze_ghosts() {
  if (ghost_ == 0) return;
  for (int z = 0; z < nz_total_; ++z) {
    if (z >= ghost_ && z < ghost_ + config_.nz) continue;
    const std::vector<double>& eq = z < ghost_ ? left_eq_ : right_eq_;
    for (int y = 0; y < config_.ny; ++y)
      for (int x = 0; x < config_.nx; ++x)
        std::copy(eq.begin(), eq.end(), current_.begin() + static_cast<std::ptrdiff_t>(node_offset(x, y, z)));
  }
}

void Simulator::step_parallel() {
  collide_kernel(true);
  stream_kernel(true);
  freeze_ghosts();
  ++step_count_;
}

// Straightforward per-node path through the equilibrium module; exists to
// cross-check the flattened kernels.
void Simulator::step_reference() {
  const int nx = config_.nx, ny = config_.ny, nz = config_.nz;
  std::vector<double> f(static_cast<std::size_t>(q_));
  for (int z = ghost_; z < ghost_ + nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        const std::size_t off = node_offset(x, y, z);
        std::copy_n(current_.begin() + static_cast<std::ptrdiff_t>(off), q_, f.begin());
        MacroState state = node_state(x, y, z - ghost_);
        const std::vector<double> feq = discrete_equilibrium(proj_, state);
        for (int i = 0; i < q_; ++i)
          current_[off + static_cast<std::size_t>(i)] =
              (1.0 - config_.omega) * f[static_cast<std::size_t>(i)] +
              config_.omega * feq[static_cast<std::size_t>(i)];
      }
  stream_kernel(false);
  freeze_ghosts();
  ++step_count_;
}

MacroState Simulator::node_state(int x, int y, int z_interior) const {
  const double* f = current_.data() + node_offset(x, y, z_interior + ghost_);
  double rho = 0.0, m[3] = {0.0, 0.0, 0.0}, e = 0.0;
  for (int i = 0; i < q_; ++i) {
    rho += f[i];
    double v2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double v = vel_flat_[static_cast<std::size_t>(i) * 3 + static_cast<std::size_t>(a)];
      m[a] += f[i] * v;
      v2 += v * v;
    }
    e += f[i] * v2;
  }
  if (!(rho > 0.0))
    throw std::runtime_error("node_state: non-positive density");
  MacroState state;
  state.rho = rho;
  double u2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    state.u[static_cast<std::size_t>(a)] = m[a] / rho;
    u2 += state.u[static_cast<std::size_t>(a)] * state.u[static_cast<std::size_t>(a)];
  }
  state.theta = (2.0 / dim_) * (e / rho - u2);
  return state;
}

Totals Simulator::interior_totals() const {
  Totals t;
  for (int z = ghost_; z < ghost_ + config_.nz; ++z)
    for (int y = 0; y < config_.ny; ++y)
      for (int x = 0; x < config_.nx; ++x) {
        const double* f = current_.data() + node_offset(x, y, z);
        for (int i = 0; i < q_; ++i) {
          t.mass += f[i];
          double v2 = 0.0;
          for (int a = 0; a < 3; ++a) {
            const double v =
                vel_flat_[static_cast<std::size_t>(i) * 3 + static_cast<std::size_t>(a)];
            t.momentum[static_cast<std::size_t>(a)] += f[i] * v;
            v2 += v * v;
          }
          t.energy += f[i] * v2;
        }
      }
  return t;
}

ProfileSnapshot Simulator::extract_profile() const {
  ProfileSnapshot snap;
  snap.step = step_count_;
  const int xc = config_.nx / 2, yc = config_.ny / 2;
  const double z0 = config_.nz / 2 - 0.5;  // interface plane, 0-based
  for (int k = 0; k < config_.nz; ++k) {
    const MacroState s = node_state(xc, yc, k);
    ProfileRow row;
    row.z_index = k + 1;
    row.z_phys = (k - z0) * model_.c;
    row.rho = s.rho;
    row.uz = s.u[2];
    row.theta = s.theta;
    row.p = s.rho * s.theta / 2.0;
    snap.rows.push_back(row);
  }
  return snap;
}

RunResult Simulator::run(bool use_parallel) {
  RunResult result;
  const auto t0 = std::chrono::steady_clock::now();
  result.snapshots.push_back(extract_profile());
  try {
    for (int s = 1; s <= config_.steps; ++s) {
      if (use_parallel)
        step_parallel();
      else
        step_reference();
      const bool cadence =
          config_.snapshot_every > 0 && s % config_.snapshot_every == 0;
      if (cadence || s == config_.steps)
        result.snapshots.push_back(extract_profile());
      result.steps_completed = s;
    }
  } catch (const std::runtime_error& e) {
    result.warning = std::string("aborted: ") + e.what();
  }
  // post-hoc check: fastest wave must not have reached the z-boundaries
  if (!config_.periodic_z && result.warning.empty()) {
    const auto& rows = result.snapshots.back().rows;
    const double dl = std::abs(rows.front().rho - config_.left_state.rho) /
                      config_.left_state.rho;
    const double dr = std::abs(rows.back().rho - config_.right_state.rho) /
                      config_.right_state.rho;
    if (dl > 1e-8 || dr > 1e-8)
      result.warning =
          "wave reached the z-boundary region; increase nz or reduce steps";
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

std::string profile_to_csv(const std::vector<ProfileSnapshot>& snapshots) {
  std::ostringstream os;
  os << "step,z_index,z_phys,rho,uz,theta,p\n";
  char buf[256];
  for (const auto& snap : snapshots)
    for (const auto& r : snap.rows) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                    snap.step, r.z_index, r.z_phys, r.rho, r.uz, r.theta, r.p);
      os << buf;
    }
  return os.str();
}

std::vector<ProfileSnapshot> profile_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "step,z_index,z_phys,rho,uz,theta,p")
    throw std::invalid_argument("profile CSV: bad header");
  std::vector<ProfileSnapshot> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ProfileRow row;
    int step = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%lf,%lf", &step,
                    &row.z_index, &row.z_phys, &row.rho, &row.uz, &row.theta,
                    &row.p) != 7)
      throw std::invalid_argument("profile CSV: bad row: " + line);
    if (out.empty() || out.back().step != step) {
      out.push_back({step, {}});
    }
    out.back().rows.push_back(row);
  }
  return out;
}

void save_profile_csv(const std::vector<ProfileSnapshot>& snapshots,
                      const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << profile_to_csv(snapshots);
}

std::vector<ProfileSnapshot> load_profile_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open profile CSV: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return profile_from_csv(ss.str());
}

}  // namespace lbforge
