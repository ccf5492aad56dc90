#include "vortexflow/cylinder.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "vortexflow/error.hpp"
#include "vortexflow/flow.hpp"

namespace vortexflow {

namespace {

double slice_mu_eta(const CircleSpace& space, const LoopPoint& y) {
  const TangentAtLoop g = grad_action(space, y);
  return y.grid().weight() * g.xi.dot(y.eta());
}

}  // namespace

void validate(const CylinderField& f) {
  if (f.time_nodes() < 6) throw Error("cylinder field needs at least 6 time nodes", "cylinder");
  if (!(f.dt > 0.0) || !std::isfinite(f.dt)) throw Error("cylinder time spacing must be positive", "cylinder");
  for (const LoopPoint& s : f.slices) require_same_grid(f.slices.front(), s);
}

std::vector<TangentAtLoop> time_derivative(const CylinderField& f) {
  validate(f);
  const int K = f.time_nodes();
  const double c = 1.0 / (12.0 * f.dt);
  auto combo = [&](std::initializer_list<std::pair<int, double>> terms) {
    TangentAtLoop t = TangentAtLoop::zero(f.grid_size(), f.slices.front().dim());
    for (auto [idx, w] : terms) {
      t.v += (c * w) * f.slices[static_cast<std::size_t>(idx)].x();
      t.xi += (c * w) * f.slices[static_cast<std::size_t>(idx)].eta();
    }
    return t;
  };
  std::vector<TangentAtLoop> out;
  out.reserve(static_cast<std::size_t>(K));
  out.push_back(combo({{0, -25}, {1, 48}, {2, -36}, {3, 16}, {4, -3}}));
  out.push_back(combo({{0, -3}, {1, -10}, {2, 18}, {3, -6}, {4, 1}}));
  for (int i = 2; i < K - 2; ++i) out.push_back(combo({{i - 2, 1}, {i - 1, -8}, {i + 1, 8}, {i + 2, -1}}));
  out.push_back(combo({{K - 1, 3}, {K - 2, 10}, {K - 3, -18}, {K - 4, 6}, {K - 5, -1}}));
  out.push_back(combo({{K - 1, 25}, {K - 2, -48}, {K - 3, 36}, {K - 4, -16}, {K - 5, 3}}));
  return out;
}

std::vector<double> gregory_weights(int k, double h) {
  if (k < 6) throw Error("Gregory quadrature needs at least 6 nodes");
  std::vector<double> w(static_cast<std::size_t>(k), h);
  const double ends[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  for (int i = 0; i < 3; ++i) {
    w[static_cast<std::size_t>(i)] = h * ends[i];
    w[static_cast<std::size_t>(k - 1 - i)] = h * ends[i];
  }
  return w;
}

VortexResidual vortex_residual(const CircleSpace& space, const CylinderField& f) {
  const std::vector<TangentAtLoop> dt = time_derivative(f);
  const std::vector<double> wt = gregory_weights(f.time_nodes(), f.dt);
  double dbar = 0.0;
  double curv = 0.0;
  for (int i = 0; i < f.time_nodes(); ++i) {
    const LoopPoint& y = f.slices[static_cast<std::size_t>(i)];
    const TangentAtLoop g = grad_action(space, y);
    const TangentAtLoop& d = dt[static_cast<std::size_t>(i)];
    const double h = y.grid().weight();
    dbar += wt[static_cast<std::size_t>(i)] * h * (d.v + g.v).squaredNorm();
    curv += wt[static_cast<std::size_t>(i)] * h * (d.xi + g.xi).squaredNorm();
  }
  return {std::sqrt(dbar), std::sqrt(curv)};
}

EnergyIdentity energy_identity_check(const CircleSpace& space, const CylinderField& f) {
  const std::vector<TangentAtLoop> dt = time_derivative(f);
  const std::vector<double> wt = gregory_weights(f.time_nodes(), f.dt);
  EnergyIdentity e;
  double area = 0.0;
  for (int i = 0; i < f.time_nodes(); ++i) {
    const LoopPoint& y = f.slices[static_cast<std::size_t>(i)];
    const TangentAtLoop g = grad_action(space, y);
    const TangentAtLoop& d = dt[static_cast<std::size_t>(i)];
    const double h = y.grid().weight();
    const double w = wt[static_cast<std::size_t>(i)];
    // |D_theta u| = |J D_theta u| and J D_theta u is the loop part of the gradient.
    e.lhs += w * 0.5 * h * (d.v.squaredNorm() + g.v.squaredNorm() + d.xi.squaredNorm() + g.xi.squaredNorm());
    e.residual += w * 0.5 * h * ((d.v + g.v).squaredNorm() + (d.xi + g.xi).squaredNorm());
    const Eigen::MatrixXcd dx = y.grid().derivative(y.x());
    area += w * h * (d.v.conjugate().array() * dx.array()).imag().sum();
  }
  e.topological = area - slice_mu_eta(space, f.slices.back()) + slice_mu_eta(space, f.slices.front());
  e.rhs = e.residual + e.topological;
  e.gap = std::abs(e.lhs - e.rhs);
  return e;
}

CylinderField trajectory_to_cylinder(const Trajectory& traj) {
  if (traj.size() < 6) throw Error("trajectory too short for a cylinder field", "trajectory");
  const double dt = traj.times[1] - traj.times[0];
  for (std::size_t i = 1; i < traj.size(); ++i) {
    if (std::abs(traj.times[i] - traj.times[i - 1] - dt) > 1e-9 * (1.0 + std::abs(traj.times[i]))) {
      throw Error("trajectory times are not uniformly spaced", "trajectory");
    }
  }
  return {traj.times.front(), dt, traj.states};
}

CylinderField constant_cylinder(const LoopPoint& y, int time_nodes, double t_length) {
  CylinderField f{0.0, t_length / (time_nodes - 1), std::vector<LoopPoint>(static_cast<std::size_t>(time_nodes), y)};
  validate(f);
  return f;
}

CylinderField random_smooth_field(const CircleSpace& space, int n_theta, int time_nodes, double t_length,
                                  std::uint64_t seed) {
  constexpr int kModes = 3;
  constexpr int kTimeDegree = 2;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = space.dim();
  const auto grid = SpectralGrid::get(n_theta);
  // coefficient c[j][mode][p] of e^{i mode theta} * {cos, sin}(p pi t / t_length)
  const int n_modes = 2 * kModes + 1;
  const int n_time = 2 * kTimeDegree + 1;
  std::vector<Complex> cx(static_cast<std::size_t>(n * n_modes * n_time));
  for (auto& c : cx) {
    const double re = normal(rng);
    const double im = normal(rng);
    c = Complex(re, im) * 0.3;
  }
  std::vector<double> ce(static_cast<std::size_t>(n_modes * n_time * 2));
  for (auto& c : ce) c = 0.3 * normal(rng);

  auto time_basis = [&](int q, double t) {
    const double s = std::numbers::pi * t / t_length;
    if (q == 0) return 1.0;
    const int p = (q + 1) / 2;
    return (q % 2 == 1) ? std::cos(p * s) : std::sin(p * s);
  };

  CylinderField f;
  f.t0 = 0.0;
  f.dt = t_length / (time_nodes - 1);
  for (int i = 0; i < time_nodes; ++i) {
    const double t = f.dt * i;
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n_theta, n);
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(n_theta);
    for (int k = 0; k < n_theta; ++k) {
      const double th = grid->theta(k);
      for (int mi = 0; mi < n_modes; ++mi) {
        const int mode = mi - kModes;
        const Complex e = std::polar(1.0, mode * th) / (1.0 + std::abs(mode));
        for (int q = 0; q < n_time; ++q) {
          const double b = time_basis(q, t);
          for (int j = 0; j < n; ++j) {
            x(k, j) += cx[static_cast<std::size_t>((j * n_modes + mi) * n_time + q)] * e * b;
          }
          const std::size_t ei = static_cast<std::size_t>((mi * n_time + q) * 2);
          eta[k] += (ce[ei] * std::cos(mode * th) + ce[ei + 1] * std::sin(mode * th)) * b / (1.0 + std::abs(mode));
        }
      }
    }
    f.slices.emplace_back(std::move(x), std::move(eta));
  }
  validate(f);
  return f;
}

}  // namespace vortexflow
