#include "vortexflow/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "vortexflow/error.hpp"

namespace vortexflow {

namespace {

std::vector<int> fixed_coordinates(const std::vector<int>& weights, int m, int k) {
  std::vector<int> out;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if ((static_cast<long long>(k) * weights[j]) % m == 0) out.push_back(static_cast<int>(j));
  }
  return out;
}

long long positive_mod(long long a, long long m) { return ((a % m) + m) % m; }

}  // namespace

SectorLabel make_sector(const CircleSpace& space, int m, int k) {
  if (m < 1) throw Error("sector order must be positive", "sector.m");
  k = static_cast<int>(positive_mod(k, m));
  const int g = std::gcd(m, k);
  SectorLabel s;
  s.m = m / g;
  s.k = k / g;
  s.fixed_dims = fixed_coordinates(space.weights(), s.m, s.k);
  if (s.fixed_dims.empty()) {
    throw Error("sector (" + std::to_string(s.m) + "," + std::to_string(s.k) + ") has no fixed points on mu^-1(0)",
                "sector");
  }
  return s;
}

SectorLabel inverse_sector(const CircleSpace& space, const SectorLabel& s) {
  return make_sector(space, s.m, s.m - s.k);
}

std::vector<SectorLabel> enumerate_sectors(const CircleSpace& space) {
  const int max_w = *std::max_element(space.weights().begin(), space.weights().end());
  std::vector<SectorLabel> out;
  for (int m = 1; m <= max_w; ++m) {
    const bool divides = std::any_of(space.weights().begin(), space.weights().end(),
                                     [m](int w) { return w % m == 0; });
    if (!divides) continue;
    for (int k = 0; k < m; ++k) {
      if (std::gcd(m, k) != 1) continue;
      out.push_back(make_sector(space, m, k));
    }
  }
  return out;
}

LoopPoint critical_loop(const CircleSpace& space, const Point& base, LieValue eta0, int n_theta) {
  if (base.size() != space.dim()) throw Error("base point dimension mismatch", "base");
  const auto grid = SpectralGrid::get(n_theta);
  Eigen::MatrixXcd x(n_theta, space.dim());
  for (int k = 0; k < n_theta; ++k) x.row(k) = group_act(space, eta0 * grid->theta(k), base).transpose();
  return {std::move(x), Eigen::VectorXd::Constant(n_theta, eta0)};
}

CriticalDatum find_critical(const CircleSpace& space, const SectorLabel& sector, const Point& seed, int n_theta) {
  if (seed.size() != space.dim()) throw Error("seed dimension mismatch", "seed");
  Point p = Point::Zero(space.dim());
  for (int j : sector.fixed_dims) p[j] = seed[j];
  double a = 0.0;
  for (int j : sector.fixed_dims) a += 0.5 * space.weight(j) * std::norm(p[j]);
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error("no zero of the moment map on the fixed subspace along the ray from the seed", "seed");
  }
  // mu(s p) = a s^2 - tau; start from the closed-form root and polish.
  double s = std::sqrt(space.tau() / a);
  for (int it = 0; it < 3; ++it) {
    const double f = moment_map(space, s * p);
    const double df = 2.0 * a * s;
    s -= f / df;
  }
  p *= s;
  CriticalDatum d{sector, p, sector.eta0(), critical_loop(space, p, sector.eta0(), n_theta)};
  const double residual = l2_norm(d.loop, grad_action(space, d.loop));
  if (!(residual <= 1e-8)) {
    throw Error("critical loop residual " + std::to_string(residual) + " above tolerance", "seed");
  }
  return d;
}

CriticalMatch nearest_critical(const CircleSpace& space, const LoopPoint& y, double max_distance) {
  const int N = y.grid_size();
  const SpectralGrid& grid = y.grid();
  const double eta_mean = grid.mean(y.eta());
  std::optional<CriticalMatch> best;
  for (const SectorLabel& sector : enumerate_sectors(space)) {
    const double base_eta = sector.eta0();
    const double eta0 = base_eta + std::round(eta_mean - base_eta);
    Point p = Point::Zero(space.dim());
    for (int j : sector.fixed_dims) {
      Complex acc = 0.0;
      for (int k = 0; k < N; ++k) acc += std::polar(1.0, -space.weight(j) * eta0 * grid.theta(k)) * y.x()(k, j);
      p[j] = acc / static_cast<double>(N);
    }
    double a = 0.0;
    for (int j : sector.fixed_dims) a += 0.5 * space.weight(j) * std::norm(p[j]);
    if (!(a > 1e-300)) continue;
    p *= std::sqrt(space.tau() / a);
    CriticalDatum d{sector, p, eta0, critical_loop(space, p, eta0, N)};
    const double dist = l2_distance(y, d.loop);
    if (!best || dist < best->distance) best = CriticalMatch{std::move(d), dist};
  }
  if (!best || !(best->distance <= max_distance)) {
    throw Error("no critical loop within distance " + std::to_string(max_distance) + " (unclassified limit)",
                "limit");
  }
  return *best;
}

Eigen::MatrixXd hessian_matrix(const CircleSpace& space, const LoopPoint& y) {
  if (space.dim() != y.dim()) throw Error("loop dimension does not match space");
  const int N = y.grid_size();
  const int n = y.dim();
  const Eigen::MatrixXd& D = y.grid().diff_matrix();
  const int eta_off = 2 * n * N;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero((2 * n + 1) * N, (2 * n + 1) * N);
  for (int j = 0; j < n; ++j) {
    const double w = space.weight(j);
    const int re = 2 * j * N;
    const int im = (2 * j + 1) * N;
    h.block(re, im, N, N) = -D;
    h.block(im, re, N, N) = D;
    for (int k = 0; k < N; ++k) {
      h(re + k, re + k) = w * y.eta()[k];
      h(im + k, im + k) = w * y.eta()[k];
      const double dre = w * y.x()(k, j).real();
      const double dim = w * y.x()(k, j).imag();
      h(re + k, eta_off + k) = dre;
      h(eta_off + k, re + k) = dre;
      h(im + k, eta_off + k) = dim;
      h(eta_off + k, im + k) = dim;
    }
  }
  return h;
}

Eigen::MatrixXd hessian_matrix(const CircleSpace& space, const CriticalDatum& crit) {
  Eigen::MatrixXd h = hessian_matrix(space, crit.loop);
  return 0.5 * (h + h.transpose());
}

double symmetry_residual(const Eigen::MatrixXd& h) { return (h - h.transpose()).cwiseAbs().maxCoeff(); }

HessianReport spectral_report(const Eigen::MatrixXd& h, double rank_tol) {
  if (h.rows() != h.cols()) throw Error("Hessian must be square");
  if (symmetry_residual(h) > 1e-10) throw Error("Hessian is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigenvalue solve failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  HessianReport r;
  r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  const double norm = ev.cwiseAbs().maxCoeff();
  r.rank_tol = rank_tol > 0.0 ? rank_tol : 1e-6 * norm;
  r.gap = std::numeric_limits<double>::infinity();
  for (double l : r.eigenvalues) {
    if (std::abs(l) <= r.rank_tol) {
      ++r.kernel_dim;
    } else {
      r.gap = std::min(r.gap, std::abs(l));
    }
  }
  if (!(r.gap >= 10.0 * r.rank_tol) || !std::isfinite(r.gap)) {
    throw Error("spectral gap " + std::to_string(r.gap) + " not separated from rank tolerance " +
                    std::to_string(r.rank_tol),
                "rank_tol");
  }
  return r;
}

Rational degree_shift(const SectorLabel& sector, const std::vector<int>& rep_weights) {
  Rational total(0);
  for (int w : rep_weights) total += Rational(positive_mod(static_cast<long long>(sector.k) * w, sector.m), sector.m);
  return total;
}

Rational degree_shift_CR(const CircleSpace& space, const SectorLabel& sector) {
  return degree_shift(sector, space.weights());
}

int non_fixed_count(const SectorLabel& sector, const std::vector<int>& rep_weights) {
  int count = 0;
  for (int w : rep_weights) count += positive_mod(static_cast<long long>(sector.k) * w, sector.m) != 0;
  return count;
}

}  // namespace vortexflow
