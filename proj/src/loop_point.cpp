#include "vortexflow/loop_point.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vortexflow/error.hpp"

namespace vortexflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Moment map evaluated at every sample of x.
Eigen::VectorXd moment_map_samples(const CircleSpace& space, const Eigen::MatrixXcd& x) {
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(x.rows(), -space.tau());
  for (int j = 0; j < space.dim(); ++j) mu += 0.5 * space.weight(j) * x.col(j).cwiseAbs2();
  return mu;
}

void require_space(const CircleSpace& space, int dim) {
  if (space.dim() != dim) {
    throw Error("loop dimension " + std::to_string(dim) + " does not match space dimension " +
                std::to_string(space.dim()));
  }
}

}  // namespace

TangentAtLoop TangentAtLoop::zero(int n_theta, int dim) {
  return {Eigen::MatrixXcd::Zero(n_theta, dim), Eigen::VectorXd::Zero(n_theta)};
}

TangentAtLoop& TangentAtLoop::operator+=(const TangentAtLoop& o) {
  v += o.v;
  xi += o.xi;
  return *this;
}

TangentAtLoop& TangentAtLoop::operator-=(const TangentAtLoop& o) {
  v -= o.v;
  xi -= o.xi;
  return *this;
}

TangentAtLoop& TangentAtLoop::operator*=(double s) {
  v *= s;
  xi *= s;
  return *this;
}

TangentAtLoop operator+(TangentAtLoop a, const TangentAtLoop& b) { return a += b; }
TangentAtLoop operator-(TangentAtLoop a, const TangentAtLoop& b) { return a -= b; }
TangentAtLoop operator*(double s, TangentAtLoop a) { return a *= s; }

LoopPoint::LoopPoint(Eigen::MatrixXcd x, Eigen::VectorXd eta) : x_(std::move(x)), eta_(std::move(eta)) {
  grid_ = SpectralGrid::get(static_cast<int>(eta_.size()));
  if (x_.rows() != eta_.size()) throw Error("loop samples and gauge samples differ in length", "loop");
  if (x_.cols() < 1) throw Error("loop must have at least one complex dimension", "loop");
  if (!x_.allFinite() || !eta_.allFinite()) throw Error("loop has non-finite samples", "loop");
}

LoopPoint LoopPoint::constant(int n_theta, const Point& x, LieValue eta) {
  Eigen::MatrixXcd xs = x.transpose().replicate(n_theta, 1);
  return {std::move(xs), Eigen::VectorXd::Constant(n_theta, eta)};
}

LoopPoint& LoopPoint::operator+=(const TangentAtLoop& t) {
  require_same_grid(*this, t);
  x_ += t.v;
  eta_ += t.xi;
  return *this;
}

LoopPoint operator+(LoopPoint y, const TangentAtLoop& t) { return y += t; }

TangentAtLoop operator-(const LoopPoint& a, const LoopPoint& b) {
  require_same_grid(a, b);
  return {a.x() - b.x(), a.eta() - b.eta()};
}

void require_same_grid(const LoopPoint& a, const LoopPoint& b) {
  if (a.grid_size() != b.grid_size() || a.dim() != b.dim()) {
    throw Error("grid mismatch: " + std::to_string(a.grid_size()) + "x" + std::to_string(a.dim()) + " vs " +
                std::to_string(b.grid_size()) + "x" + std::to_string(b.dim()));
  }
}

void require_same_grid(const LoopPoint& base, const TangentAtLoop& t) {
  if (base.grid_size() != t.grid_size() || base.dim() != t.dim() || t.v.rows() != t.xi.size()) {
    throw Error("grid mismatch between loop and tangent vector");
  }
}

Eigen::VectorXd pack(const TangentAtLoop& t) {
  const int N = t.grid_size();
  const int n = t.dim();
  Eigen::VectorXd out((2 * n + 1) * N);
  for (int j = 0; j < n; ++j) {
    out.segment(2 * j * N, N) = t.v.col(j).real();
    out.segment((2 * j + 1) * N, N) = t.v.col(j).imag();
  }
  out.tail(N) = t.xi;
  return out;
}

Eigen::VectorXd pack(const LoopPoint& y) { return pack(TangentAtLoop{y.x(), y.eta()}); }

TangentAtLoop unpack_tangent(const Eigen::VectorXd& v, int n_theta, int dim) {
  if (v.size() != (2 * dim + 1) * n_theta) throw Error("packed vector has the wrong length");
  TangentAtLoop t = TangentAtLoop::zero(n_theta, dim);
  for (int j = 0; j < dim; ++j) {
    t.v.col(j).real() = v.segment(2 * j * n_theta, n_theta);
    t.v.col(j).imag() = v.segment((2 * j + 1) * n_theta, n_theta);
  }
  t.xi = v.tail(n_theta);
  return t;
}

LoopPoint unpack_loop(const Eigen::VectorXd& v, int n_theta, int dim) {
  TangentAtLoop t = unpack_tangent(v, n_theta, dim);
  return {std::move(t.v), std::move(t.xi)};
}

double l2_inner(const LoopPoint& base, const TangentAtLoop& a, const TangentAtLoop& b) {
  require_same_grid(base, a);
  require_same_grid(base, b);
  const double s = (a.v.real().array() * b.v.real().array()).sum() +
                   (a.v.imag().array() * b.v.imag().array()).sum() + a.xi.dot(b.xi);
  return base.grid().weight() * s;
}

double l2_norm(const LoopPoint& base, const TangentAtLoop& a) { return std::sqrt(l2_inner(base, a, a)); }

double l2_distance(const LoopPoint& a, const LoopPoint& b) { return l2_norm(a, a - b); }

double sup_distance(const LoopPoint& a, const LoopPoint& b) {
  require_same_grid(a, b);
  const double dx = (a.x() - b.x()).cwiseAbs().maxCoeff();
  const double de = (a.eta() - b.eta()).cwiseAbs().maxCoeff();
  return std::max(dx, de);
}

TangentAtLoop grad_action(const CircleSpace& space, const LoopPoint& y) {
  require_space(space, y.dim());
  const Eigen::MatrixXcd dx = y.grid().derivative(y.x());
  TangentAtLoop g = TangentAtLoop::zero(y.grid_size(), y.dim());
  for (int j = 0; j < y.dim(); ++j) {
    const double w = space.weight(j);
    // J (dx/dtheta - i eta w x) = i dx/dtheta + eta w x
    g.v.col(j).real() = -dx.col(j).imag().array() + w * y.eta().array() * y.x().col(j).real().array();
    g.v.col(j).imag() = dx.col(j).real().array() + w * y.eta().array() * y.x().col(j).imag().array();
  }
  g.xi = moment_map_samples(space, y.x());
  return g;
}

double action_relative(const CircleSpace& space, std::span<const LoopPoint> path, double max_step) {
  if (path.size() < 2) throw Error("path needs at least two samples", "path");
  require_space(space, path.front().dim());
  const LoopPoint& first = path.front();
  const SpectralGrid& grid = first.grid();
  double area = 0.0;
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    const LoopPoint& a = path[s];
    const LoopPoint& b = path[s + 1];
    require_same_grid(first, b);
    const double step = sup_distance(a, b);
    if (!(step < max_step)) {
      throw Error("consecutive path samples " + std::to_string(s) + "," + std::to_string(s + 1) +
                      " are " + std::to_string(step) + " apart (limit " + std::to_string(max_step) + ")",
                  "path");
    }
    // The integrand is affine in s along a straight segment, so the midpoint rule is exact.
    const Eigen::MatrixXcd delta = b.x() - a.x();
    const Eigen::MatrixXcd mid = 0.5 * (a.x() + b.x());
    const Eigen::MatrixXcd dmid = grid.derivative(mid);
    area += (delta.conjugate().array() * dmid.array()).imag().sum();
  }
  const LoopPoint& last = path.back();
  const double boundary = moment_map_samples(space, last.x()).dot(last.eta()) -
                          moment_map_samples(space, first.x()).dot(first.eta());
  return grid.weight() * (boundary - area);
}

GaugeLoop::GaugeLoop(Eigen::VectorXd periodic_phase, int winding)
    : periodic_(std::move(periodic_phase)), winding_(winding) {
  if (!is_valid_grid_size(static_cast<int>(periodic_.size()))) {
    throw Error("gauge loop has an invalid grid size", "gauge");
  }
  if (!periodic_.allFinite()) throw Error("gauge loop has non-finite samples", "gauge");
}

GaugeLoop GaugeLoop::identity(int n_theta) { return {Eigen::VectorXd::Zero(n_theta), 0}; }

GaugeLoop GaugeLoop::rotation(int n_theta, int winding) { return {Eigen::VectorXd::Zero(n_theta), winding}; }

GaugeLoop GaugeLoop::constant(int n_theta, double angle) {
  return {Eigen::VectorXd::Constant(n_theta, angle), 0};
}

Eigen::VectorXd GaugeLoop::phase() const {
  return periodic_ + static_cast<double>(winding_) * SpectralGrid::get(grid_size())->thetas();
}

Eigen::VectorXd GaugeLoop::angles() const {
  Eigen::VectorXd a = phase();
  for (double& v : a) {
    v = std::fmod(v, kTwoPi);
    if (v < 0) v += kTwoPi;
    if (v >= kTwoPi) v = 0.0;
  }
  return a;
}

Eigen::VectorXd GaugeLoop::phase_derivative() const {
  Eigen::VectorXd d = SpectralGrid::get(grid_size())->derivative(periodic_);
  d.array() += static_cast<double>(winding_);
  return d;
}

int GaugeLoop::measured_winding() const {
  const Eigen::VectorXd a = angles();
  const int N = grid_size();
  double total = 0.0;
  for (int k = 0; k < N; ++k) {
    double d = a[(k + 1) % N] - a[k];
    d -= kTwoPi * std::round(d / kTwoPi);
    total += d;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

GaugeLoop GaugeLoop::inverse() const { return {-periodic_, -winding_}; }

LoopPoint gauge_apply(const CircleSpace& space, const GaugeLoop& g, const LoopPoint& y) {
  require_space(space, y.dim());
  if (g.grid_size() != y.grid_size()) throw Error("grid mismatch between gauge loop and loop", "gauge");
  const Eigen::VectorXd phi = g.phase();
  Eigen::MatrixXcd x = y.x();
  for (int j = 0; j < y.dim(); ++j) {
    const double w = space.weight(j);
    for (int k = 0; k < y.grid_size(); ++k) x(k, j) *= std::polar(1.0, w * phi[k]);
  }
  return {std::move(x), y.eta() + g.phase_derivative()};
}

double holonomy(const LoopPoint& y) {
  double a = std::fmod(y.grid().integrate(y.eta()), kTwoPi);
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

GaugeLoop constant_eta_gauge(const LoopPoint& y) {
  return {-y.grid().antiderivative(y.eta()), 0};
}

PeriodProbe action_period_probe(const CircleSpace& space, const LoopPoint& y, int max_winding,
                                double residual_tol) {
  if (max_winding < 1) throw Error("max_winding must be at least 1", "max_winding");
  PeriodProbe probe;
  probe.increments.assign(static_cast<std::size_t>(max_winding) + 1, 0.0);
  double num = 0.0;
  double den = 0.0;
  for (int k = 1; k <= max_winding; ++k) {
    const LoopPoint target = gauge_apply(space, GaugeLoop::rotation(y.grid_size(), k), y);
    const int steps = static_cast<int>(std::ceil(sup_distance(y, target) / 0.25)) + 1;
    const TangentAtLoop delta = target - y;
    std::vector<LoopPoint> path;
    path.reserve(static_cast<std::size_t>(steps) + 1);
    for (int s = 0; s <= steps; ++s) path.push_back(y + (static_cast<double>(s) / steps) * delta);
    const double inc = action_relative(space, path);
    probe.increments[static_cast<std::size_t>(k)] = inc;
    num += k * inc;
    den += static_cast<double>(k) * k;
  }
  const double slope = num / den;
  double residual = 0.0;
  for (int k = 1; k <= max_winding; ++k) {
    residual = std::max(residual, std::abs(probe.increments[static_cast<std::size_t>(k)] - slope * k));
  }
  probe.period = std::abs(slope);
  probe.relative_residual = probe.period > 0 ? residual / (probe.period * max_winding) : INFINITY;
  if (!(probe.relative_residual <= residual_tol)) {
    throw Error("action increments are not linear in the winding (relative residual " +
                std::to_string(probe.relative_residual) + ")", "max_winding");
  }
  return probe;
}

}  // namespace vortexflow
