#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "vortexflow/circle_space.hpp"
#include "vortexflow/spectral_grid.hpp"

namespace vortexflow {

// A tangent vector (v, xi) at a loop: v is a section of x^*TX sampled on the
// grid (N x n), xi its Lie-algebra part (N).
struct TangentAtLoop {
  Eigen::MatrixXcd v;
  Eigen::VectorXd xi;

  static TangentAtLoop zero(int n_theta, int dim);

  int grid_size() const { return static_cast<int>(xi.size()); }
  int dim() const { return static_cast<int>(v.cols()); }

  TangentAtLoop& operator+=(const TangentAtLoop& o);
  TangentAtLoop& operator-=(const TangentAtLoop& o);
  TangentAtLoop& operator*=(double s);
};

TangentAtLoop operator+(TangentAtLoop a, const TangentAtLoop& b);
TangentAtLoop operator-(TangentAtLoop a, const TangentAtLoop& b);
TangentAtLoop operator*(double s, TangentAtLoop a);

// A sampled point of C^inf(S^1, X x g): the loop x(theta) and the connection
// coefficient eta(theta) of A = d + eta dtheta.
class LoopPoint {
 public:
  LoopPoint(Eigen::MatrixXcd x, Eigen::VectorXd eta);

  static LoopPoint constant(int n_theta, const Point& x, LieValue eta);

  int grid_size() const { return static_cast<int>(eta_.size()); }
  int dim() const { return static_cast<int>(x_.cols()); }
  const SpectralGrid& grid() const { return *grid_; }

  const Eigen::MatrixXcd& x() const { return x_; }
  const Eigen::VectorXd& eta() const { return eta_; }
  Eigen::MatrixXcd& x() { return x_; }
  Eigen::VectorXd& eta() { return eta_; }

  Point sample(int k) const { return x_.row(k).transpose(); }

  LoopPoint& operator+=(const TangentAtLoop& t);

 private:
  Eigen::MatrixXcd x_;
  Eigen::VectorXd eta_;
  std::shared_ptr<const SpectralGrid> grid_;
};

LoopPoint operator+(LoopPoint y, const TangentAtLoop& t);
TangentAtLoop operator-(const LoopPoint& a, const LoopPoint& b);

void require_same_grid(const LoopPoint& a, const LoopPoint& b);
void require_same_grid(const LoopPoint& base, const TangentAtLoop& t);

// Real coordinates: for each j the block (Re x_j(theta_k))_k, (Im x_j(theta_k))_k,
// then (eta(theta_k))_k. Size (2n + 1) N.
Eigen::VectorXd pack(const TangentAtLoop& t);
Eigen::VectorXd pack(const LoopPoint& y);
TangentAtLoop unpack_tangent(const Eigen::VectorXd& v, int n_theta, int dim);
LoopPoint unpack_loop(const Eigen::VectorXd& v, int n_theta, int dim);

// int_{S^1} (omega(v1, J v2) + <xi1, xi2>) dtheta by the periodic trapezoid rule.
double l2_inner(const LoopPoint& base, const TangentAtLoop& a, const TangentAtLoop& b);
double l2_norm(const LoopPoint& base, const TangentAtLoop& a);
double l2_distance(const LoopPoint& a, const LoopPoint& b);
double sup_distance(const LoopPoint& a, const LoopPoint& b);

// L2 gradient (J(dx/dtheta + eta~_x), mu(x)).
TangentAtLoop grad_action(const CircleSpace& space, const LoopPoint& y);

// Ltilde(end) - Ltilde(start) along the piecewise-linear path through `path`.
// Consecutive samples must be closer than `max_step` in sup norm.
double action_relative(const CircleSpace& space, std::span<const LoopPoint> path, double max_step = 0.5);

// A loop in U(1): g(theta) = exp(i phase(theta)), phase = winding * theta + periodic part.
class GaugeLoop {
 public:
  GaugeLoop(Eigen::VectorXd periodic_phase, int winding);

  static GaugeLoop identity(int n_theta);
  // g(theta) = exp(i winding theta).
  static GaugeLoop rotation(int n_theta, int winding);
  // Constant g = exp(i angle).
  static GaugeLoop constant(int n_theta, double angle);

  int grid_size() const { return static_cast<int>(periodic_.size()); }
  int winding() const { return winding_; }
  const Eigen::VectorXd& periodic_phase() const { return periodic_; }

  Eigen::VectorXd phase() const;
  // Sampled angles reduced to [0, 2 pi).
  Eigen::VectorXd angles() const;
  // g^{-1} dg/dtheta as an element of g = R.
  Eigen::VectorXd phase_derivative() const;
  // Total wrapped phase increment around the grid divided by 2 pi.
  int measured_winding() const;

  GaugeLoop inverse() const;

 private:
  Eigen::VectorXd periodic_;
  int winding_;
};

// g . (x, eta) = (g x, eta + g^{-1} dg/dtheta).
LoopPoint gauge_apply(const CircleSpace& space, const GaugeLoop& g, const LoopPoint& y);

// Holonomy exp(i int eta dtheta) as an angle in [0, 2 pi).
double holonomy(const LoopPoint& y);

// Winding-zero gauge loop taking y to a representative with constant eta.
GaugeLoop constant_eta_gauge(const LoopPoint& y);

struct PeriodProbe {
  double period = 0.0;               // N_[omega - mu] > 0
  std::vector<double> increments;    // Ltilde(g_k y) - Ltilde(y), k = 0..max_winding
  double relative_residual = 0.0;    // of the linear fit in k
};

// Measures the action period from the action increments along paths from y
// to its images under winding-k gauge loops.
PeriodProbe action_period_probe(const CircleSpace& space, const LoopPoint& y, int max_winding,
                                double residual_tol = 1e-6);

}  // namespace vortexflow
