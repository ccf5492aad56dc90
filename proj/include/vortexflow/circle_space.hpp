#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace vortexflow {

using Complex = std::complex<double>;

// A point of X = C^n. Tangent vectors share the representation.
using Point = Eigen::VectorXcd;
using Tangent = Eigen::VectorXcd;

// Element of the Lie algebra of U(1), identified with R.
using LieValue = double;

// X = C^n with U(1) acting by z_j -> g^{w_j} z_j, omega = sum dx_j ^ dy_j,
// J = i and moment map mu(z) = 1/2 sum w_j |z_j|^2 - tau.
//
// Weights are positive so mu^{-1}(0) is a compact ellipsoid on which the
// action is locally free; 0 is then a regular value.
class CircleSpace {
 public:
  CircleSpace(std::vector<int> weights, double tau);

  int dim() const { return static_cast<int>(weights_.size()); }
  const std::vector<int>& weights() const { return weights_; }
  int weight(int j) const { return weights_[static_cast<std::size_t>(j)]; }
  double tau() const { return tau_; }

  bool operator==(const CircleSpace&) const = default;

 private:
  std::vector<int> weights_;
  double tau_;
};

double moment_map(const CircleSpace& space, const Point& p);

// The vector field generated by xi, defined by d/dt exp(-t xi) p at t = 0:
// components -i xi w_j z_j. With this sign d mu_xi = omega(xi~, .) and the
// loop exp(theta xi) p solves dx/dtheta = -xi~_x.
Tangent infinitesimal_action(const CircleSpace& space, LieValue xi, const Point& p);

// z_j -> exp(i w_j angle) z_j.
Point group_act(const CircleSpace& space, double angle, const Point& p);

// omega(v1, v2) = Im <v1, v2>_C.
double symplectic_form(const Tangent& v1, const Tangent& v2);

// omega(v1, J v2) = Re <v1, v2>_C.
double riemannian_pairing(const Tangent& v1, const Tangent& v2);

// d mu_p(v).
double moment_map_differential(const CircleSpace& space, const Point& p, const Tangent& v);

// Metric gradient of mu at p (the vector W z).
Tangent moment_map_gradient(const CircleSpace& space, const Point& p);

}  // namespace vortexflow
