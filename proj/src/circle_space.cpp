#include "vortexflow/circle_space.hpp"

#include <cmath>
#include <string>

#include "vortexflow/error.hpp"

namespace vortexflow {

CircleSpace::CircleSpace(std::vector<int> weights, double tau)
    : weights_(std::move(weights)), tau_(tau) {
  if (weights_.empty()) throw Error("weights must be non-empty", "space.weights");
  for (int w : weights_) {
    if (w < 1) throw Error("weights must be positive integers, got " + std::to_string(w), "space.weights");
  }
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) throw Error("tau must be positive and finite", "space.tau");
}

double moment_map(const CircleSpace& space, const Point& p) {
  double s = 0.0;
  for (int j = 0; j < space.dim(); ++j) s += space.weight(j) * std::norm(p[j]);
  return 0.5 * s - space.tau();
}

Tangent infinitesimal_action(const CircleSpace& space, LieValue xi, const Point& p) {
  Tangent v(space.dim());
  for (int j = 0; j < space.dim(); ++j) v[j] = Complex(0.0, -xi * space.weight(j)) * p[j];
  return v;
}

Point group_act(const CircleSpace& space, double angle, const Point& p) {
  Point q(space.dim());
  for (int j = 0; j < space.dim(); ++j) q[j] = std::polar(1.0, space.weight(j) * angle) * p[j];
  return q;
}

double symplectic_form(const Tangent& v1, const Tangent& v2) {
  return v1.dot(v2).imag();  // Eigen's dot conjugates the first argument
}

double riemannian_pairing(const Tangent& v1, const Tangent& v2) { return v1.dot(v2).real(); }

double moment_map_differential(const CircleSpace& space, const Point& p, const Tangent& v) {
  double s = 0.0;
  for (int j = 0; j < space.dim(); ++j) s += space.weight(j) * (std::conj(p[j]) * v[j]).real();
  return s;
}

Tangent moment_map_gradient(const CircleSpace& space, const Point& p) {
  Tangent g(space.dim());
  for (int j = 0; j < space.dim(); ++j) g[j] = static_cast<double>(space.weight(j)) * p[j];
  return g;
}

}  // namespace vortexflow
