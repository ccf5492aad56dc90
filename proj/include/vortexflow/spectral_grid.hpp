#pragma once

#include <Eigen/Dense>
#include <memory>

namespace vortexflow {

// Equispaced periodic grid theta_k = 2 pi k / N on a circle of circumference
// 2 pi, with trigonometric (spectral) differentiation. N must be a power of
// two, at least 16. The derivative of the Nyquist mode is taken to be zero,
// which makes the differentiation matrix exactly antisymmetric.
class SpectralGrid {
 public:
  // Shared immutable instance per size.
  static std::shared_ptr<const SpectralGrid> get(int size);

  explicit SpectralGrid(int size);

  int size() const { return size_; }
  double spacing() const { return spacing_; }
  double theta(int k) const { return spacing_ * k; }
  const Eigen::VectorXd& thetas() const { return thetas_; }

  // Quadrature weight of every node (trapezoid rule on the periodic grid).
  double weight() const { return spacing_; }

  const Eigen::MatrixXd& diff_matrix() const { return diff_; }

  Eigen::VectorXd derivative(const Eigen::VectorXd& f) const { return diff_ * f; }
  Eigen::MatrixXcd derivative(const Eigen::MatrixXcd& f) const;

  // Periodic antiderivative of f - mean(f), normalised to vanish at theta_0.
  Eigen::VectorXd antiderivative(const Eigen::VectorXd& f) const;

  double integrate(const Eigen::VectorXd& f) const { return spacing_ * f.sum(); }
  double mean(const Eigen::VectorXd& f) const { return f.mean(); }

 private:
  int size_;
  double spacing_;
  Eigen::VectorXd thetas_;
  Eigen::MatrixXd diff_;
};

bool is_valid_grid_size(int size);

}  // namespace vortexflow
