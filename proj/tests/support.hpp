#pragma once

#include <random>

#include "vortexflow/critical.hpp"
#include "vortexflow/flow.hpp"
#include "vortexflow/loop_point.hpp"

namespace test_support {

using namespace vortexflow;

// Random band-limited loop: Fourier modes |k| <= modes, decaying coefficients.
inline LoopPoint random_loop(std::mt19937_64& rng, int N, int n, int modes = 4, double scale = 0.6) {
  std::normal_distribution<double> g(0.0, 1.0);
  const auto grid = SpectralGrid::get(N);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(N, n);
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(N);
  for (int mode = -modes; mode <= modes; ++mode) {
    const double s = scale / (1.0 + mode * mode);
    for (int j = 0; j < n; ++j) {
      const double re = g(rng);
      const double im = g(rng);
      for (int k = 0; k < N; ++k) x(k, j) += Complex(re * s, im * s) * std::polar(1.0, mode * grid->theta(k));
    }
    if (mode >= 0) {
      const double a = g(rng) * s;
      const double b = g(rng) * s;
      for (int k = 0; k < N; ++k) eta[k] += a * std::cos(mode * grid->theta(k)) + b * std::sin(mode * grid->theta(k));
    }
  }
  return {x, eta};
}

inline TangentAtLoop random_tangent(std::mt19937_64& rng, int N, int n, int modes = 4) {
  const LoopPoint y = random_loop(rng, N, n, modes, 1.0);
  return {y.x(), y.eta()};
}

// Smooth winding-free gauge loop.
inline GaugeLoop random_gauge(std::mt19937_64& rng, int N, int winding, int modes = 3) {
  std::normal_distribution<double> g(0.0, 1.0);
  const auto grid = SpectralGrid::get(N);
  Eigen::VectorXd phase = Eigen::VectorXd::Zero(N);
  for (int mode = 0; mode <= modes; ++mode) {
    const double a = g(rng) / (1.0 + mode);
    const double b = g(rng) / (1.0 + mode);
    for (int k = 0; k < N; ++k) phase[k] += a * std::cos(mode * grid->theta(k)) + b * std::sin(mode * grid->theta(k));
  }
  return {phase, winding};
}

}  // namespace test_support
