#include "vortexflow/spectral_grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "vortexflow/error.hpp"

namespace vortexflow {

bool is_valid_grid_size(int size) { return size >= 16 && (size & (size - 1)) == 0; }

std::shared_ptr<const SpectralGrid> SpectralGrid::get(int size) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const SpectralGrid>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(size);
  if (it != cache.end()) return it->second;
  auto grid = std::make_shared<const SpectralGrid>(size);
  cache.emplace(size, grid);
  return grid;
}

SpectralGrid::SpectralGrid(int size) : size_(size) {
  if (!is_valid_grid_size(size)) {
    throw Error("grid size must be a power of two >= 16, got " + std::to_string(size), "grid.n_theta");
  }
  spacing_ = 2.0 * std::numbers::pi / size;
  thetas_.resize(size);
  for (int k = 0; k < size; ++k) thetas_[k] = spacing_ * k;

  // D_kl = 1/2 (-1)^(k-l) cot((k-l) h / 2); filled pairwise so D^T = -D holds bitwise.
  diff_ = Eigen::MatrixXd::Zero(size, size);
  for (int k = 0; k < size; ++k) {
    for (int l = k + 1; l < size; ++l) {
      const int d = k - l;
      const double sign = (d % 2 == 0) ? 1.0 : -1.0;
      const double value = 0.5 * sign / std::tan(0.5 * d * spacing_);
      diff_(k, l) = value;
      diff_(l, k) = -value;
    }
  }
}

Eigen::MatrixXcd SpectralGrid::derivative(const Eigen::MatrixXcd& f) const {
  Eigen::MatrixXcd out(f.rows(), f.cols());
  out.real() = diff_ * f.real();
  out.imag() = diff_ * f.imag();
  return out;
}

Eigen::VectorXd SpectralGrid::antiderivative(const Eigen::VectorXd& f) const {
  Eigen::FFT<double> fft;
  std::vector<double> in(f.data(), f.data() + f.size());
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, in);
  const int n = size_;
  std::vector<std::complex<double>> anti(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const int mode = (k <= n / 2) ? k : k - n;
    if (mode == 0 || k == n / 2) {
      anti[static_cast<std::size_t>(k)] = 0.0;
    } else {
      anti[static_cast<std::size_t>(k)] = spec[static_cast<std::size_t>(k)] / std::complex<double>(0.0, mode);
    }
  }
  std::vector<std::complex<double>> back;
  fft.inv(back, anti);
  Eigen::VectorXd out(n);
  for (int k = 0; k < n; ++k) out[k] = back[static_cast<std::size_t>(k)].real();
  out.array() -= out[0];
  return out;
}

}  // namespace vortexflow
