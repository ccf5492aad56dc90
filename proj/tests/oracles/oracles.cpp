#include "oracles/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace oracle {

double moment_map(const std::vector<int>& weights, double tau, const std::vector<std::complex<double>>& z) {
  double s = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double x = z[j].real();
    const double y = z[j].imag();
    s += weights[j] * (x * x + y * y);
  }
  return s / 2.0 - tau;
}

namespace {

// Derivative multiplier of the discrete mode p: i * kappa(p), kappa in (-N/2, N/2), Nyquist -> 0.
int kappa(long long p, int N) {
  long long r = ((p % N) + N) % N;
  if (2 * r == N) return 0;
  return static_cast<int>(2 * r > N ? r - N : r);
}

void push(std::vector<Eigen1>& out, double v, int mode, int mult) {
  for (int i = 0; i < mult; ++i) out.push_back({v, mode});
}

}  // namespace

std::vector<Eigen1> trivial_sector_spectrum(const std::vector<int>& weights,
                                            const std::vector<std::complex<double>>& x0, int N) {
  const int n = static_cast<int>(weights.size());
  double a2 = 0.0;
  for (int j = 0; j < n; ++j) a2 += std::norm(static_cast<double>(weights[j]) * x0[j]);
  const double a = std::sqrt(a2);
  std::vector<Eigen1> out;
  for (int q : {0, N / 2}) {
    push(out, a, q, 1);
    push(out, -a, q, 1);
    push(out, 0.0, q, 2 * n - 1);
  }
  for (int q = 1; q < N / 2; ++q) {
    const double r = std::sqrt(static_cast<double>(q) * q + a2);
    push(out, 0.0, q, 2);
    push(out, r, q, 2);
    push(out, -r, q, 2);
    push(out, q, q, 2 * (n - 1));
    push(out, -q, q, 2 * (n - 1));
  }
  std::sort(out.begin(), out.end(), [](const Eigen1& x, const Eigen1& y) { return x.value < y.value; });
  return out;
}

std::vector<Eigen1> fourier_block_spectrum(const std::vector<int>& weights, const std::vector<std::complex<double>>& x0,
                                           int m, int k, int N) {
  const int n = static_cast<int>(weights.size());
  const double eta0 = static_cast<double>(k) / m;
  std::vector<int> fixed;
  std::vector<int> moving;
  for (int j = 0; j < n; ++j) {
    ((static_cast<long long>(k) * weights[j]) % m == 0 ? fixed : moving).push_back(j);
  }
  std::vector<Eigen1> out;

  // Coordinates moved by the holonomy carry no coupling: v_j mode p has eigenvalue -kappa(p) + s_j.
  for (int j : moving) {
    const double s = weights[j] * eta0;
    for (int p = 0; p < N; ++p) push(out, -kappa(p, N) + s, std::abs(kappa(p, N)), 2);
  }

  const int f = static_cast<int>(fixed.size());
  std::vector<long long> shift(static_cast<std::size_t>(f));
  for (int i = 0; i < f; ++i) shift[static_cast<std::size_t>(i)] = static_cast<long long>(k) * weights[fixed[i]] / m;

  // Real systems for xi-modes 0 and N/2: unknowns (Re a_j, Im a_j) and xi.
  for (int q : {0, N / 2}) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * f + 1, 2 * f + 1);
    for (int i = 0; i < f; ++i) {
      const int j = fixed[i];
      const double d = -kappa(q + shift[static_cast<std::size_t>(i)], N) + static_cast<double>(shift[static_cast<std::size_t>(i)]);
      const std::complex<double> c = static_cast<double>(weights[j]) * x0[j];
      A(2 * i, 2 * i) = d;
      A(2 * i + 1, 2 * i + 1) = d;
      A(2 * i, 2 * f) = A(2 * f, 2 * i) = c.real();
      A(2 * i + 1, 2 * f) = A(2 * f, 2 * i + 1) = c.imag();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    for (int i = 0; i < A.rows(); ++i) push(out, es.eigenvalues()[i], q, 1);
  }

  // Complex Hermitian blocks for xi-modes 1..N/2-1: unknowns a_j = v_j(q + s_j),
  // b_j = conj v_j(-q + s_j) and sqrt(2) xi(q).
  for (int q = 1; q < N / 2; ++q) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * f + 1, 2 * f + 1);
    for (int i = 0; i < f; ++i) {
      const int j = fixed[i];
      const long long s = shift[static_cast<std::size_t>(i)];
      const std::complex<double> c = static_cast<double>(weights[j]) * x0[j] / std::sqrt(2.0);
      A(i, i) = -kappa(q + s, N) + static_cast<double>(s);
      A(f + i, f + i) = -kappa(-q + s, N) + static_cast<double>(s);
      A(i, 2 * f) = c;
      A(2 * f, i) = std::conj(c);
      A(f + i, 2 * f) = std::conj(c);
      A(2 * f, f + i) = c;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    for (int i = 0; i < A.rows(); ++i) push(out, es.eigenvalues()[i], q, 2);
  }
  std::sort(out.begin(), out.end(), [](const Eigen1& x, const Eigen1& y) { return x.value < y.value; });
  return out;
}

long long composition_count(int B, int k) {
  // Enumerate every composition (ordered positive parts) of every total up to B.
  std::vector<long long> comps(static_cast<std::size_t>(B) + 1, 0);
  std::function<void(int, int)> gen = [&](int total, int remaining) {
    if (remaining == 0) {
      ++comps[static_cast<std::size_t>(total)];
      return;
    }
    for (int part = 1; part <= remaining; ++part) gen(total, remaining - part);
  };
  for (int t = 0; t <= B; ++t) gen(t, t);
  long long count = 0;
  std::function<void(int, int)> tails = [&](int tail, int remaining) {
    if (tail == k) {
      count += remaining == 0;
      return;
    }
    for (int t = 0; t <= remaining; ++t) {
      for (long long c = 0; c < comps[static_cast<std::size_t>(t)]; ++c) tails(tail + 1, remaining - t);
    }
  };
  for (int root = 0; root <= B; ++root) tails(0, B - root);
  return count;
}

std::pair<long long, long long> degree_shift(int m, int k, const std::vector<int>& weights) {
  const double two_pi = 2.0 * std::acos(-1.0);
  long long num = 0;
  for (int w : weights) {
    const std::complex<double> ev = std::polar(1.0, two_pi * k * w / m);
    int best = 0;
    double dist = 1e300;
    for (int r = 0; r < m; ++r) {
      const double d = std::abs(ev - std::polar(1.0, two_pi * r / m));
      if (d < dist) {
        dist = d;
        best = r;
      }
    }
    num += best;
  }
  long long den = m;
  const long long g = std::gcd(num, den);
  return {num / g, den / g};
}

int moved_directions(int m, int k, const std::vector<int>& weights) {
  const double two_pi = 2.0 * std::acos(-1.0);
  int count = 0;
  for (int w : weights) count += std::abs(std::polar(1.0, two_pi * k * w / m) - 1.0) > 1e-9;
  return count;
}

}  // namespace oracle
