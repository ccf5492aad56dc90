#pragma once

#include <Eigen/Dense>
#include <boost/rational.hpp>
#include <optional>
#include <vector>

#include "vortexflow/circle_space.hpp"
#include "vortexflow/loop_point.hpp"

namespace vortexflow {

using Rational = boost::rational<long long>;

// Twisted sector labelled by the holonomy exp(2 pi i k / m), (m, k) coprime,
// 0 <= k < m. fixed_dims lists the zero-based coordinates j with m | k w_j.
struct SectorLabel {
  int m = 1;
  int k = 0;
  std::vector<int> fixed_dims;

  LieValue eta0() const { return static_cast<double>(k) / m; }
  bool trivial() const { return m == 1; }
  bool operator==(const SectorLabel&) const = default;
};

// Reduces (m, k) to lowest terms and fills fixed_dims; throws if the fixed
// subspace does not meet mu^{-1}(0) (i.e. is zero).
SectorLabel make_sector(const CircleSpace& space, int m, int k);

// The element g^{-1} = exp(-2 pi i k / m).
SectorLabel inverse_sector(const CircleSpace& space, const SectorLabel& s);

std::vector<SectorLabel> enumerate_sectors(const CircleSpace& space);

struct CriticalDatum {
  SectorLabel sector;
  Point base;       // on mu^{-1}(0), fixed by the sector element
  LieValue eta0;    // k/m up to an integer (winding representative)
  LoopPoint loop;   // x(theta) = exp(theta eta0) base, eta = eta0
};

// The loop x(theta) = exp(theta eta0) . base, eta = eta0 on an n_theta grid.
LoopPoint critical_loop(const CircleSpace& space, const Point& base, LieValue eta0, int n_theta);

// Projects seed onto the sector's fixed subspace, scales it onto mu^{-1}(0)
// and refines radially by Newton's method.
CriticalDatum find_critical(const CircleSpace& space, const SectorLabel& sector, const Point& seed, int n_theta);

struct CriticalMatch {
  CriticalDatum datum;
  double distance = 0.0;  // L2 distance from the query loop
};

// Nearest critical loop to y among all sectors, with eta0 chosen in the
// winding class of the mean of eta. Throws if nothing lies within max_distance.
CriticalMatch nearest_critical(const CircleSpace& space, const LoopPoint& y, double max_distance = 0.5);

// Jacobian of grad_action at y in packed real coordinates. It is symmetric, so
// it represents the Hessian with respect to the L2 pairing.
Eigen::MatrixXd hessian_matrix(const CircleSpace& space, const LoopPoint& y);
Eigen::MatrixXd hessian_matrix(const CircleSpace& space, const CriticalDatum& crit);

double symmetry_residual(const Eigen::MatrixXd& h);

struct HessianReport {
  std::vector<double> eigenvalues;  // ascending
  int kernel_dim = 0;
  double gap = 0.0;
  double rank_tol = 0.0;
};

// rank_tol <= 0 selects 1e-6 * |H| (spectral norm).
HessianReport spectral_report(const Eigen::MatrixXd& h, double rank_tol = 0.0);

// iota(g, C^n) = sum_j ((k w_j) mod m) / m.
Rational degree_shift(const SectorLabel& sector, const std::vector<int>& rep_weights);

// For G = U(1) the centraliser is G and g acts trivially on g + g^*, so
// iota_CR(g) equals iota(g, T_p X).
Rational degree_shift_CR(const CircleSpace& space, const SectorLabel& sector);

// Number of coordinates on which the sector element acts nontrivially.
int non_fixed_count(const SectorLabel& sector, const std::vector<int>& rep_weights);

}  // namespace vortexflow
