#pragma once

#include <cstdint>
#include <vector>

#include "vortexflow/circle_space.hpp"
#include "vortexflow/loop_point.hpp"

namespace vortexflow {

struct Trajectory;

// Fields (u, A = d + eta dtheta) in temporal gauge on S^1 x [t0, t0 + (K-1) dt],
// stored as one loop per time node.
struct CylinderField {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<LoopPoint> slices;

  int time_nodes() const { return static_cast<int>(slices.size()); }
  int grid_size() const { return slices.empty() ? 0 : slices.front().grid_size(); }
};

void validate(const CylinderField& f);

// Fourth-order finite-difference time derivative (one-sided at both ends).
std::vector<TangentAtLoop> time_derivative(const CylinderField& f);

// End-corrected trapezoid weights (Gregory, third order) for k >= 6 nodes of spacing h.
std::vector<double> gregory_weights(int k, double h);

struct VortexResidual {
  double dbar_norm = 0.0;       // |du/dt + J D_theta u|_{L2}
  double curvature_norm = 0.0;  // |d eta/dt + mu(u)|_{L2}
};

VortexResidual vortex_residual(const CircleSpace& space, const CylinderField& f);

struct EnergyIdentity {
  double lhs = 0.0;          // Yang-Mills-Higgs energy
  double rhs = 0.0;          // residual + topological
  double residual = 0.0;     // int 1/2 |du/dt + J D_theta u|^2 + 1/2 (d eta/dt + mu)^2
  double topological = 0.0;  // int u^* omega - [int <mu, eta>] over the ends
  double gap = 0.0;          // |lhs - rhs|
};

EnergyIdentity energy_identity_check(const CircleSpace& space, const CylinderField& f);

// Requires uniformly spaced times.
CylinderField trajectory_to_cylinder(const Trajectory& traj);

// Constant-in-time field at a loop.
CylinderField constant_cylinder(const LoopPoint& y, int time_nodes, double t_length);

// Smooth random field: low Fourier modes in theta times low-degree trigonometric
// polynomials in t, with seeded Gaussian coefficients.
CylinderField random_smooth_field(const CircleSpace& space, int n_theta, int time_nodes, double t_length,
                                  std::uint64_t seed);

}  // namespace vortexflow
