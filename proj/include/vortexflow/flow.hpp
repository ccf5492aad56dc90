#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "vortexflow/circle_space.hpp"
#include "vortexflow/critical.hpp"
#include "vortexflow/loop_point.hpp"

namespace vortexflow {

// Largest admissible time step on an n_theta grid: 0.5 / (highest Fourier mode).
double max_time_step(int n_theta);

// One classical RK4 step of dy/dt = -grad_action(y).
LoopPoint flow_step(const CircleSpace& space, const LoopPoint& y, double dt);

struct Trajectory {
  std::vector<double> times;
  std::vector<LoopPoint> states;
  std::vector<double> grad_norm;
  std::vector<double> action_drop;  // Ltilde(states[0]) - Ltilde(states[i])
  std::vector<double> ymh_energy;   // Yang-Mills-Higgs energy of the swept cylinder up to times[i]
  // L2 distance between the requested initial loop and states[0]; nonzero when
  // the unstable components of the initial data had to be replaced.
  double start_offset = 0.0;
  bool converged = false;

  std::size_t size() const { return times.size(); }
};

struct FlowOptions {
  double grad_floor = 1e-9;
  double solve_tol = 1e-13;
  int max_iterations = 200;
};

// Downward gradient flow line from (a loop near) y0 on [0, T] with step dt,
// stopped at the first time grad_norm drops below the floor.
//
// The initial value problem is ill-posed (the Hessian is unbounded in both
// directions), so the flow line is computed as the solution on the
// centre-stable manifold of the nearest critical loop: a fixed-point iteration
// of the variation-of-constants formula in the Hessian eigenbasis, with stable
// and neutral modes integrated forward from y0 and unstable modes backward
// from their stationary values at the horizon, using exponential time
// differencing on the dt grid.
Trajectory integrate(const CircleSpace& space, const LoopPoint& y0, double T, double dt, const FlowOptions& opts = {});

// Cumulative series recomputed from the states (action differences, grad norm,
// finite-difference Yang-Mills-Higgs energy).
void compute_diagnostics(const CircleSpace& space, Trajectory& traj);

// Critical datum nearest to the final state, after moving it to constant-eta gauge.
CriticalMatch limit_point(const CircleSpace& space, const Trajectory& traj);

struct DecayFit {
  double rate = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double residual = 0.0;  // RMS of the log-linear fit
};

// Log-linear least squares on grad_norm over the last tail_fraction of samples.
DecayFit decay_fit(const Trajectory& traj, double tail_fraction);
DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& values, double tail_fraction);

struct ScanResult {
  double min_ratio = 0.0;
  double prediction = 0.0;  // 2 * Hessian gap
  int used = 0;
  int excluded = 0;
};

// Samples y = crit + r d with d a unit vector in the discrete W^{1,2} norm and
// r in (0, eps]; returns the minimum of |grad(y)|^2 / |Ltilde(y) - Ltilde(crit)|.
ScanResult crucial_inequality_scan(const CircleSpace& space, const CriticalDatum& crit, double eps, int samples,
                                   std::uint64_t rng_seed);

// |grad(y)|^2 / |Ltilde(y) - Ltilde(crit)|, or a negative value if the
// action difference is below the 0/0 guard.
double crucial_ratio(const CircleSpace& space, const CriticalDatum& crit, const LoopPoint& y);

// Discrete W^{1,2} norm: L2 norm of the tangent plus L2 norm of its theta derivative.
double sobolev_norm(const LoopPoint& base, const TangentAtLoop& t);

struct FourWayEnergy {
  double action_drop = 0.0;      // -Ltilde difference along the straight path between the ends
  double topological = 0.0;      // swept symplectic area minus the <mu, eta> boundary terms
  double ymh = 0.0;              // Yang-Mills-Higgs energy of the cylinder field
  double grad_integral = 0.0;    // integral of |grad|^2 dt

  double max_relative_gap() const;
};

FourWayEnergy four_way_energy(const CircleSpace& space, const Trajectory& traj);

// Smooth seeded perturbation: Fourier modes |k| <= modes in every component,
// scaled to the given discrete W^{1,2} norm. The same seed gives the same
// function of theta on every grid with n_theta > 4 modes.
TangentAtLoop smooth_perturbation(const LoopPoint& base, double amplitude, int modes, std::uint64_t seed);

// CSV with columns t, grad_norm, action_drop, ymh_energy.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace vortexflow
