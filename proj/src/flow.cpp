#include "vortexflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "vortexflow/cylinder.hpp"
#include "vortexflow/error.hpp"
#include "vortexflow/loop_io.hpp"

namespace vortexflow {

namespace {

void check_step(int n_theta, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("time step must be positive", "flow.dt");
  const double bound = max_time_step(n_theta);
  if (dt > bound * (1.0 + 1e-12)) {
    throw Error("time step " + std::to_string(dt) + " exceeds the stability bound " + std::to_string(bound) +
                    " for n_theta=" + std::to_string(n_theta),
                "flow.dt");
  }
}

// phi_1-type weights of exponential time differencing with linear interpolation:
// A(z) = int_0^1 e^{-z r} r dr, B(z) = int_0^1 e^{-z r} (1 - r) dr.
void etd_weights(double z, double& a, double& b) {
  if (std::abs(z) < 1.0) {
    a = 0.0;
    b = 0.0;
    double term = 0.5;  // (-z)^m / (m + 2)!
    for (int m = 0; m < 30; ++m) {
      a += term * (m + 1);
      b += term;
      term *= -z / (m + 3);
    }
    return;
  }
  const double e = std::exp(-z);
  a = (1.0 - e * (1.0 + z)) / (z * z);
  b = (z - 1.0 + e) / (z * z);
}

// -grad_action for every column of U (packed real coordinates).
Eigen::MatrixXd negative_gradient_columns(const CircleSpace& space, const Eigen::MatrixXd& D, int N,
                                          const Eigen::MatrixXd& U) {
  const int n = space.dim();
  const Eigen::Index cols = U.cols();
  Eigen::MatrixXd G(U.rows(), cols);
  const auto E = U.bottomRows(N).array();
  Eigen::ArrayXXd mu = Eigen::ArrayXXd::Constant(N, cols, -space.tau());
  for (int j = 0; j < n; ++j) {
    const double w = space.weight(j);
    const auto R = U.middleRows(2 * j * N, N);
    const auto I = U.middleRows((2 * j + 1) * N, N);
    G.middleRows(2 * j * N, N).noalias() = D * I;
    G.middleRows(2 * j * N, N).array() -= w * E * R.array();
    G.middleRows((2 * j + 1) * N, N).noalias() = -D * R;
    G.middleRows((2 * j + 1) * N, N).array() -= w * E * I.array();
    mu += 0.5 * w * (R.array().square() + I.array().square());
  }
  G.bottomRows(N) = -mu.matrix();
  return G;
}

LoopPoint axpy(const LoopPoint& y, double s, const TangentAtLoop& t) {
  LoopPoint out = y;
  out.x() += s * t.v;
  out.eta() += s * t.xi;
  return out;
}

std::vector<LoopPoint> straight_path(const LoopPoint& a, const LoopPoint& b, double max_step) {
  const int steps = std::max(1, static_cast<int>(std::ceil(sup_distance(a, b) / max_step)));
  const TangentAtLoop delta = b - a;
  std::vector<LoopPoint> path;
  path.reserve(static_cast<std::size_t>(steps) + 1);
  path.push_back(a);
  for (int s = 1; s < steps; ++s) path.push_back(axpy(a, static_cast<double>(s) / steps, delta));
  path.push_back(b);
  return path;
}

double action_difference(const CircleSpace& space, const LoopPoint& a, const LoopPoint& b) {
  const std::vector<LoopPoint> path = straight_path(a, b, 0.25);
  return action_relative(space, path);
}

}  // namespace

double max_time_step(int n_theta) { return 0.5 / (0.5 * n_theta); }

LoopPoint flow_step(const CircleSpace& space, const LoopPoint& y, double dt) {
  check_step(y.grid_size(), dt);
  const TangentAtLoop k1 = grad_action(space, y);
  const TangentAtLoop k2 = grad_action(space, axpy(y, -0.5 * dt, k1));
  const TangentAtLoop k3 = grad_action(space, axpy(y, -0.5 * dt, k2));
  const TangentAtLoop k4 = grad_action(space, axpy(y, -dt, k3));
  LoopPoint out = y;
  out.x() -= (dt / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  out.eta() -= (dt / 6.0) * (k1.xi + 2.0 * k2.xi + 2.0 * k3.xi + k4.xi);
  const double size = std::max(out.x().cwiseAbs().maxCoeff(), out.eta().cwiseAbs().maxCoeff());
  if (!std::isfinite(size) || size > 1e8) {
    throw Error("state norm exploded during flow step (dt=" + std::to_string(dt) + ")", "flow.dt");
  }
  return out;
}

Trajectory integrate(const CircleSpace& space, const LoopPoint& y0, double T, double dt, const FlowOptions& opts) {
  check_step(y0.grid_size(), dt);
  if (!(T > 0.0) || !std::isfinite(T)) throw Error("flow horizon must be positive", "flow.T");
  const int N = y0.grid_size();
  const int n = y0.dim();
  const int K = static_cast<int>(std::ceil(T / dt - 1e-9));

  const GaugeLoop gc = constant_eta_gauge(y0);
  const LoopPoint z0 = gauge_apply(space, gc, y0);
  const CriticalMatch match = nearest_critical(space, z0);
  const Eigen::VectorXd base = pack(match.datum.loop);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian_matrix(space, match.datum.loop));
  if (es.info() != Eigen::Success) throw Error("Hessian eigensolve failed", "flow");
  const Eigen::MatrixXd& V = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  const int M = static_cast<int>(lam.size());
  const double neutral = 1e-8 * lam.cwiseAbs().maxCoeff();
  int p = 0;
  while (p < M && lam[p] < -neutral) ++p;
  const int q = M - p;

  Eigen::ArrayXd decay(M), wa(M), wb(M);
  for (int i = 0; i < M; ++i) {
    const double z = (i < p ? -lam[i] : lam[i]) * dt;
    decay[i] = std::exp(-z);
    etd_weights(z, wa[i], wb[i]);
  }

  const Eigen::VectorXd c0 = V.transpose() * (pack(z0) - base);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(M, K + 1);
  C.col(0).tail(q) = c0.tail(q);
  for (int k = 0; k < K; ++k) C.col(k + 1).tail(q) = decay.tail(q) * C.col(k).tail(q).array();

  const Eigen::MatrixXd& D = y0.grid().diff_matrix();
  Eigen::MatrixXd U;
  Eigen::MatrixXd G;
  Eigen::MatrixXd C_next(M, K + 1);
  bool done = false;
  for (int it = 0; it < opts.max_iterations && !done; ++it) {
    U.noalias() = V * C;
    U.colwise() += base;
    G = negative_gradient_columns(space, D, N, U);
    Eigen::MatrixXd NN = V.transpose() * G;
    NN += lam.asDiagonal() * C;

    C_next.col(0).tail(q) = c0.tail(q);
    for (int k = 0; k < K; ++k) {
      C_next.col(k + 1).tail(q) =
          decay.tail(q) * C_next.col(k).tail(q).array() +
          dt * (wa.tail(q) * NN.col(k).tail(q).array() + wb.tail(q) * NN.col(k + 1).tail(q).array());
    }
    if (p > 0) {
      C_next.col(K).head(p) = NN.col(K).head(p).cwiseQuotient(lam.head(p));
      for (int k = K - 1; k >= 0; --k) {
        C_next.col(k).head(p) =
            decay.head(p) * C_next.col(k + 1).head(p).array() -
            dt * (wb.head(p) * NN.col(k).head(p).array() + wa.head(p) * NN.col(k + 1).head(p).array());
      }
    }
    if (!C_next.allFinite()) throw Error("flow solve diverged; initial loop too far from a critical loop", "flow");
    const double change = (C_next - C).cwiseAbs().maxCoeff();
    const double scale = 1.0 + C_next.cwiseAbs().maxCoeff();
    C.swap(C_next);
    done = change <= opts.solve_tol * scale;
  }
  if (!done) {
    throw Error("flow solve did not converge in " + std::to_string(opts.max_iterations) + " iterations", "flow");
  }
  U.noalias() = V * C;
  U.colwise() += base;
  G = negative_gradient_columns(space, D, N, U);

  const double h = y0.grid().weight();
  int last = K;
  bool converged = false;
  for (int k = 0; k <= K; ++k) {
    if (std::sqrt(h * G.col(k).squaredNorm()) < opts.grad_floor) {
      last = k;
      converged = true;
      break;
    }
  }

  Trajectory traj;
  traj.converged = converged;
  const GaugeLoop back = gc.inverse();
  traj.times.reserve(static_cast<std::size_t>(last) + 1);
  traj.states.reserve(static_cast<std::size_t>(last) + 1);
  for (int k = 0; k <= last; ++k) {
    traj.times.push_back(dt * k);
    traj.states.push_back(gauge_apply(space, back, unpack_loop(U.col(k), N, n)));
  }
  traj.start_offset = l2_distance(y0, traj.states.front());
  compute_diagnostics(space, traj);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    if (traj.action_drop[i] < traj.action_drop[i - 1] - 1e-10) {
      throw Error("action increased along the flow at t=" + std::to_string(traj.times[i]), "flow");
    }
  }
  return traj;
}

void compute_diagnostics(const CircleSpace& space, Trajectory& traj) {
  const std::size_t S = traj.size();
  if (S == 0 || traj.states.size() != S) throw Error("trajectory is empty or inconsistent", "trajectory");
  traj.grad_norm.assign(S, 0.0);
  traj.action_drop.assign(S, 0.0);
  traj.ymh_energy.assign(S, 0.0);
  for (std::size_t i = 0; i < S; ++i) {
    traj.grad_norm[i] = l2_norm(traj.states[i], grad_action(space, traj.states[i]));
  }
  for (std::size_t i = 1; i < S; ++i) {
    traj.action_drop[i] = traj.action_drop[i - 1] - action_difference(space, traj.states[i - 1], traj.states[i]);
  }
  if (S < 2) return;

  std::vector<TangentAtLoop> ddt;
  if (S >= 6) {
    CylinderField f{traj.times.front(), traj.times[1] - traj.times[0], traj.states};
    ddt = time_derivative(f);
  } else {
    for (std::size_t i = 0; i < S; ++i) {
      const std::size_t a = i == 0 ? 0 : i - 1;
      const std::size_t b = i + 1 < S ? i + 1 : S - 1;
      ddt.push_back((1.0 / (traj.times[b] - traj.times[a])) * (traj.states[b] - traj.states[a]));
    }
  }
  std::vector<double> density(S);
  for (std::size_t i = 0; i < S; ++i) {
    const LoopPoint& y = traj.states[i];
    const TangentAtLoop g = grad_action(space, y);
    const double h = y.grid().weight();
    density[i] = 0.5 * h * (ddt[i].v.squaredNorm() + g.v.squaredNorm() + ddt[i].xi.squaredNorm() + g.xi.squaredNorm());
  }
  for (std::size_t i = 1; i < S; ++i) {
    traj.ymh_energy[i] =
        traj.ymh_energy[i - 1] + 0.5 * (traj.times[i] - traj.times[i - 1]) * (density[i - 1] + density[i]);
  }
}

CriticalMatch limit_point(const CircleSpace& space, const Trajectory& traj) {
  if (traj.size() == 0) throw Error("empty trajectory", "trajectory");
  if (!traj.converged) throw Error("trajectory did not reach the gradient floor", "trajectory");
  const LoopPoint& y = traj.states.back();
  return nearest_critical(space, gauge_apply(space, constant_eta_gauge(y), y));
}

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& values, double tail_fraction) {
  if (t.size() != values.size()) throw Error("time and value series differ in length", "decay");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw Error("tail fraction must lie in (0, 1]", "decay.tail");
  const std::size_t start =
      static_cast<std::size_t>(std::floor((1.0 - tail_fraction) * static_cast<double>(t.size())));
  std::vector<double> ts;
  std::vector<double> ls;
  for (std::size_t i = start; i < t.size(); ++i) {
    if (values[i] > 1e-12) {
      ts.push_back(t[i]);
      ls.push_back(std::log(values[i]));
    }
  }
  if (ts.size() < 20) throw Error("decay tail has fewer than 20 usable samples", "decay.tail");
  const double m = static_cast<double>(ts.size());
  double st = 0.0, sl = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sl += ls[i];
  }
  const double tm = st / m;
  const double lm = sl / m;
  double stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - tm) * (ts[i] - tm);
    stl += (ts[i] - tm) * (ls[i] - lm);
  }
  if (!(stt > 0.0)) throw Error("decay tail spans no time", "decay.tail");
  const double slope = stl / stt;
  double ss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = ls[i] - (lm + slope * (ts[i] - tm));
    ss += r * r;
  }
  DecayFit fit{-slope, ts.front(), ts.back(), std::sqrt(ss / m)};
  if (!(fit.residual <= 0.1)) {
    throw Error("decay tail is not log-linear (residual " + std::to_string(fit.residual) + ")", "decay.tail");
  }
  if (!(fit.rate > 0.0)) throw Error("decay tail is not decaying", "decay.tail");
  return fit;
}

DecayFit decay_fit(const Trajectory& traj, double tail_fraction) {
  return decay_fit(traj.times, traj.grad_norm, tail_fraction);
}

double sobolev_norm(const LoopPoint& base, const TangentAtLoop& t) {
  const SpectralGrid& grid = base.grid();
  const TangentAtLoop dt{grid.derivative(t.v), grid.derivative(t.xi)};
  return std::sqrt(l2_inner(base, t, t) + l2_inner(base, dt, dt));
}

double crucial_ratio(const CircleSpace& space, const CriticalDatum& crit, const LoopPoint& y) {
  const double dl = action_difference(space, crit.loop, y);
  if (std::abs(dl) < 1e-14) return -1.0;
  const double g = l2_norm(y, grad_action(space, y));
  return g * g / std::abs(dl);
}

ScanResult crucial_inequality_scan(const CircleSpace& space, const CriticalDatum& crit, double eps, int samples,
                                   std::uint64_t rng_seed) {
  if (!(eps > 0.0 && eps <= 0.2)) throw Error("scan radius must lie in (0, 0.2]", "scan.eps");
  if (samples < 1) throw Error("scan needs at least one sample", "scan.samples");
  const LoopPoint& c = crit.loop;
  const int N = c.grid_size();
  const int n = c.dim();
  const int top = N / 4;

  ScanResult res;
  res.prediction = 2.0 * spectral_report(hessian_matrix(space, crit)).gap;
  res.min_ratio = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const SpectralGrid& grid = c.grid();

  int drawn = 0;
  while (drawn < samples) {
    TangentAtLoop d = TangentAtLoop::zero(N, n);
    for (int mode = -top; mode <= top; ++mode) {
      const double scale = 1.0 / (1.0 + std::abs(mode));
      for (int j = 0; j < n; ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        const Complex coef(re * scale, im * scale);
        for (int k = 0; k < N; ++k) d.v(k, j) += coef * std::polar(1.0, mode * grid.theta(k));
      }
      if (mode >= 0) {
        const double a = normal(rng) * scale;
        const double b = normal(rng) * scale;
        for (int k = 0; k < N; ++k) {
          d.xi[k] += a * std::cos(mode * grid.theta(k)) + (mode > 0 ? b * std::sin(mode * grid.theta(k)) : 0.0);
        }
      }
    }
    d *= 1.0 / sobolev_norm(c, d);
    const double r = eps * (1.0 - uniform(rng));
    for (double sign : {1.0, -1.0}) {
      if (drawn >= samples) break;
      ++drawn;
      const double ratio = crucial_ratio(space, crit, axpy(c, sign * r, d));
      if (ratio < 0.0) {
        ++res.excluded;
        continue;
      }
      ++res.used;
      res.min_ratio = std::min(res.min_ratio, ratio);
    }
  }
  if (res.used == 0) throw Error("every scan sample fell under the 0/0 guard", "scan");
  return res;
}

TangentAtLoop smooth_perturbation(const LoopPoint& base, double amplitude, int modes, std::uint64_t seed) {
  if (modes < 0 || 4 * modes >= base.grid_size()) throw Error("too many perturbation modes for the grid", "flow.perturbation_modes");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const SpectralGrid& grid = base.grid();
  const int N = base.grid_size();
  TangentAtLoop d = TangentAtLoop::zero(N, base.dim());
  for (int mode = -modes; mode <= modes; ++mode) {
    const double scale = 1.0 / (1.0 + mode * mode);
    for (int j = 0; j < base.dim(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      const Complex coef(re * scale, im * scale);
      for (int k = 0; k < N; ++k) d.v(k, j) += coef * std::polar(1.0, mode * grid.theta(k));
    }
    if (mode >= 0) {
      const double a = normal(rng) * scale;
      const double b = normal(rng) * scale;
      for (int k = 0; k < N; ++k) d.xi[k] += a * std::cos(mode * grid.theta(k)) + b * std::sin(mode * grid.theta(k));
    }
  }
  const double norm = sobolev_norm(base, d);
  if (norm > 0.0) d *= amplitude / norm;
  return d;
}

double FourWayEnergy::max_relative_gap() const {
  const double v[4] = {action_drop, topological, ymh, grad_integral};
  double worst = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      const double scale = std::max(std::abs(v[a]), std::abs(v[b]));
      if (scale > 0.0) worst = std::max(worst, std::abs(v[a] - v[b]) / scale);
    }
  }
  return worst;
}

FourWayEnergy four_way_energy(const CircleSpace& space, const Trajectory& traj) {
  const CylinderField f = trajectory_to_cylinder(traj);
  const EnergyIdentity id = energy_identity_check(space, f);
  FourWayEnergy e;
  e.action_drop = -action_difference(space, traj.states.front(), traj.states.back());
  e.topological = id.topological;
  e.ymh = id.lhs;
  const std::vector<double> w = gregory_weights(f.time_nodes(), f.dt);
  for (std::size_t i = 0; i < traj.size(); ++i) e.grad_integral += w[i] * traj.grad_norm[i] * traj.grad_norm[i];
  return e;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,grad_norm,action_drop,ymh_energy\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << format_double(traj.times[i]) << ',' << format_double(traj.grad_norm[i]) << ','
       << format_double(traj.action_drop[i]) << ',' << format_double(traj.ymh_energy[i]) << '\n';
  }
}

}  // namespace vortexflow
