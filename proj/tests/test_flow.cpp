#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "vortexflow/error.hpp"

using namespace vortexflow;

namespace {

const CircleSpace& space1() {
  static const CircleSpace s({1}, 0.5);
  return s;
}

CriticalDatum trivial_crit(const CircleSpace& s, int N) {
  return find_critical(s, make_sector(s, 1, 0), Point::Ones(s.dim()), N);
}

// Perturbed flow shared by several cases.
const Trajectory& reference_flow() {
  static const Trajectory traj = [] {
    const CriticalDatum c = trivial_crit(space1(), 32);
    const LoopPoint y0 = c.loop + smooth_perturbation(c.loop, 0.05, 3, 7);
    return integrate(space1(), y0, 30.0, 1.0 / 64);
  }();
  return traj;
}

}  // namespace

TEST_CASE("flow_step leaves critical loops fixed and respects the step bound") {
  const CriticalDatum c = trivial_crit(space1(), 32);
  const LoopPoint y = flow_step(space1(), c.loop, max_time_step(32));
  CHECK(sup_distance(y, c.loop) <= 1e-14);
  CHECK(max_time_step(64) == doctest::Approx(1.0 / 64));
  CHECK_THROWS_AS(flow_step(space1(), c.loop, 2.0 * max_time_step(32)), Error);
  CHECK_THROWS_AS(flow_step(space1(), c.loop, -1e-3), Error);
}

TEST_CASE("flow_step is fourth order and descends") {
  std::mt19937_64 rng(3);
  const LoopPoint y0 = test_support::random_loop(rng, 16, 1, 2, 0.3);
  auto run = [&](double dt, int steps) {
    LoopPoint y = y0;
    for (int i = 0; i < steps; ++i) y = flow_step(space1(), y, dt);
    return y;
  };
  const double t = 0.05;
  const LoopPoint ref = run(t / 64, 64);
  const double e1 = l2_distance(run(t / 4, 4), ref);
  const double e2 = l2_distance(run(t / 8, 8), ref);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
  const LoopPoint y1 = run(t / 8, 8);
  const std::vector<LoopPoint> path{y0, y1};
  CHECK(action_relative(space1(), path) < 0.0);
}

TEST_CASE("integrate from a critical loop stays put") {
  const CriticalDatum c = trivial_crit(space1(), 32);
  const Trajectory traj = integrate(space1(), c.loop, 5.0, 1.0 / 32);
  CHECK(traj.converged);
  CHECK(traj.start_offset <= 1e-14);
  for (const LoopPoint& y : traj.states) CHECK(sup_distance(y, c.loop) <= 1e-12);
  CHECK(std::abs(traj.action_drop.back()) <= 1e-14);
}

TEST_CASE("perturbed flow descends to a critical loop") {
  const Trajectory& traj = reference_flow();
  REQUIRE(traj.converged);
  CHECK(traj.start_offset < 0.05);
  CHECK(traj.grad_norm.back() < 1e-9);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    CHECK(traj.action_drop[i] >= traj.action_drop[i - 1] - 1e-13);
    CHECK(traj.times[i] > traj.times[i - 1]);
  }
  const CriticalMatch m = limit_point(space1(), traj);
  CHECK(m.datum.sector.trivial());
  CHECK(m.distance < 1e-8);
  // Each state satisfies the flow equation: centred differences against the gradient.
  const double dt = traj.times[1] - traj.times[0];
  for (std::size_t i = 1; i + 1 < traj.size(); i += 97) {
    const TangentAtLoop ddt = (0.5 / dt) * (traj.states[i + 1] - traj.states[i - 1]);
    const TangentAtLoop g = grad_action(space1(), traj.states[i]);
    CHECK(l2_norm(traj.states[i], ddt + g) <= 1e-3 * (l2_norm(traj.states[i], g) + 1e-9) + 1e-9);
  }
}

TEST_CASE("energy quantities agree along the flow") {
  const FourWayEnergy e = four_way_energy(space1(), reference_flow());
  CHECK(e.action_drop > 0.0);
  CHECK(e.max_relative_gap() <= 1e-3);
  CHECK(reference_flow().ymh_energy.back() == doctest::Approx(e.ymh).epsilon(1e-3));
}

TEST_CASE("decay rate follows the Hessian gap") {
  const DecayFit fit = decay_fit(reference_flow(), 0.5);
  const HessianReport r = spectral_report(hessian_matrix(space1(), trivial_crit(space1(), 32)));
  CHECK(std::abs(fit.rate - r.gap) <= 0.15 * r.gap);
}

TEST_CASE("synthetic decay fit") {
  std::vector<double> t, v;
  for (int i = 0; i < 200; ++i) {
    t.push_back(0.05 * i);
    v.push_back(3.0 * std::exp(-2.0 * t.back()));
  }
  const DecayFit f = decay_fit(t, v, 0.5);
  CHECK(f.rate == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f.residual <= 1e-10);
  std::vector<double> flat(200, 1.0);
  CHECK_THROWS_AS(decay_fit(t, flat, 0.5), Error);
  CHECK_THROWS_AS(decay_fit(t, v, 0.0), Error);
}

TEST_CASE("flow is gauge equivariant") {
  std::mt19937_64 rng(11);
  const CriticalDatum c = trivial_crit(space1(), 32);
  const LoopPoint y0 = c.loop + smooth_perturbation(c.loop, 0.03, 3, 2);
  const GaugeLoop g = test_support::random_gauge(rng, 32, 0);
  const Trajectory a = integrate(space1(), y0, 4.0, 1.0 / 32);
  const Trajectory b = integrate(space1(), gauge_apply(space1(), g, y0), 4.0, 1.0 / 32);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); i += 16) {
    CHECK(sup_distance(gauge_apply(space1(), g, a.states[i]), b.states[i]) <= 1e-10);
    CHECK(std::abs(a.action_drop[i] - b.action_drop[i]) <= 1e-12);
  }
}

TEST_CASE("smooth perturbations are grid independent and normalised") {
  const CriticalDatum c32 = trivial_crit(space1(), 32);
  const CriticalDatum c64 = trivial_crit(space1(), 64);
  const TangentAtLoop a = smooth_perturbation(c32.loop, 0.1, 4, 5);
  const TangentAtLoop b = smooth_perturbation(c64.loop, 0.1, 4, 5);
  CHECK(sobolev_norm(c32.loop, a) == doctest::Approx(0.1).epsilon(1e-12));
  for (int k = 0; k < 32; ++k) {
    CHECK(std::abs(a.v(k, 0) - b.v(2 * k, 0)) <= 1e-3);
    CHECK(std::abs(a.xi[k] - b.xi[2 * k]) <= 1e-3);
  }
  CHECK_THROWS_AS(smooth_perturbation(c32.loop, 0.1, 8, 5), Error);
  const TangentAtLoop constant{Eigen::MatrixXcd::Constant(32, 1, Complex(0.3, 0.4)), Eigen::VectorXd::Zero(32)};
  CHECK(sobolev_norm(c32.loop, constant) == doctest::Approx(l2_norm(c32.loop, constant)).epsilon(1e-14));
}

TEST_CASE("crucial inequality scan") {
  const CircleSpace s({1, 2}, 1.0);
  for (const SectorLabel& sec : enumerate_sectors(s)) {
    const CriticalDatum c = find_critical(s, sec, Point::Ones(2), 32);
    CHECK(crucial_ratio(s, c, c.loop) < 0.0);
    const ScanResult r = crucial_inequality_scan(s, c, 0.1, 200, 4);
    CHECK(r.prediction == doctest::Approx(2.0 * spectral_report(hessian_matrix(s, c)).gap));
    CHECK(r.used + r.excluded == 200);
    CHECK(r.min_ratio > 0.0);
    CHECK(r.min_ratio >= 0.5 * r.prediction);
    const ScanResult again = crucial_inequality_scan(s, c, 0.1, 200, 4);
    CHECK(again.min_ratio == r.min_ratio);
  }
  const CriticalDatum c = trivial_crit(space1(), 32);
  CHECK_THROWS_AS(crucial_inequality_scan(space1(), c, 0.5, 10, 1), Error);
}

TEST_CASE("trajectory csv") {
  std::ostringstream os;
  write_trajectory_csv(os, reference_flow());
  const std::string text = os.str();
  CHECK(text.rfind("t,grad_norm,action_drop,ymh_energy\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == reference_flow().size() + 1);
}
