#include "vortexflow/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>

#include "vortexflow/config.hpp"
#include "vortexflow/critical.hpp"
#include "vortexflow/cylinder.hpp"
#include "vortexflow/error.hpp"
#include "vortexflow/flow.hpp"
#include "vortexflow/index.hpp"
#include "vortexflow/loop_io.hpp"
#include "vortexflow/webs.hpp"

namespace vortexflow {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Tracks created files so a failed run can be rolled back.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

  void open() {
    if (!fs::exists(dir_)) {
      fs::create_directories(dir_);
      created_dir_ = true;
    }
  }

  std::ofstream file(const std::string& name) {
    const fs::path p = dir_ / name;
    if (p.has_parent_path() && !fs::exists(p.parent_path())) {
      fs::create_directories(p.parent_path());
      dirs_.push_back(p.parent_path());
    }
    paths_.push_back(p);
    std::ofstream os(p);
    if (!os) throw Error("cannot write " + p.string(), "output.dir");
    return os;
  }

  void write_json(const std::string& name, const json& j) { file(name) << j.dump(2) << '\n'; }

  void rollback() noexcept {
    std::error_code ec;
    for (const auto& p : paths_) fs::remove(p, ec);
    for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove(*it, ec);
    if (created_dir_) fs::remove(dir_, ec);
  }

 private:
  fs::path dir_;
  std::vector<fs::path> paths_;
  std::vector<fs::path> dirs_;
  bool created_dir_ = false;
};

json sector_json(const SectorLabel& s) {
  json f = json::array();
  for (int j : s.fixed_dims) f.push_back(j + 1);
  return {{"m", s.m}, {"k", s.k}, {"fixed_dims", f}};
}

json point_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index j = 0; j < p.size(); ++j) a.push_back(json::array({p[j].real(), p[j].imag()}));
  return a;
}

std::string rational_string(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string sector_name(const SectorLabel& s) { return std::to_string(s.m) + "_" + std::to_string(s.k); }

CriticalDatum configured_datum(const ExperimentConfig& c, const CircleSpace& space) {
  return find_critical(space, make_sector(space, c.sector_m, c.sector_k), c.seed(), c.n_theta);
}

void cmd_crit(const ExperimentConfig& c, Artifacts& art) {
  const CircleSpace space = c.space();
  std::ostringstream table;
  table << std::left << std::setw(4) << "m" << std::setw(4) << "k" << std::setw(16) << "holonomy" << std::setw(12)
        << "fixed_dims" << std::setw(10) << "iota_CR" << "residual\n";
  json records = json::array();
  for (const SectorLabel& s : enumerate_sectors(space)) {
    const CriticalDatum d = find_critical(space, s, Point::Ones(space.dim()), c.n_theta);
    const double residual = l2_norm(d.loop, grad_action(space, d.loop));
    std::string dims;
    for (int j : s.fixed_dims) dims += (dims.empty() ? "" : ",") + std::to_string(j + 1);
    std::ostringstream res, hol;
    res << std::scientific << std::setprecision(2) << residual;
    hol << std::fixed << std::setprecision(12) << holonomy(d.loop);
    table << std::setw(4) << s.m << std::setw(4) << s.k << std::setw(16) << hol.str()
          << std::setw(12) << dims << std::setw(10) << rational_string(degree_shift_CR(space, s)) << res.str() << "\n";
    records.push_back({{"sector", sector_json(s)},
                       {"eta0", d.eta0},
                       {"base", point_json(d.base)},
                       {"holonomy", holonomy(d.loop)},
                       {"moment_map", moment_map(space, d.base)},
                       {"grad_residual", residual},
                       {"iota_CR", rational_string(degree_shift_CR(space, s))},
                       {"loop_file", "crit_" + sector_name(s) + ".loop"}});
    auto os = art.file("crit_" + sector_name(s) + ".loop");
    write_loop(os, d.loop);
  }
  art.file("sectors.txt") << table.str();
  art.write_json("critical.json", {{"weights", c.weights}, {"tau", c.tau}, {"n_theta", c.n_theta}, {"sectors", records}});
}

void cmd_hessian(const ExperimentConfig& c, Artifacts& art) {
  const CircleSpace space = c.space();
  const CriticalDatum d = configured_datum(c, space);
  const Eigen::MatrixXd raw = hessian_matrix(space, d.loop);
  const HessianReport r = spectral_report(hessian_matrix(space, d));
  art.write_json("hessian.json", {{"sector", sector_json(d.sector)},
                                  {"n_theta", c.n_theta},
                                  {"symmetry_residual", symmetry_residual(raw)},
                                  {"rank_tol", r.rank_tol},
                                  {"kernel_dim", r.kernel_dim},
                                  {"gap", r.gap},
                                  {"eigenvalues", r.eigenvalues}});
}

json trajectory_summary(const CircleSpace& space, const Trajectory& traj, double tail_fraction) {
  json j{{"steps", traj.size() - 1},
         {"t_final", traj.times.back()},
         {"converged", traj.converged},
         {"start_offset", traj.start_offset},
         {"grad_norm_final", traj.grad_norm.back()},
         {"action_drop", traj.action_drop.back()},
         {"ymh_energy", traj.ymh_energy.back()}};
  if (traj.converged) {
    const CriticalMatch m = limit_point(space, traj);
    j["limit"] = {{"sector", sector_json(m.datum.sector)},
                  {"eta0", m.datum.eta0},
                  {"base", point_json(m.datum.base)},
                  {"distance", m.distance}};
    try {
      const DecayFit f = decay_fit(traj, tail_fraction);
      j["decay"] = {{"rate", f.rate}, {"t_lo", f.t_lo}, {"t_hi", f.t_hi}, {"residual", f.residual}};
    } catch (const Error& e) {
      j["decay"] = {{"error", e.what()}};
    }
  }
  if (traj.size() >= 6) {
    const FourWayEnergy e = four_way_energy(space, traj);
    j["four_way"] = {{"action_drop", e.action_drop},
                     {"topological", e.topological},
                     {"ymh", e.ymh},
                     {"grad_integral", e.grad_integral},
                     {"max_relative_gap", e.max_relative_gap()}};
  }
  return j;
}

LoopPoint initial_loop(const ExperimentConfig& c, const CriticalDatum& d) {
  return d.loop + smooth_perturbation(d.loop, c.perturbation, c.perturbation_modes, c.rng_seed);
}

void cmd_flow(const ExperimentConfig& c, Artifacts& art) {
  const CircleSpace space = c.space();
  const CriticalDatum d = configured_datum(c, space);
  const LoopPoint y0 = initial_loop(c, d);
  FlowOptions opts;
  opts.grad_floor = c.grad_floor;
  const Trajectory traj = integrate(space, y0, c.T, c.dt, opts);
  {
    auto os = art.file("initial.loop");
    write_loop(os, y0);
  }
  {
    auto os = art.file("trajectory.csv");
    write_trajectory_csv(os, traj);
  }
  if (c.snapshot_stride > 0) {
    for (std::size_t i = 0; i < traj.size(); i += static_cast<std::size_t>(c.snapshot_stride)) {
      std::ostringstream name;
      name << "snapshots/state_" << std::setw(7) << std::setfill('0') << i << ".loop";
      auto os = art.file(name.str());
      write_loop(os, traj.states[i]);
    }
  }
  json j = trajectory_summary(space, traj, c.tail_fraction);
  j["dt"] = c.dt;
  j["T"] = c.T;
  art.write_json("flow.json", j);
}

void cmd_scan(const ExperimentConfig& c, Artifacts& art) {
  const CircleSpace space = c.space();
  json rows = json::array();
  for (const SectorLabel& s : enumerate_sectors(space)) {
    const CriticalDatum d = find_critical(space, s, c.seed(), c.n_theta);
    for (double eps : c.scan_eps) {
      const ScanResult r = crucial_inequality_scan(space, d, eps, c.scan_samples, c.rng_seed);
      rows.push_back({{"sector", sector_json(s)},
                      {"eps", eps},
                      {"min_ratio", r.min_ratio},
                      {"prediction", r.prediction},
                      {"used", r.used},
                      {"excluded", r.excluded}});
    }
  }
  art.write_json("scan.json", {{"samples", c.scan_samples}, {"rng_seed", c.rng_seed}, {"results", rows}});
}

void cmd_index(const ExperimentConfig& c, Artifacts& art) {
  const CircleSpace space = c.space();
  std::vector<IndexQuerySpec> queries = c.queries;
  if (queries.empty()) {
    for (const SectorLabel& s : enumerate_sectors(space)) queries.push_back({0, 1, {{s.m, s.k}}});
  }
  std::ostringstream table;
  std::ostringstream csv;
  table << std::left << std::setw(7) << "genus" << std::setw(6) << "B" << std::setw(20) << "ends" << "dimension\n";
  csv << "genus,B,ends,dimension\n";
  for (const IndexQuerySpec& q : queries) {
    IndexQuery iq{space, q.genus, q.B, {}};
    std::string ends;
    for (auto [m, k] : q.ends) {
      iq.sectors.push_back(make_sector(space, m, k));
      ends += (ends.empty() ? "" : " ") + std::to_string(m) + "/" + std::to_string(k);
    }
    const std::string dim = rational_string(virtual_dimension(iq));
    table << std::setw(7) << q.genus << std::setw(6) << q.B << std::setw(20) << ends << dim << "\n";
    csv << q.genus << ',' << q.B << ',' << ends << ',' << dim << '\n';
  }
  art.file("index.txt") << table.str();
  art.file("index.csv") << csv.str();
}

void cmd_webs(const ExperimentConfig& c, Artifacts& art) {
  const EnergyModel model{c.sphere_classes_trivial, c.quantum};
  std::ostringstream counts;
  std::ostringstream listing;
  counts << "B,k,count,relations,hasse_edges,maximal,poset_ok\n";
  for (int k = 1; k <= c.webs_k_max; ++k) {
    for (int B = 1; B <= c.webs_B_max; ++B) {
      const std::vector<Web> webs = enumerate_webs(model, B, k, c.webs_genus);
      const PosetReport r = poset_check(webs);
      counts << B << ',' << k << ',' << webs.size() << ',' << r.relations << ',' << r.hasse_edges << ','
             << r.maximal << ',' << (r.ok() ? "true" : "false") << '\n';
      listing << "# B=" << B << " k=" << k << " count=" << webs.size() << '\n';
      for (const Web& w : webs) listing << encode(w) << '\n';
      if (B <= 3) {
        auto os = art.file("dot/webs_B" + std::to_string(B) + "_k" + std::to_string(k) + ".dot");
        for (std::size_t i = 0; i < webs.size(); ++i) write_dot(os, webs[i], "web" + std::to_string(i));
      }
      if (!r.ok()) throw Error("poset axioms violated: " + r.witness, "webs");
    }
  }
  art.file("webs_counts.csv") << counts.str();
  art.file("webs.txt") << listing.str();
}

void cmd_energy(const ExperimentConfig& c, Artifacts& art) {
  const CircleSpace space = c.space();
  json random = json::array();
  for (int i = 0; i < c.energy_fields; ++i) {
    const CylinderField f = random_smooth_field(space, c.n_theta, c.energy_time_nodes, c.energy_t_length,
                                                c.rng_seed + static_cast<std::uint64_t>(i));
    const EnergyIdentity e = energy_identity_check(space, f);
    random.push_back({{"lhs", e.lhs}, {"rhs", e.rhs}, {"gap", e.gap}, {"residual", e.residual},
                      {"topological", e.topological}});
  }
  const CriticalDatum d = configured_datum(c, space);
  const double horizon = c.dt * (c.energy_time_nodes - 1);
  const Trajectory traj = integrate(space, initial_loop(c, d), horizon, c.dt);
  const CylinderField f = trajectory_to_cylinder(traj);
  const EnergyIdentity e = energy_identity_check(space, f);
  const VortexResidual v = vortex_residual(space, f);
  art.write_json("energy.json", {{"random_fields", random},
                                 {"flow_field",
                                  {{"lhs", e.lhs},
                                   {"rhs", e.rhs},
                                   {"gap", e.gap},
                                   {"residual", e.residual},
                                   {"topological", e.topological},
                                   {"dbar_norm", v.dbar_norm},
                                   {"curvature_norm", v.curvature_norm}}}});
}

void cmd_period(const ExperimentConfig& c, Artifacts& art) {
  const CircleSpace space = c.space();
  const CriticalDatum d = configured_datum(c, space);
  const LoopPoint y = initial_loop(c, d);
  const PeriodProbe p = action_period_probe(space, y, c.max_winding);
  art.write_json("period.json", {{"period", p.period},
                                 {"expected", 2.0 * std::numbers::pi * c.tau},
                                 {"increments", p.increments},
                                 {"relative_residual", p.relative_residual}});
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"flow", "crit", "hessian", "scan", "index", "webs", "energy-check", "period"};
  return s;
}

int run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  std::optional<Artifacts> art;
  try {
    const auto& subs = subcommands();
    if (std::find(subs.begin(), subs.end(), opts.subcommand) == subs.end()) {
      throw Error("unknown subcommand '" + opts.subcommand + "'", "subcommand");
    }
    ExperimentConfig c = load_config(opts.config_path);
    if (opts.out_dir) c.out_dir = *opts.out_dir;
    if (opts.seed) c.rng_seed = *opts.seed;
    validate(c);
    art.emplace(c.out_dir);
    art->open();
    {
      auto os = art->file("effective_config.ini");
      write_config(os, c);
    }
    const std::string& s = opts.subcommand;
    if (s == "crit") {
      cmd_crit(c, *art);
    } else if (s == "hessian") {
      cmd_hessian(c, *art);
    } else if (s == "flow") {
      cmd_flow(c, *art);
    } else if (s == "scan") {
      cmd_scan(c, *art);
    } else if (s == "index") {
      cmd_index(c, *art);
    } else if (s == "webs") {
      cmd_webs(c, *art);
    } else if (s == "energy-check") {
      cmd_energy(c, *art);
    } else if (s == "period") {
      cmd_period(c, *art);
    }
    out << "wrote " << s << " artifacts to " << c.out_dir << "\n";
    return 0;
  } catch (const Error& e) {
    if (art) art->rollback();
    err << "error field=" << (e.field().empty() ? "-" : e.field()) << " message=\"" << one_line(e.what()) << "\"\n";
    return 2;
  } catch (const std::exception& e) {
    if (art) art->rollback();
    err << "error field=- message=\"" << one_line(e.what()) << "\"\n";
    return 3;
  }
}

}  // namespace vortexflow
