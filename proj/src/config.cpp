#include "vortexflow/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "vortexflow/error.hpp"
#include "vortexflow/flow.hpp"
#include "vortexflow/loop_io.hpp"
#include "vortexflow/spectral_grid.hpp"

namespace vortexflow {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"space", {"weights", "tau"}},
      {"grid", {"n_theta"}},
      {"critical", {"sector", "seed"}},
      {"flow", {"dt", "T", "grad_floor", "perturbation", "perturbation_modes", "tail_fraction"}},
      {"scan", {"eps", "samples", "rng_seed"}},
      {"index", {"queries"}},
      {"webs", {"B_max", "k_max", "genus", "sphere_classes_trivial", "quantum"}},
      {"energy", {"fields", "time_nodes", "t_length"}},
      {"period", {"max_winding"}},
      {"output", {"dir", "snapshot_stride"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) out.push_back(trim(part));
  return out;
}

long long parse_integer(const std::string& field, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error("expected an integer, got '" + v + "'", field);
  }
}

int parse_int(const std::string& field, const std::string& v) {
  const long long x = parse_integer(field, v);
  if (x < -(1LL << 31) || x >= (1LL << 31)) throw Error("integer out of range", field);
  return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& field, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error("expected an unsigned integer, got '" + v + "'", field);
  }
}

double parse_real(const std::string& field, const std::string& v) {
  try {
    const double x = parse_double(v);
    if (!std::isfinite(x)) throw Error("");
    return x;
  } catch (const Error&) {
    throw Error("expected a finite real number, got '" + v + "'", field);
  }
}

bool parse_bool(const std::string& field, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw Error("expected true or false, got '" + v + "'", field);
}

std::pair<int, int> parse_sector(const std::string& field, const std::string& v) {
  const auto parts = split(v, '/');
  if (parts.size() != 2) throw Error("expected a sector m/k, got '" + v + "'", field);
  return {parse_int(field, parts[0]), parse_int(field, parts[1])};
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

}  // namespace

Point ExperimentConfig::seed() const {
  Point p = Point::Ones(static_cast<Eigen::Index>(weights.size()));
  if (!seed_point.empty()) {
    for (std::size_t j = 0; j < seed_point.size(); ++j) p[static_cast<Eigen::Index>(j)] = seed_point[j];
  }
  return p;
}

ExperimentConfig parse_config(std::istream& is) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error("config syntax error at line " + std::to_string(e.line()) + ": " + e.message(), "config");
  }
  ExperimentConfig c;
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) {
      if (body.empty()) throw Error("setting outside any section", section);
      throw Error("unknown section", section);
    }
    for (const auto& [key, node] : body) {
      const std::string field = section + "." + key;
      if (!it->second.count(key)) throw Error("unknown key", field);
      const std::string v = trim(node.get_value<std::string>());
      if (field == "space.weights") {
        c.weights.clear();
        for (const auto& w : split(v, ',')) c.weights.push_back(parse_int(field, w));
      } else if (field == "space.tau") {
        c.tau = parse_real(field, v);
      } else if (field == "grid.n_theta") {
        c.n_theta = parse_int(field, v);
      } else if (field == "critical.sector") {
        std::tie(c.sector_m, c.sector_k) = parse_sector(field, v);
      } else if (field == "critical.seed") {
        c.seed_point.clear();
        for (const auto& s : split(v, ',')) c.seed_point.push_back(parse_real(field, s));
      } else if (field == "flow.dt") {
        c.dt = parse_real(field, v);
      } else if (field == "flow.T") {
        c.T = parse_real(field, v);
      } else if (field == "flow.grad_floor") {
        c.grad_floor = parse_real(field, v);
      } else if (field == "flow.perturbation") {
        c.perturbation = parse_real(field, v);
      } else if (field == "flow.perturbation_modes") {
        c.perturbation_modes = parse_int(field, v);
      } else if (field == "flow.tail_fraction") {
        c.tail_fraction = parse_real(field, v);
      } else if (field == "scan.eps") {
        c.scan_eps.clear();
        for (const auto& s : split(v, ',')) c.scan_eps.push_back(parse_real(field, s));
      } else if (field == "scan.samples") {
        c.scan_samples = parse_int(field, v);
      } else if (field == "scan.rng_seed") {
        c.rng_seed = parse_u64(field, v);
      } else if (field == "index.queries") {
        c.queries.clear();
        for (const auto& q : split(v, ';')) {
          if (q.empty()) continue;
          std::istringstream qs(q);
          std::string g, b, ends, extra;
          if (!(qs >> g >> b >> ends) || (qs >> extra)) {
            throw Error("expected 'genus B m/k[,m/k...]', got '" + q + "'", field);
          }
          IndexQuerySpec spec{parse_int(field, g), parse_integer(field, b), {}};
          for (const auto& e : split(ends, ',')) spec.ends.push_back(parse_sector(field, e));
          c.queries.push_back(std::move(spec));
        }
      } else if (field == "webs.B_max") {
        c.webs_B_max = parse_int(field, v);
      } else if (field == "webs.k_max") {
        c.webs_k_max = parse_int(field, v);
      } else if (field == "webs.genus") {
        c.webs_genus = parse_int(field, v);
      } else if (field == "webs.sphere_classes_trivial") {
        c.sphere_classes_trivial = parse_bool(field, v);
      } else if (field == "webs.quantum") {
        c.quantum = parse_int(field, v);
      } else if (field == "energy.fields") {
        c.energy_fields = parse_int(field, v);
      } else if (field == "energy.time_nodes") {
        c.energy_time_nodes = parse_int(field, v);
      } else if (field == "energy.t_length") {
        c.energy_t_length = parse_real(field, v);
      } else if (field == "period.max_winding") {
        c.max_winding = parse_int(field, v);
      } else if (field == "output.dir") {
        c.out_dir = v;
      } else if (field == "output.snapshot_stride") {
        c.snapshot_stride = parse_int(field, v);
      }
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read config file " + path, "config");
  return parse_config(is);
}

void validate(const ExperimentConfig& c) {
  const CircleSpace space = c.space();
  if (!is_valid_grid_size(c.n_theta)) throw Error("n_theta must be a power of two >= 16", "grid.n_theta");
  if (c.n_theta > 1024) throw Error("n_theta above 1024 is not supported", "grid.n_theta");
  try {
    make_sector(space, c.sector_m, c.sector_k);
  } catch (const Error& e) {
    throw Error(e.what(), "critical.sector");
  }
  if (!c.seed_point.empty() && c.seed_point.size() != c.weights.size()) {
    throw Error("seed needs one value per coordinate", "critical.seed");
  }
  if (!(c.dt > 0.0) || c.dt > max_time_step(c.n_theta)) {
    throw Error("dt must lie in (0, " + format_double(max_time_step(c.n_theta)) + "]", "flow.dt");
  }
  if (!(c.T > 0.0) || c.T / c.dt > 2e6) throw Error("T must be positive with T/dt <= 2e6", "flow.T");
  if (!(c.grad_floor > 0.0)) throw Error("grad_floor must be positive", "flow.grad_floor");
  if (!(c.perturbation >= 0.0 && c.perturbation <= 0.3)) throw Error("perturbation must lie in [0, 0.3]", "flow.perturbation");
  if (c.perturbation_modes < 0 || c.perturbation_modes > c.n_theta / 8) {
    throw Error("perturbation_modes must lie in [0, n_theta/8]", "flow.perturbation_modes");
  }
  if (!(c.tail_fraction > 0.0 && c.tail_fraction <= 1.0)) throw Error("tail_fraction must lie in (0, 1]", "flow.tail_fraction");
  if (c.scan_eps.empty()) throw Error("at least one radius is required", "scan.eps");
  for (double e : c.scan_eps) {
    if (!(e > 0.0 && e <= 0.2)) throw Error("scan radii must lie in (0, 0.2]", "scan.eps");
  }
  if (c.scan_samples < 1) throw Error("samples must be positive", "scan.samples");
  for (const IndexQuerySpec& q : c.queries) {
    if (q.genus < 0) throw Error("genus must be non-negative", "index.queries");
    if (q.B < 1) throw Error("class must be positive (B >= 1)", "index.queries");
    if (q.ends.empty()) throw Error("each query needs at least one end", "index.queries");
    for (auto [m, k] : q.ends) {
      try {
        const SectorLabel s = make_sector(space, m, k);
        if (s.m != m || s.k != k) throw Error("sector not in lowest terms");
      } catch (const Error& e) {
        throw Error(e.what(), "index.queries");
      }
    }
  }
  if (c.webs_B_max < 1 || c.webs_B_max > 10) throw Error("B_max must lie in [1, 10]", "webs.B_max");
  if (c.webs_k_max < 1 || c.webs_k_max > 4) throw Error("k_max must lie in [1, 4]", "webs.k_max");
  if (c.webs_genus < 0) throw Error("genus must be non-negative", "webs.genus");
  if (c.quantum < 1) throw Error("quantum must be at least 1", "webs.quantum");
  if (c.energy_fields < 1) throw Error("fields must be positive", "energy.fields");
  if (c.energy_time_nodes < 16) throw Error("time_nodes must be at least 16", "energy.time_nodes");
  if (!(c.energy_t_length > 0.0)) throw Error("t_length must be positive", "energy.t_length");
  if (c.max_winding < 1 || c.max_winding > 8) throw Error("max_winding must lie in [1, 8]", "period.max_winding");
  if (c.out_dir.empty()) throw Error("output directory must be named", "output.dir");
  if (c.snapshot_stride < 0) throw Error("snapshot_stride must be non-negative", "output.snapshot_stride");
}

void write_config(std::ostream& os, const ExperimentConfig& c) {
  os << "[space]\nweights = " << join_ints(c.weights) << "\ntau = " << format_double(c.tau) << "\n\n";
  os << "[grid]\nn_theta = " << c.n_theta << "\n\n";
  os << "[critical]\nsector = " << c.sector_m << "/" << c.sector_k << "\n";
  if (!c.seed_point.empty()) os << "seed = " << join_reals(c.seed_point) << "\n";
  os << "\n[flow]\ndt = " << format_double(c.dt) << "\nT = " << format_double(c.T)
     << "\ngrad_floor = " << format_double(c.grad_floor) << "\nperturbation = " << format_double(c.perturbation)
     << "\nperturbation_modes = " << c.perturbation_modes << "\ntail_fraction = " << format_double(c.tail_fraction)
     << "\n\n";
  os << "[scan]\neps = " << join_reals(c.scan_eps) << "\nsamples = " << c.scan_samples
     << "\nrng_seed = " << c.rng_seed << "\n\n";
  os << "[index]\nqueries = ";
  for (std::size_t i = 0; i < c.queries.size(); ++i) {
    const auto& q = c.queries[i];
    os << (i ? "; " : "") << q.genus << " " << q.B << " ";
    for (std::size_t e = 0; e < q.ends.size(); ++e) os << (e ? "," : "") << q.ends[e].first << "/" << q.ends[e].second;
  }
  os << "\n\n";
  os << "[webs]\nB_max = " << c.webs_B_max << "\nk_max = " << c.webs_k_max << "\ngenus = " << c.webs_genus
     << "\nsphere_classes_trivial = " << (c.sphere_classes_trivial ? "true" : "false") << "\nquantum = " << c.quantum
     << "\n\n";
  os << "[energy]\nfields = " << c.energy_fields << "\ntime_nodes = " << c.energy_time_nodes
     << "\nt_length = " << format_double(c.energy_t_length) << "\n\n";
  os << "[period]\nmax_winding = " << c.max_winding << "\n\n";
  os << "[output]\ndir = " << c.out_dir << "\nsnapshot_stride = " << c.snapshot_stride << "\n";
}

}  // namespace vortexflow
