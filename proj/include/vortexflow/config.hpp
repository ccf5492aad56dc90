#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vortexflow/circle_space.hpp"
#include "vortexflow/critical.hpp"
#include "vortexflow/index.hpp"

namespace vortexflow {

struct IndexQuerySpec {
  int genus = 0;
  long long B = 1;
  std::vector<std::pair<int, int>> ends;  // (m, k) per cylindrical end
};

struct ExperimentConfig {
  std::vector<int> weights{1};
  double tau = 0.5;
  int n_theta = 64;

  int sector_m = 1;
  int sector_k = 0;
  std::vector<double> seed_point;  // empty: all ones

  double dt = 1e-3;
  double T = 40.0;
  double grad_floor = 1e-9;
  double perturbation = 0.05;
  int perturbation_modes = 4;
  double tail_fraction = 0.5;

  std::vector<double> scan_eps{0.05, 0.1, 0.2};
  int scan_samples = 1000;
  std::uint64_t rng_seed = 1;

  std::vector<IndexQuerySpec> queries;

  int webs_B_max = 3;
  int webs_k_max = 2;
  int webs_genus = 0;
  bool sphere_classes_trivial = true;
  int quantum = 1;

  int energy_fields = 20;
  int energy_time_nodes = 64;
  double energy_t_length = 1.0;

  int max_winding = 3;

  std::string out_dir = "out";
  int snapshot_stride = 0;

  CircleSpace space() const { return {weights, tau}; }
  Point seed() const;
};

// Parses and validates an INI file; unknown sections or keys are rejected.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& is);

// Checks cross-field preconditions; throws Error naming the field.
void validate(const ExperimentConfig& c);

// Writes every setting with defaults resolved, in the accepted input format.
void write_config(std::ostream& os, const ExperimentConfig& c);

}  // namespace vortexflow
