#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vortexflow/index.hpp"

namespace test_support {

struct IndexRow {
  std::string line;
  vortexflow::IndexQuery query;
  vortexflow::Rational expected;
};

inline std::vector<int> split_ints(const std::string& s, char sep) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(std::stoi(item));
  return out;
}

inline vortexflow::Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return vortexflow::Rational(std::stoll(s));
  return {std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
}

inline std::vector<IndexRow> load_index_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<IndexRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string weights, sectors, expected;
    double tau = 0.0;
    int genus = 0;
    long long B = 0;
    ls >> weights >> tau >> genus >> B >> sectors >> expected;
    vortexflow::CircleSpace space(split_ints(weights, ','), tau);
    std::vector<vortexflow::SectorLabel> labels;
    std::stringstream ss(sectors);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto mk = split_ints(item, '/');
      labels.push_back(vortexflow::make_sector(space, mk.at(0), mk.at(1)));
    }
    rows.push_back({line, {space, genus, B, labels}, parse_rational(expected)});
  }
  return rows;
}

}  // namespace test_support
