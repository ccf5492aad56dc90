#include "vortexflow/loop_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "vortexflow/error.hpp"

namespace vortexflow {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw Error("cannot format number");
  return {buf.data(), end};
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [end, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || end != last) throw Error("not a number: '" + s + "'");
  return v;
}

void write_loop(std::ostream& os, const LoopPoint& y) {
  os << "theta";
  for (int j = 1; j <= y.dim(); ++j) os << " re_x" << j << " im_x" << j;
  os << " eta\n";
  for (int k = 0; k < y.grid_size(); ++k) {
    os << format_double(y.grid().theta(k));
    for (int j = 0; j < y.dim(); ++j) {
      os << ' ' << format_double(y.x()(k, j).real()) << ' ' << format_double(y.x()(k, j).imag());
    }
    os << ' ' << format_double(y.eta()[k]) << '\n';
  }
}

LoopPoint read_loop(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("loop file is empty", "loop");
  std::istringstream header(line);
  std::vector<std::string> cols;
  for (std::string c; header >> c;) cols.push_back(c);
  if (cols.size() < 4 || cols.front() != "theta" || cols.back() != "eta" || (cols.size() - 2) % 2 != 0) {
    throw Error("malformed loop header: '" + line + "'", "loop");
  }
  const int dim = static_cast<int>(cols.size() - 2) / 2;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::vector<double> vals;
    for (std::string tok; row >> tok;) vals.push_back(parse_double(tok));
    if (vals.size() != cols.size()) {
      throw Error("loop row " + std::to_string(rows.size() + 1) + " has " + std::to_string(vals.size()) +
                      " columns, expected " + std::to_string(cols.size()),
                  "loop");
    }
    rows.push_back(std::move(vals));
  }
  const int N = static_cast<int>(rows.size());
  if (!is_valid_grid_size(N)) throw Error("loop has " + std::to_string(N) + " rows; need a power of two >= 16", "loop");
  Eigen::MatrixXcd x(N, dim);
  Eigen::VectorXd eta(N);
  for (int k = 0; k < N; ++k) {
    const auto& r = rows[static_cast<std::size_t>(k)];
    for (int j = 0; j < dim; ++j) x(k, j) = Complex(r[1 + 2 * j], r[2 + 2 * j]);
    eta[k] = r.back();
  }
  return {std::move(x), std::move(eta)};
}

void save_loop(const std::string& path, const LoopPoint& y) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path, "output");
  write_loop(os, y);
}

LoopPoint load_loop(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read " + path, "loop");
  return read_loop(is);
}

}  // namespace vortexflow
