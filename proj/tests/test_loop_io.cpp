#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "support.hpp"
#include "vortexflow/error.hpp"
#include "vortexflow/loop_io.hpp"

using namespace vortexflow;

TEST_CASE("double formatting round trips bit-exactly") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(parse_double(format_double(-0.0)) == 0.0);
  CHECK_THROWS_AS(parse_double("1.0x"), Error);
  CHECK_THROWS_AS(parse_double(""), Error);
}

TEST_CASE("loop files round trip bit-exactly") {
  std::mt19937_64 rng(9);
  const LoopPoint y = test_support::random_loop(rng, 32, 3);
  std::stringstream ss;
  write_loop(ss, y);
  const LoopPoint z = read_loop(ss);
  CHECK(z.grid().size() == 32);
  CHECK(z.x() == y.x());
  CHECK(z.eta() == y.eta());

  const auto path = std::filesystem::temp_directory_path() / "vortexflow_io_test.loop";
  save_loop(path.string(), y);
  const LoopPoint w = load_loop(path.string());
  CHECK(w.x() == y.x());
  CHECK(w.eta() == y.eta());
  std::filesystem::remove(path);
}

TEST_CASE("malformed loop files are rejected") {
  std::stringstream bad_header("theta x eta\n0 1 2\n");
  CHECK_THROWS_AS(read_loop(bad_header), Error);
  std::mt19937_64 rng(1);
  std::stringstream ss;
  write_loop(ss, test_support::random_loop(rng, 16, 1));
  std::string text = ss.str();
  text.resize(text.rfind('\n', text.size() - 2) + 1);
  std::stringstream truncated(text);
  CHECK_THROWS_AS(read_loop(truncated), Error);
  CHECK_THROWS_AS(load_loop("/nonexistent/loop.txt"), Error);
}

TEST_CASE("golden loop file") {
  const LoopPoint y = load_loop(std::string(VORTEXFLOW_FIXTURES) + "/twisted_1_2.loop");
  CHECK(y.grid_size() == 16);
  CHECK(y.dim() == 2);
  const CircleSpace s({1, 2}, 1.0);
  CHECK(l2_norm(y, grad_action(s, y)) <= 1e-12);
  CHECK(std::abs(holonomy(y) - std::acos(-1.0)) <= 1e-12);
  CHECK((y.x().col(0).array().abs()).maxCoeff() <= 1e-15);
}
