#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "oracles/oracles.hpp"
#include "vortexflow/error.hpp"
#include "vortexflow/webs.hpp"

using namespace vortexflow;

namespace {

const EnergyModel trivial_model{true, 1};
const EnergyModel sphere_model{false, 1};

std::vector<std::string> encodings(const std::vector<Web>& ws) {
  std::vector<std::string> out;
  for (const Web& w : ws) out.push_back(encode(w));
  return out;
}

}  // namespace

TEST_CASE("small enumerations by hand") {
  CHECK(encodings(enumerate_webs(trivial_model, 1, 1, 0)).size() == 2);
  const Web bare = decode("g0 r1 | -");
  const Web chained = decode("g0 r0 | b1");
  const auto b1 = enumerate_webs(trivial_model, 1, 1, 0);
  CHECK(std::count(b1.begin(), b1.end(), bare) == 1);
  CHECK(std::count(b1.begin(), b1.end(), chained) == 1);
  CHECK(enumerate_webs(trivial_model, 1, 2, 0).size() == 3);
  CHECK(enumerate_webs(trivial_model, 2, 1, 0).size() == 4);
  CHECK_THROWS_AS(enumerate_webs(trivial_model, 0, 1, 0), Error);
  CHECK_THROWS_AS(enumerate_webs(trivial_model, 1, 0, 0), Error);
}

TEST_CASE("counts match the composition oracle") {
  for (int d = 1; d <= 6; ++d) CHECK(enumerate_webs(trivial_model, d, 1, 0).size() == (std::size_t{1} << d));
  for (int k = 1; k <= 3; ++k) {
    for (int B = 1; B <= 8; ++B) {
      CHECK(static_cast<long long>(enumerate_webs(trivial_model, B, k, 0).size()) ==
            oracle::composition_count(B, k));
    }
  }
}

TEST_CASE("enumerated webs are valid, canonical and distinct") {
  for (const EnergyModel& model : {trivial_model, sphere_model}) {
    for (int B = 1; B <= 4; ++B) {
      for (int k = 1; k <= 2; ++k) {
        const auto ws = enumerate_webs(model, B, k, 1);
        std::set<std::string> seen;
        for (const Web& w : ws) {
          CHECK(stability_violation(w, model).empty());
          CHECK(w.total_weight() == B);
          CHECK(w.tails() == k);
          CHECK(w.genus == 1);
          CHECK(canonical(w) == w);
          CHECK(canonical(canonical(w)) == canonical(w));
          CHECK(decode(encode(w)) == w);
          seen.insert(encode(w));
        }
        CHECK(seen.size() == ws.size());
      }
    }
  }
  CHECK(enumerate_webs(sphere_model, 3, 1, 0).size() > enumerate_webs(trivial_model, 3, 1, 0).size());
}

TEST_CASE("stability conditions") {
  CHECK(!stability_violation(decode("g0 r0 | b0"), trivial_model).empty());
  CHECK(!stability_violation(decode("g0 r0(p0(p1)) | -"), sphere_model).empty());
  CHECK(stability_violation(decode("g0 r0(p0(p1,p1),p1) | -"), sphere_model).empty());
  CHECK(!stability_violation(decode("g0 r0(p1) | -"), trivial_model).empty());
  CHECK_THROWS_AS(decode("g0 x1 | -"), Error);
}

TEST_CASE("order examples") {
  const Web bare = decode("g0 r1 | -");
  const Web chained = decode("g0 r0 | b1");
  CHECK(precedes(bare, bare));
  CHECK(precedes(chained, bare));
  CHECK(!precedes(bare, chained));
  CHECK(precedes(decode("g0 r0 | b1 b1"), decode("g0 r0 | b2")));
  CHECK(precedes(decode("g0 r0 | b1 b1"), decode("g0 r2 | -")));
  CHECK(!precedes(decode("g0 r0 | b2"), decode("g0 r1 | b1")));
  CHECK_THROWS_AS(precedes(bare, decode("g0 r2 | -")), Error);
}

TEST_CASE("successors conserve weight and decrease the measure") {
  for (const Web& w : enumerate_webs(sphere_model, 4, 2, 0)) {
    for (const Web& s : successors(w)) {
      CHECK(s.total_weight() == w.total_weight());
      CHECK(s.tree_count() + s.vertex_count() < w.tree_count() + w.vertex_count());
      CHECK(canonical(s) == s);
    }
  }
}

TEST_CASE("poset checks") {
  const PosetReport one = poset_check({decode("g0 r1 | -")});
  CHECK(one.ok());
  CHECK(one.relations == 0);
  const PosetReport p1 = poset_check(enumerate_webs(trivial_model, 1, 1, 0));
  CHECK(p1.ok());
  CHECK(p1.relations == 1);
  CHECK(p1.hasse_edges == 1);
  const PosetReport p2 = poset_check(enumerate_webs(trivial_model, 2, 1, 0));
  CHECK(p2.ok());
  CHECK(p2.size == 4);
  CHECK(p2.maximal == 1);
  for (int k = 1; k <= 3; ++k) {
    for (int B = 1; B <= 5; ++B) {
      const PosetReport r = poset_check(enumerate_webs(trivial_model, B, k, 0));
      CHECK(r.ok());
      CHECK(r.maximal == 1);
    }
  }
  CHECK(poset_check(enumerate_webs(sphere_model, 4, 2, 0)).ok());
  std::ostringstream dot;
  write_dot(dot, decode("g0 r0(p1) | b1"), "w");
  CHECK(dot.str().find("digraph w") != std::string::npos);
}
