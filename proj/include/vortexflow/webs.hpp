#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vortexflow {

enum class Role { principal_root, branch_root, plain };

// A vertex with its (unordered) subtrees. Weights are classes in units of the
// generator of H_2^G = Z.
struct TreeNode {
  Role role = Role::plain;
  int weight = 0;
  std::vector<TreeNode> children;

  int total_weight() const;
  int vertex_count() const;
};

// A principal tree plus, for each of the k ordered tails, an ordered chain of
// branch-rooted trees. The k tails sit at the principal root.
struct Web {
  int genus = 0;
  TreeNode principal{Role::principal_root, 0, {}};
  std::vector<std::vector<TreeNode>> chains;

  int tails() const { return static_cast<int>(chains.size()); }
  int total_weight() const;
  int tree_count() const;    // trees in all chains
  int vertex_count() const;  // all vertices, roots included
  bool operator==(const Web& o) const;
};

struct EnergyModel {
  bool sphere_classes_trivial = true;  // H_2(X, Z) = 0, so plain vertices carry weight 0
  int quantum = 1;                     // energy of a unit class
};

// Canonical representative: children sorted by their encodings.
Web canonical(const Web& w);

// Parenthesised text form of a canonical web, e.g. "g0 r1 | b1(p1,p2) b1 | -":
// r/b/p mark principal root, branch root and plain vertex followed by the
// weight; chains are separated by '|', '-' is an empty chain.
std::string encode(const Web& w);
Web decode(const std::string& s);

// Violations of the stability and positivity conditions; empty when valid.
std::string stability_violation(const Web& w, const EnergyModel& model);

std::vector<Web> enumerate_webs(const EnergyModel& model, int B, int k, int genus);

// Webs obtained by one contraction, one merge of adjacent branch roots, or one
// absorption of a first chain tree into the principal root.
std::vector<Web> successors(const Web& w);

// True iff b is reachable from a by finitely many operations.
bool precedes(const Web& a, const Web& b);

struct PosetReport {
  int size = 0;
  long long relations = 0;   // pairs a < b with a != b
  long long hasse_edges = 0;
  int maximal = 0;
  bool closed = true;         // successors stay inside the set
  bool measure_decreasing = true;
  bool antisymmetric = true;
  bool transitive = true;
  std::string witness;        // first violation, if any

  bool ok() const { return closed && measure_decreasing && antisymmetric && transitive; }
};

PosetReport poset_check(const std::vector<Web>& webs);

// Graphviz description of one web.
void write_dot(std::ostream& os, const Web& w, const std::string& name);

}  // namespace vortexflow
