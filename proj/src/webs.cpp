#include "vortexflow/webs.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <cctype>
#include <deque>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "vortexflow/error.hpp"

namespace vortexflow {

namespace {

char role_char(Role r) {
  switch (r) {
    case Role::principal_root:
      return 'r';
    case Role::branch_root:
      return 'b';
    case Role::plain:
      return 'p';
  }
  return '?';
}

std::string encode_node(const TreeNode& t) {
  std::string s(1, role_char(t.role));
  s += std::to_string(t.weight);
  if (!t.children.empty()) {
    s += '(';
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      if (i) s += ',';
      s += encode_node(t.children[i]);
    }
    s += ')';
  }
  return s;
}

TreeNode canonical_node(const TreeNode& t) {
  TreeNode out{t.role, t.weight, {}};
  std::vector<std::pair<std::string, TreeNode>> kids;
  for (const TreeNode& c : t.children) {
    TreeNode cc = canonical_node(c);
    kids.emplace_back(encode_node(cc), std::move(cc));
  }
  std::sort(kids.begin(), kids.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [key, node] : kids) out.children.push_back(std::move(node));
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Web web() {
    Web w;
    skip();
    expect('g');
    w.genus = number();
    skip();
    w.principal = node();
    if (w.principal.role != Role::principal_root) fail("first tree must be the principal tree");
    skip();
    while (pos_ < s_.size()) {
      expect('|');
      skip();
      std::vector<TreeNode> chain;
      if (peek() == '-') {
        ++pos_;
      } else {
        while (pos_ < s_.size() && peek() != '|') {
          chain.push_back(node());
          if (chain.back().role != Role::branch_root) fail("chain trees must have branch roots");
          skip();
        }
      }
      w.chains.push_back(std::move(chain));
      skip();
    }
    return w;
  }

 private:
  TreeNode node() {
    TreeNode t;
    const char c = peek();
    if (c == 'r') {
      t.role = Role::principal_root;
    } else if (c == 'b') {
      t.role = Role::branch_root;
    } else if (c == 'p') {
      t.role = Role::plain;
    } else {
      fail("expected a vertex");
    }
    ++pos_;
    t.weight = number();
    if (pos_ < s_.size() && peek() == '(') {
      ++pos_;
      for (;;) {
        t.children.push_back(node());
        if (t.children.back().role != Role::plain) fail("inner vertices must be plain");
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
    }
    return t;
  }

  int number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("bad web encoding at offset " + std::to_string(pos_) + ": " + what, "web");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::string node_violation(const TreeNode& t, const EnergyModel& model) {
  if (t.weight < 0) return "negative weight at " + encode_node(t);
  for (const TreeNode& c : t.children) {
    if (c.role != Role::plain) return "non-plain inner vertex under " + encode_node(t);
    if (std::string v = node_violation(c, model); !v.empty()) return v;
  }
  if (t.role == Role::plain) {
    if (model.sphere_classes_trivial && t.weight != 0) return "plain vertex with a nonzero sphere class";
    if (t.weight == 0) {
      const auto heavy = std::count_if(t.children.begin(), t.children.end(),
                                       [](const TreeNode& c) { return c.total_weight() > 0; });
      if (heavy < 2) return "unstable weight-0 plain vertex " + encode_node(t);
    }
  }
  if (t.role == Role::branch_root && t.weight == 0 && t.children.empty()) return "trivial weight-0 branch tree";
  return {};
}

// Memoised generators of canonical trees by total weight.
class Generator {
 public:
  explicit Generator(const EnergyModel& model) : model_(model) {}

  const std::vector<TreeNode>& plain(int total) {
    if (auto it = plain_.find(total); it != plain_.end()) return it->second;
    std::vector<TreeNode> out;
    for (int w = 0; w <= total; ++w) {
      if (model_.sphere_classes_trivial && w != 0) continue;
      if (w == 0 && total == 0) continue;
      for (auto& f : forests(total - w, w == 0 ? 2 : 0, total)) {
        out.push_back(canonical_node(TreeNode{Role::plain, w, std::move(f)}));
      }
    }
    return plain_.emplace(total, std::move(out)).first->second;
  }

  std::vector<TreeNode> rooted(Role role, int total) {
    std::vector<TreeNode> out;
    for (int w = 0; w <= total; ++w) {
      const int min_children = (role == Role::branch_root && w == 0) ? 1 : 0;
      for (auto& f : forests(total - w, min_children, total + 1)) {
        out.push_back(canonical_node(TreeNode{role, w, std::move(f)}));
      }
    }
    return out;
  }

  const std::vector<std::vector<TreeNode>>& chains(int total) {
    if (auto it = chains_.find(total); it != chains_.end()) return it->second;
    std::vector<std::vector<TreeNode>> out;
    if (total == 0) {
      out.emplace_back();
    } else {
      for (int t = 1; t <= total; ++t) {
        const std::vector<TreeNode> heads = rooted(Role::branch_root, t);
        const auto& rests = chains(total - t);
        for (const TreeNode& h : heads) {
          for (const auto& rest : rests) {
            std::vector<TreeNode> c{h};
            c.insert(c.end(), rest.begin(), rest.end());
            out.push_back(std::move(c));
          }
        }
      }
    }
    return chains_.emplace(total, std::move(out)).first->second;
  }

 private:
  // Multisets of plain trees with positive totals summing to `total`, each
  // total below `bound`, with at least `min_count` members.
  std::vector<std::vector<TreeNode>> forests(int total, int min_count, int bound) {
    std::vector<const TreeNode*> pool;
    for (int t = 1; t <= total && t < bound; ++t) {
      for (const TreeNode& tr : plain(t)) pool.push_back(&tr);
    }
    std::vector<std::vector<TreeNode>> out;
    std::vector<TreeNode> cur;
    extend(pool, 0, total, min_count, cur, out);
    return out;
  }

  void extend(const std::vector<const TreeNode*>& pool, std::size_t from, int remaining, int min_count,
              std::vector<TreeNode>& cur, std::vector<std::vector<TreeNode>>& out) {
    if (remaining == 0) {
      if (static_cast<int>(cur.size()) >= min_count) out.push_back(cur);
      return;
    }
    for (std::size_t i = from; i < pool.size(); ++i) {
      const int t = pool[i]->total_weight();
      if (t > remaining) continue;
      cur.push_back(*pool[i]);
      extend(pool, i, remaining - t, min_count, cur, out);
      cur.pop_back();
    }
  }

  EnergyModel model_;
  std::map<int, std::vector<TreeNode>> plain_;
  std::map<int, std::vector<std::vector<TreeNode>>> chains_;
};

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions(total - v, parts, cur, out);
    cur.pop_back();
  }
}

std::vector<TreeNode> contractions(const TreeNode& t) {
  std::vector<TreeNode> out;
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (t.role == Role::plain) {
      TreeNode merged{Role::plain, t.weight + t.children[i].weight, {}};
      for (std::size_t j = 0; j < t.children.size(); ++j) {
        if (j != i) merged.children.push_back(t.children[j]);
      }
      for (const TreeNode& g : t.children[i].children) merged.children.push_back(g);
      out.push_back(std::move(merged));
    }
    for (TreeNode& c : contractions(t.children[i])) {
      TreeNode copy = t;
      copy.children[i] = std::move(c);
      out.push_back(std::move(copy));
    }
  }
  return out;
}

int measure(const Web& w) { return w.tree_count() + w.vertex_count(); }

}  // namespace

int TreeNode::total_weight() const {
  int s = weight;
  for (const TreeNode& c : children) s += c.total_weight();
  return s;
}

int TreeNode::vertex_count() const {
  int s = 1;
  for (const TreeNode& c : children) s += c.vertex_count();
  return s;
}

int Web::total_weight() const {
  int s = principal.total_weight();
  for (const auto& chain : chains) {
    for (const TreeNode& t : chain) s += t.total_weight();
  }
  return s;
}

int Web::tree_count() const {
  int s = 0;
  for (const auto& chain : chains) s += static_cast<int>(chain.size());
  return s;
}

int Web::vertex_count() const {
  int s = principal.vertex_count();
  for (const auto& chain : chains) {
    for (const TreeNode& t : chain) s += t.vertex_count();
  }
  return s;
}

bool Web::operator==(const Web& o) const { return encode(*this) == encode(o); }

Web canonical(const Web& w) {
  Web out;
  out.genus = w.genus;
  out.principal = canonical_node(w.principal);
  for (const auto& chain : w.chains) {
    std::vector<TreeNode> c;
    for (const TreeNode& t : chain) c.push_back(canonical_node(t));
    out.chains.push_back(std::move(c));
  }
  return out;
}

std::string encode(const Web& w) {
  const Web c = canonical(w);
  std::string s = "g" + std::to_string(c.genus) + " " + encode_node(c.principal);
  for (const auto& chain : c.chains) {
    s += " |";
    if (chain.empty()) s += " -";
    for (const TreeNode& t : chain) s += " " + encode_node(t);
  }
  return s;
}

Web decode(const std::string& s) { return canonical(Parser(s).web()); }

std::string stability_violation(const Web& w, const EnergyModel& model) {
  if (w.genus < 0) return "negative genus";
  if (w.chains.empty()) return "a web needs at least one tail";
  if (w.principal.role != Role::principal_root) return "principal tree root has the wrong role";
  if (std::string v = node_violation(w.principal, model); !v.empty()) return v;
  for (const auto& chain : w.chains) {
    for (const TreeNode& t : chain) {
      if (t.role != Role::branch_root) return "chain tree root is not a branch root";
      if (std::string v = node_violation(t, model); !v.empty()) return v;
    }
  }
  return {};
}

std::vector<Web> enumerate_webs(const EnergyModel& model, int B, int k, int genus) {
  if (B < 1) throw Error("class must be positive (B >= 1)", "webs.B");
  if (k < 1) throw Error("at least one tail is required", "webs.k");
  if (genus < 0) throw Error("genus must be non-negative", "webs.genus");
  if (model.quantum < 1) throw Error("energy quantum must be at least 1", "webs.quantum");
  Generator gen(model);
  std::vector<Web> out;
  for (int p = 0; p <= B; ++p) {
    const std::vector<TreeNode> principals = gen.rooted(Role::principal_root, p);
    std::vector<std::vector<int>> splits;
    std::vector<int> cur;
    compositions(B - p, k, cur, splits);
    for (const TreeNode& root : principals) {
      for (const auto& split : splits) {
        // Cartesian product of chains over the tails.
        std::vector<std::vector<std::vector<TreeNode>>> partial{{}};
        for (int tail = 0; tail < k; ++tail) {
          std::vector<std::vector<std::vector<TreeNode>>> next;
          for (const auto& prefix : partial) {
            for (const auto& chain : gen.chains(split[static_cast<std::size_t>(tail)])) {
              auto extended = prefix;
              extended.push_back(chain);
              next.push_back(std::move(extended));
            }
          }
          partial = std::move(next);
        }
        for (auto& chains : partial) out.push_back(canonical(Web{genus, root, std::move(chains)}));
      }
    }
  }
  std::vector<std::pair<std::string, Web>> keyed;
  for (Web& w : out) keyed.emplace_back(encode(w), std::move(w));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<Web> result;
  for (auto& [key, w] : keyed) result.push_back(std::move(w));
  return result;
}

std::vector<Web> successors(const Web& w) {
  std::vector<Web> out;
  auto add = [&](Web v) { out.push_back(canonical(v)); };
  for (TreeNode& t : contractions(w.principal)) {
    Web v = w;
    v.principal = std::move(t);
    add(std::move(v));
  }
  for (std::size_t i = 0; i < w.chains.size(); ++i) {
    const auto& chain = w.chains[i];
    for (std::size_t j = 0; j < chain.size(); ++j) {
      for (TreeNode& t : contractions(chain[j])) {
        Web v = w;
        v.chains[i][j] = std::move(t);
        add(std::move(v));
      }
    }
    for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
      Web v = w;
      TreeNode merged{Role::branch_root, chain[j].weight + chain[j + 1].weight, chain[j].children};
      merged.children.insert(merged.children.end(), chain[j + 1].children.begin(), chain[j + 1].children.end());
      auto& c = v.chains[i];
      c[j] = std::move(merged);
      c.erase(c.begin() + static_cast<std::ptrdiff_t>(j) + 1);
      add(std::move(v));
    }
    if (!chain.empty()) {
      Web v = w;
      v.principal.weight += chain.front().weight;
      v.principal.children.insert(v.principal.children.end(), chain.front().children.begin(),
                                  chain.front().children.end());
      v.chains[i].erase(v.chains[i].begin());
      add(std::move(v));
    }
  }
  std::vector<std::pair<std::string, Web>> keyed;
  for (Web& v : out) keyed.emplace_back(encode(v), std::move(v));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<Web> result;
  for (auto& [key, v] : keyed) result.push_back(std::move(v));
  return result;
}

bool precedes(const Web& a, const Web& b) {
  if (a.genus != b.genus || a.tails() != b.tails() || a.total_weight() != b.total_weight()) {
    throw Error("webs of different type (genus, tails, class) are not comparable", "webs");
  }
  const std::string target = encode(b);
  std::unordered_set<std::string> seen{encode(a)};
  std::deque<Web> queue{canonical(a)};
  while (!queue.empty()) {
    const Web cur = std::move(queue.front());
    queue.pop_front();
    if (encode(cur) == target) return true;
    for (Web& s : successors(cur)) {
      if (measure(s) >= measure(cur)) throw Error("operation failed to decrease the web measure", "webs");
      if (seen.insert(encode(s)).second) queue.push_back(std::move(s));
    }
  }
  return false;
}

PosetReport poset_check(const std::vector<Web>& webs) {
  PosetReport r;
  const int n = static_cast<int>(webs.size());
  r.size = n;
  std::unordered_map<std::string, int> index;
  std::vector<std::string> keys;
  for (int i = 0; i < n; ++i) {
    keys.push_back(encode(webs[static_cast<std::size_t>(i)]));
    if (!index.emplace(keys.back(), i).second) {
      r.closed = false;
      if (r.witness.empty()) r.witness = "duplicate web " + keys.back();
    }
  }
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Web& w = webs[static_cast<std::size_t>(i)];
    for (const Web& s : successors(w)) {
      const auto it = index.find(encode(s));
      if (it == index.end()) {
        r.closed = false;
        if (r.witness.empty()) r.witness = "successor outside the set: " + keys[static_cast<std::size_t>(i)];
        continue;
      }
      if (measure(s) >= measure(w)) {
        r.measure_decreasing = false;
        if (r.witness.empty()) r.witness = "measure not decreasing: " + keys[static_cast<std::size_t>(i)];
      }
      succ[static_cast<std::size_t>(i)].push_back(it->second);
    }
  }
  // Reachability by an independent search from every element.
  std::vector<boost::dynamic_bitset<>> reach(static_cast<std::size_t>(n), boost::dynamic_bitset<>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    auto& R = reach[static_cast<std::size_t>(i)];
    std::vector<int> stack{i};
    R.set(static_cast<std::size_t>(i));
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int s : succ[static_cast<std::size_t>(v)]) {
        if (!R.test(static_cast<std::size_t>(s))) {
          R.set(static_cast<std::size_t>(s));
          stack.push_back(s);
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    const auto& R = reach[static_cast<std::size_t>(i)];
    r.relations += static_cast<long long>(R.count()) - 1;
    if (R.count() == 1) ++r.maximal;
    boost::dynamic_bitset<> covers = R;
    covers.reset(static_cast<std::size_t>(i));
    for (auto j = R.find_first(); j != boost::dynamic_bitset<>::npos; j = R.find_next(j)) {
      if (static_cast<int>(j) == i) continue;
      const auto& Rj = reach[j];
      if (Rj.test(static_cast<std::size_t>(i)) && r.antisymmetric) {
        r.antisymmetric = false;
        if (r.witness.empty()) r.witness = "cycle between " + keys[static_cast<std::size_t>(i)] + " and " + keys[j];
      }
      if (!Rj.is_subset_of(R) && r.transitive) {
        r.transitive = false;
        if (r.witness.empty()) r.witness = "not transitive at " + keys[static_cast<std::size_t>(i)];
      }
      boost::dynamic_bitset<> strict = Rj;
      strict.reset(j);
      covers -= strict;
    }
    r.hasse_edges += static_cast<long long>(covers.count());
  }
  return r;
}

void write_dot(std::ostream& os, const Web& w, const std::string& name) {
  const Web c = canonical(w);
  int next = 0;
  os << "digraph " << name << " {\n";
  auto emit = [&](auto&& self, const TreeNode& t) -> int {
    const int id = next++;
    const char* shape = t.role == Role::principal_root ? "doublecircle" : (t.role == Role::branch_root ? "box" : "circle");
    os << "  v" << id << " [label=\"" << t.weight << "\", shape=" << shape << "];\n";
    for (const TreeNode& ch : t.children) {
      const int cid = self(self, ch);
      os << "  v" << id << " -> v" << cid << ";\n";
    }
    return id;
  };
  const int root = emit(emit, c.principal);
  os << "  v" << root << " [xlabel=\"g=" << c.genus << "\"];\n";
  for (std::size_t i = 0; i < c.chains.size(); ++i) {
    int prev = root;
    for (const TreeNode& t : c.chains[i]) {
      const int id = emit(emit, t);
      os << "  v" << prev << " -> v" << id << " [style=dashed, label=\"" << (i + 1) << "\"];\n";
      prev = id;
    }
  }
  os << "}\n";
}

}  // namespace vortexflow
