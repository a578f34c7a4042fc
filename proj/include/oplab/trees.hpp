#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oplab {

enum class VertexKind { Label, Alpha };

struct VertexDecoration {
  VertexKind kind = VertexKind::Label;
  int label = 0;  // meaningful for kind == Label
  bool marked = false;

  bool operator==(const VertexDecoration&) const = default;
};

inline VertexDecoration label_dec(int i, bool marked = false) {
  return {VertexKind::Label, i, marked};
}
inline VertexDecoration alpha_dec(bool marked = false) {
  return {VertexKind::Alpha, 0, marked};
}

// A decorated rooted tree. parent[v] == v exactly for the root. Vertices are
// identified positionally; labels live in the decorations.
//
// Homological degree bookkeeping: Alpha vertices are odd (degree -1); Label
// vertices are odd iff odd_all_vertices is set (the deformation-complex
// models, where every vertex is a desuspended generator). The orientation of
// a tree is the list of its odd vertices ordered by (Label vertices by label
// value, then Alpha vertices by vertex id).
struct RootedTree {
  std::vector<int> parent;
  std::vector<VertexDecoration> dec;
  bool odd_all_vertices = false;

  int size() const { return static_cast<int>(parent.size()); }

  int root() const {
    for (int v = 0; v < size(); ++v)
      if (parent[v] == v) return v;
    throw std::logic_error("RootedTree: no root");
  }

  bool vertex_odd(int v) const {
    return dec[v].kind == VertexKind::Alpha || odd_all_vertices;
  }

  std::vector<std::vector<int>> children() const {
    std::vector<std::vector<int>> ch(size());
    for (int v = 0; v < size(); ++v)
      if (parent[v] != v) ch[parent[v]].push_back(v);
    return ch;
  }

  int degree() const {
    int odd = 0;
    for (int v = 0; v < size(); ++v)
      if (vertex_odd(v)) ++odd;
    return -odd;
  }
};

struct TreeError : std::runtime_error {
  explicit TreeError(const std::string& what) : std::runtime_error(what) {}
};

struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

inline void validate_tree(const RootedTree& t) {
  const int n = t.size();
  if (n == 0) throw TreeError("empty tree rejected");
  int roots = 0, marks = 0;
  for (int v = 0; v < n; ++v) {
    if (t.parent[v] < 0 || t.parent[v] >= n) throw TreeError("parent out of range");
    if (t.parent[v] == v) ++roots;
    if (t.dec[v].marked) ++marks;
  }
  if (roots != 1) throw TreeError("tree must have exactly one root");
  if (marks > 1) throw TreeError("at most one marked vertex");
  // connectivity / acyclicity: walk to root from every vertex
  for (int v = 0; v < n; ++v) {
    int u = v, steps = 0;
    while (t.parent[u] != u) {
      u = t.parent[u];
      if (++steps > n) throw TreeError("parent relation has a cycle");
    }
  }
  // labels must be distinct; the enumerated bases use exactly {1..n}, while
  // multilinear submodels carry subsets of a larger label set
  std::vector<int> labels;
  for (int v = 0; v < n; ++v)
    if (t.dec[v].kind == VertexKind::Label) labels.push_back(t.dec[v].label);
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw TreeError("duplicate label");
}

// ---------------------------------------------------------------------------
// Tree literal grammar (bit-exact per the external interface):
//   tree    := vertex | vertex "(" tree ("," tree)* ")"
//   vertex  := label ["@"] | "*" ["@"]
//   label   := decimal integer >= 1 ; "*" is an Alpha vertex; "@" marks.
// Whitespace is insignificant on input; format emits none.
// ---------------------------------------------------------------------------

namespace detail {

struct TreeParser {
  const std::string& s;
  std::size_t pos = 0;
  RootedTree t;

  explicit TreeParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n')) ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw TreeError("parse error at position " + std::to_string(pos) + ": " + msg);
  }

  int parse_vertex(int parent_id) {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    VertexDecoration d;
    if (s[pos] == '*') {
      d = alpha_dec();
      ++pos;
    } else if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
      std::size_t start = pos;
      long val = 0;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        val = val * 10 + (s[pos] - '0');
        if (val > 1'000'000) fail("label too large");
        ++pos;
      }
      if (val < 1) {
        pos = start;
        fail("label must be >= 1");
      }
      d = label_dec(static_cast<int>(val));
    } else {
      fail("expected label, '*' or digit");
    }
    skip_ws();
    if (pos < s.size() && s[pos] == '@') {
      d.marked = true;
      ++pos;
    }
    int id = t.size();
    t.parent.push_back(parent_id < 0 ? id : parent_id);
    t.dec.push_back(d);
    skip_ws();
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      for (;;) {
        parse_vertex(id);
        skip_ws();
        if (pos < s.size() && s[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < s.size() && s[pos] == ')') {
          ++pos;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    return id;
  }
};

inline int perm_sign(const std::vector<int>& p) {
  int sign = 1;
  std::vector<char> seen(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

}  // namespace detail

inline RootedTree parse_tree(const std::string& text) {
  detail::TreeParser p(text);
  p.parse_vertex(-1);
  p.skip_ws();
  if (p.pos != text.size())
    throw TreeError("parse error at position " + std::to_string(p.pos) +
                    ": trailing input");
  RootedTree t = std::move(p.t);
  // duplicate-label check before full validation for a precise message
  std::vector<int> labels;
  for (auto& d : t.dec)
    if (d.kind == VertexKind::Label) labels.push_back(d.label);
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw TreeError("duplicate label");
  validate_tree(t);
  return t;
}

inline std::string format_tree(const RootedTree& t) {
  auto ch = t.children();
  std::vector<std::string> lit(t.size());
  // postorder by explicit stack
  std::vector<std::pair<int, int>> stack{{t.root(), 0}};
  while (!stack.empty()) {
    auto& [v, stage] = stack.back();
    if (stage < static_cast<int>(ch[v].size())) {
      int c = ch[v][stage];
      ++stage;
      stack.emplace_back(c, 0);
      continue;
    }
    std::string s = t.dec[v].kind == VertexKind::Alpha
                        ? "*"
                        : std::to_string(t.dec[v].label);
    if (t.dec[v].marked) s += "@";
    if (!ch[v].empty()) {
      std::vector<std::string> parts;
      for (int c : ch[v]) parts.push_back(lit[c]);
      std::sort(parts.begin(), parts.end());
      s += "(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ",";
        s += parts[i];
      }
      s += ")";
    }
    lit[v] = std::move(s);
    stack.pop_back();
  }
  return lit[t.root()];
}

// ---------------------------------------------------------------------------
// Canonical forms.
//
// canonicalize returns Zero exactly when the decorated tree admits an
// automorphism inducing an odd permutation of its odd vertices (such orbit
// classes represent the zero vector). Otherwise it returns the canonical
// representative (AHU minimal-code child order, odd-all labels reassigned in
// canonical DFS order) together with the sign of the odd-vertex permutation
// relating the input orientation to the representative's.
// ---------------------------------------------------------------------------

struct CanonicalResult {
  bool zero = false;
  RootedTree rep;
  int sign = 1;
  std::string key;  // format_tree(rep), cached

  static CanonicalResult make_zero() {
    CanonicalResult r;
    r.zero = true;
    r.sign = 0;
    return r;
  }
};

namespace detail {

// orientation order: odd Label vertices by label value, then Alphas by id
inline std::vector<int> odd_order(const RootedTree& t) {
  std::vector<int> lab, alf;
  for (int v = 0; v < t.size(); ++v) {
    if (!t.vertex_odd(v)) continue;
    (t.dec[v].kind == VertexKind::Label ? lab : alf).push_back(v);
  }
  std::sort(lab.begin(), lab.end(),
            [&](int a, int b) { return t.dec[a].label < t.dec[b].label; });
  std::vector<int> out = std::move(lab);
  out.insert(out.end(), alf.begin(), alf.end());
  return out;
}

}  // namespace detail

inline CanonicalResult canonicalize(const RootedTree& t) {
  const int n = t.size();
  if (n == 0) throw TreeError("empty tree rejected");
  auto ch = t.children();

  // AHU codes, bottom-up; children sorted by code
  std::vector<std::string> code(n);
  std::vector<int> odd_cnt(n, 0);
  std::vector<int> order;  // postorder
  {
    std::vector<std::pair<int, int>> stack{{t.root(), 0}};
    while (!stack.empty()) {
      auto& [v, stage] = stack.back();
      if (stage < static_cast<int>(ch[v].size())) {
        int c = ch[v][stage];
        ++stage;
        stack.emplace_back(c, 0);
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  bool zero = false;
  for (int v : order) {
    odd_cnt[v] = t.vertex_odd(v) ? 1 : 0;
    for (int c : ch[v]) odd_cnt[v] += odd_cnt[c];
    // sort children by code; duplicated codes with odd odd-count kill the class
    std::sort(ch[v].begin(), ch[v].end(),
              [&](int a, int b) { return code[a] < code[b]; });
    for (std::size_t i = 0; i + 1 < ch[v].size(); ++i)
      if (code[ch[v][i]] == code[ch[v][i + 1]] && odd_cnt[ch[v][i]] % 2 == 1)
        zero = true;
    std::string s;
    if (t.dec[v].kind == VertexKind::Alpha) {
      s = "A";
    } else if (t.odd_all_vertices) {
      s = "L";  // interchangeable
    } else {
      s = "L" + std::to_string(t.dec[v].label);
    }
    if (t.dec[v].marked) s += "@";
    if (!ch[v].empty()) {
      s += "(";
      for (std::size_t i = 0; i < ch[v].size(); ++i) {
        if (i) s += ",";
        s += code[ch[v][i]];
      }
      s += ")";
    }
    code[v] = std::move(s);
  }
  if (zero) return CanonicalResult::make_zero();

  // canonical representative by preorder DFS along the sorted children
  CanonicalResult res;
  res.rep.odd_all_vertices = t.odd_all_vertices;
  std::vector<int> new_id(n, -1);
  std::vector<int> visit;  // old ids in preorder
  {
    std::vector<int> stack{t.root()};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      new_id[v] = static_cast<int>(visit.size());
      visit.push_back(v);
      for (auto it = ch[v].rbegin(); it != ch[v].rend(); ++it) stack.push_back(*it);
    }
  }
  res.rep.parent.resize(n);
  res.rep.dec.resize(n);
  int next_label = 1;
  for (int old : visit) {
    int v = new_id[old];
    res.rep.parent[v] = t.parent[old] == old ? v : new_id[t.parent[old]];
    VertexDecoration d = t.dec[old];
    if (d.kind == VertexKind::Label && t.odd_all_vertices) d.label = next_label++;
    res.rep.dec[v] = d;
  }
  // sign: permutation taking the input orientation to the rep's orientation
  auto in_odd = detail::odd_order(t);
  auto rep_odd = detail::odd_order(res.rep);
  std::vector<int> pos_in_rep(n, -1);
  for (std::size_t i = 0; i < rep_odd.size(); ++i) {
    // rep_odd holds new ids; translate back through visit
    pos_in_rep[visit[rep_odd[i]]] = static_cast<int>(i);
  }
  std::vector<int> perm(in_odd.size());
  for (std::size_t i = 0; i < in_odd.size(); ++i) perm[i] = pos_in_rep[in_odd[i]];
  res.sign = detail::perm_sign(perm);
  res.key = format_tree(res.rep);
  return res;
}

// Relabel Label vertices through sigma (sigma[i-1] = image of label i).
inline RootedTree relabel(const RootedTree& t, const std::vector<int>& sigma) {
  RootedTree out = t;
  for (auto& d : out.dec)
    if (d.kind == VertexKind::Label) d.label = sigma[d.label - 1];
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

// All labelled rooted trees on {1..n}; count n^(n-1). Vertex v carries label
// v+1. Enumeration runs over Pruefer sequences times the choice of root.
template <class F>
inline void for_each_labelled_tree(int n, F&& fn, long long cap = -1) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  long long total = 1;
  for (int i = 0; i < n - 1; ++i) {
    total *= n;
    if (cap > 0 && total > cap)
      throw ResourceLimitError("enumerate_labelled: n^(n-1) exceeds cap");
  }
  if (n == 1) {
    RootedTree t;
    t.parent = {0};
    t.dec = {label_dec(1)};
    fn(t);
    return;
  }
  std::vector<int> seq(std::max(0, n - 2), 0);
  std::vector<int> deg(n), next(n), edge_to(n);
  for (;;) {
    // decode the Pruefer sequence into parent pointers toward vertex n-1
    std::fill(deg.begin(), deg.end(), 1);
    for (int x : seq) deg[x]++;
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n - 1);
    {
      std::vector<int> d = deg;
      int ptr = 0;
      while (d[ptr] != 1) ++ptr;
      int leaf = ptr;
      for (int x : seq) {
        edges.emplace_back(leaf, x);
        if (--d[x] == 1 && x < ptr) {
          leaf = x;
        } else {
          while (d[++ptr] != 1) {
          }
          leaf = ptr;
        }
      }
      edges.emplace_back(leaf, n - 1);
    }
    std::vector<std::vector<int>> adj(n);
    for (auto& [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (int root = 0; root < n; ++root) {
      RootedTree t;
      t.parent.assign(n, -1);
      t.dec.resize(n);
      for (int v = 0; v < n; ++v) t.dec[v] = label_dec(v + 1);
      std::vector<int> stack{root};
      t.parent[root] = root;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : adj[v])
          if (t.parent[u] == -1) {
            t.parent[u] = v;
            stack.push_back(u);
          }
      }
      fn(t);
    }
    // next sequence
    int i = static_cast<int>(seq.size()) - 1;
    while (i >= 0 && seq[i] == n - 1) seq[i--] = 0;
    if (i < 0) break;
    seq[i]++;
  }
}

inline std::vector<RootedTree> enumerate_labelled(int n, long long cap = -1) {
  std::vector<RootedTree> out;
  for_each_labelled_tree(n, [&](const RootedTree& t) { out.push_back(t); }, cap);
  return out;
}

// One canonical representative per nonvanishing isomorphism class of trees
// with n_labels labelled vertices and k_alpha Alpha vertices. marked_count
// of 1 asks for one distinguished vertex (the vertebrate bases).
inline std::vector<CanonicalResult> enumerate_orbits(int n_labels, int k_alpha,
                                                     bool odd_all,
                                                     int marked_count = 0,
                                                     long long cap = -1) {
  const int m = n_labels + k_alpha;
  if (m < 1) throw std::invalid_argument("need at least one vertex");
  std::map<std::string, CanonicalResult> reps;
  for_each_labelled_tree(
      m,
      [&](const RootedTree& plain) {
        RootedTree t = plain;
        t.odd_all_vertices = odd_all;
        for (int v = 0; v < m; ++v)
          if (t.dec[v].label > n_labels) t.dec[v] = alpha_dec();
        if (marked_count == 0) {
          auto c = canonicalize(t);
          if (!c.zero) reps.emplace(c.key, std::move(c));
        } else {
          for (int mv = 0; mv < m; ++mv) {
            RootedTree tm = t;
            tm.dec[mv].marked = true;
            auto c = canonicalize(tm);
            if (!c.zero) reps.emplace(c.key, std::move(c));
          }
        }
      },
      cap);
  std::vector<CanonicalResult> out;
  out.reserve(reps.size());
  for (auto& [k, c] : reps) out.push_back(std::move(c));
  return out;
}

// ---------------------------------------------------------------------------
// Vertex splitting: replace vertex v by an edge upper -> lower (upper is the
// child); each subset of v's incoming edges reattaches to upper, the rest to
// lower. One output per subset. The new vertex is appended with the highest
// id, so the raw expansion carries no reordering sign of its own.
// ---------------------------------------------------------------------------

inline std::vector<std::pair<RootedTree, int>> split_vertex_expansions(
    const RootedTree& t, int v, VertexDecoration lower, VertexDecoration upper) {
  if (v < 0 || v >= t.size()) throw std::invalid_argument("split: bad vertex");
  auto ch = t.children();
  const auto& kids = ch[v];
  const int n = t.size();
  std::vector<std::pair<RootedTree, int>> out;
  const std::size_t subsets = std::size_t(1) << kids.size();
  out.reserve(subsets);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    RootedTree s = t;
    s.dec[v] = lower;
    s.parent.push_back(v);  // upper, id n
    s.dec.push_back(upper);
    for (std::size_t i = 0; i < kids.size(); ++i)
      if (mask & (std::size_t(1) << i)) s.parent[kids[i]] = n;
    out.emplace_back(std::move(s), 1);
  }
  return out;
}

}  // namespace oplab
