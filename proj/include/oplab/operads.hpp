#pragma once

#include <cassert>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "oplab/lincomb.hpp"
#include "oplab/trees.hpp"

namespace oplab {

// ---------------------------------------------------------------------------
// Composition rules of the explicit operads, on raw data.
// ---------------------------------------------------------------------------

// Chapoton-Livernet insertion: graft S in place of the vertex of T labelled i
// and reattach every child subtree of that vertex to a vertex of S, summing
// over all reattachment functions. Labels follow the standard disjoint-union
// relabelling (inner labels shift to i..i+m-1, later outer labels move up).
inline std::vector<RootedTree> pl_compose_trees(const RootedTree& t, int i,
                                                const RootedTree& s) {
  const int n = t.size(), m = s.size();
  int vi = -1;
  for (int v = 0; v < n; ++v)
    if (t.dec[v].kind == VertexKind::Label && t.dec[v].label == i) vi = v;
  if (vi < 0) throw TreeError("pl_compose: label " + std::to_string(i) + " missing");
  auto relabel_outer = [&](int lab) { return lab < i ? lab : lab + m - 1; };
  auto ch = t.children();
  const auto& kids = ch[vi];
  std::vector<RootedTree> out;
  // output vertices: 0..n-2 = T minus vi (order preserved), n-1..n+m-2 = S
  std::vector<int> t_new(n, -1);
  int idx = 0;
  for (int v = 0; v < n; ++v)
    if (v != vi) t_new[v] = idx++;
  const int s_base = n - 1;
  std::vector<int> assign(kids.size(), 0);
  for (;;) {
    RootedTree r;
    r.parent.assign(n + m - 1, -1);
    r.dec.resize(n + m - 1);
    for (int v = 0; v < n; ++v) {
      if (v == vi) continue;
      VertexDecoration d = t.dec[v];
      if (d.kind == VertexKind::Label) d.label = relabel_outer(d.label);
      r.dec[t_new[v]] = d;
    }
    for (int v = 0; v < m; ++v) {
      VertexDecoration d = s.dec[v];
      if (d.kind == VertexKind::Label) d.label = i + d.label - 1;
      r.dec[s_base + v] = d;
    }
    const int s_root_new = s_base + s.root();
    for (int v = 0; v < n; ++v) {
      if (v == vi) continue;
      int p = t.parent[v];
      if (p == v)
        r.parent[t_new[v]] = t_new[v];
      else if (p == vi)
        r.parent[t_new[v]] = -2;  // child of the removed vertex, set below
      else
        r.parent[t_new[v]] = t_new[p];
    }
    for (int v = 0; v < m; ++v)
      r.parent[s_base + v] = s.parent[v] == v
                                 ? (t.parent[vi] == vi ? s_base + v : t_new[t.parent[vi]])
                                 : s_base + s.parent[v];
    if (t.parent[vi] == vi) {
      // i was the root: the root of S becomes the root
      r.parent[s_root_new] = s_root_new;
    }
    for (std::size_t c = 0; c < kids.size(); ++c)
      r.parent[t_new[kids[c]]] = s_base + assign[c];
    out.push_back(std::move(r));
    // next assignment function
    int j = static_cast<int>(assign.size()) - 1;
    while (j >= 0 && assign[j] == m - 1) assign[j--] = 0;
    if (j < 0) break;
    assign[j]++;
  }
  return out;
}

// Perm: the mark of the composite (marked slot i of arity n composed at slot
// k with mark j of arity m), under standard relabelling.
inline int perm_compose_mark(int /*n*/, int i, int k, int /*m2*/, int j, int m) {
  if (i < k) return i;
  if (i == k) return k - 1 + j;
  return i + m - 1;
}

// Ass: splice the inner word into the letter k of the outer word.
inline std::vector<int> ass_compose_words(const std::vector<int>& outer, int k,
                                          const std::vector<int>& inner) {
  const int m = static_cast<int>(inner.size());
  std::vector<int> out;
  out.reserve(outer.size() + inner.size() - 1);
  for (int letter : outer) {
    if (letter == k) {
      for (int x : inner) out.push_back(k + x - 1);
    } else {
      out.push_back(letter < k ? letter : letter + m - 1);
    }
  }
  return out;
}

// sigma o_i tau on [n+m-1]: replace strand i of sigma by the block tau.
inline std::vector<int> compose_perm(const std::vector<int>& sigma, int i,
                                     const std::vector<int>& tau) {
  const int n = static_cast<int>(sigma.size());
  const int m = static_cast<int>(tau.size());
  auto shift = [&](int lab) { return lab < sigma[i - 1] ? lab : lab + m - 1; };
  std::vector<int> rho(n + m - 1);
  for (int j = 1; j <= n + m - 1; ++j) {
    if (j < i)
      rho[j - 1] = shift(sigma[j - 1]);
    else if (j >= i && j <= i + m - 1)
      rho[j - 1] = sigma[i - 1] + tau[j - i] - 1;
    else
      rho[j - 1] = shift(sigma[j - m]);
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Key formats:  trees use the literal grammar;  perm:n:i;  ass:w1,w2,..;  com:n
// ---------------------------------------------------------------------------

namespace keys {

inline std::string perm(int n, int i) {
  return "perm:" + std::to_string(n) + ":" + std::to_string(i);
}
inline std::string com(int n) { return "com:" + std::to_string(n); }
inline std::string ass(const std::vector<int>& word) {
  std::string s = "ass:";
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(word[i]);
  }
  return s;
}

inline std::pair<int, int> parse_perm(const std::string& key) {
  auto p1 = key.find(':'), p2 = key.rfind(':');
  return {std::stoi(key.substr(p1 + 1, p2 - p1 - 1)), std::stoi(key.substr(p2 + 1))};
}
inline int parse_com(const std::string& key) { return std::stoi(key.substr(4)); }
inline std::vector<int> parse_ass(const std::string& key) {
  std::vector<int> w;
  std::size_t pos = 4;
  while (pos < key.size()) {
    std::size_t next = key.find(',', pos);
    if (next == std::string::npos) next = key.size();
    w.push_back(std::stoi(key.substr(pos, next - pos)));
    pos = next + 1;
  }
  return w;
}

}  // namespace keys

// ---------------------------------------------------------------------------
// OperadImpl: per-arity basis plus partial composition for one explicit
// operad. Values are immutable; all queries are safe concurrently.
// ---------------------------------------------------------------------------

class OperadImpl {
 public:
  virtual ~OperadImpl() = default;
  virtual std::string name() const = 0;
  virtual long long dim(int n) const = 0;
  virtual std::vector<std::string> basis(int n) const = 0;
  virtual int arity(const std::string& key) const = 0;
  virtual LinComb compose(const std::string& mu, int i, const std::string& nu) const = 0;
  // diagonal symmetric-group action on basis keys; sign is +1 for all the
  // permutation bases here but kept in the interface for uniformity
  virtual std::pair<std::string, int> sym_action(const std::vector<int>& sigma,
                                                 const std::string& key) const = 0;
  std::string unit_key() const { return basis(1).at(0); }
};

class PreLieOperad final : public OperadImpl {
 public:
  std::string name() const override { return "pl"; }
  long long dim(int n) const override {
    long long d = 1;
    for (int i = 0; i < n - 1; ++i) d *= n;
    return d;
  }
  std::vector<std::string> basis(int n) const override {
    std::vector<std::string> out;
    out.reserve(dim(n));
    for_each_labelled_tree(n, [&](const RootedTree& t) { out.push_back(format_tree(t)); });
    std::sort(out.begin(), out.end());
    return out;
  }
  int arity(const std::string& key) const override {
    return parse_tree(key).size();
  }
  LinComb compose(const std::string& mu, int i, const std::string& nu) const override {
    LinComb out;
    for (auto& t : pl_compose_trees(parse_tree(mu), i, parse_tree(nu)))
      out.add(format_tree(t), Rat(1));
    return out;
  }
  std::pair<std::string, int> sym_action(const std::vector<int>& sigma,
                                         const std::string& key) const override {
    return {format_tree(relabel(parse_tree(key), sigma)), 1};
  }
};

class PermOperad final : public OperadImpl {
 public:
  std::string name() const override { return "perm"; }
  long long dim(int n) const override { return n; }
  std::vector<std::string> basis(int n) const override {
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i) out.push_back(keys::perm(n, i));
    return out;
  }
  int arity(const std::string& key) const override { return keys::parse_perm(key).first; }
  LinComb compose(const std::string& mu, int i, const std::string& nu) const override {
    auto [n, a] = keys::parse_perm(mu);
    auto [m, b] = keys::parse_perm(nu);
    if (i < 1 || i > n) throw std::out_of_range("perm compose: slot out of range");
    return LinComb(keys::perm(n + m - 1, perm_compose_mark(n, a, i, m, b, m)));
  }
  std::pair<std::string, int> sym_action(const std::vector<int>& sigma,
                                         const std::string& key) const override {
    auto [n, a] = keys::parse_perm(key);
    return {keys::perm(n, sigma[a - 1]), 1};
  }
};

class AssOperad final : public OperadImpl {
 public:
  std::string name() const override { return "ass"; }
  long long dim(int n) const override {
    long long d = 1;
    for (int i = 2; i <= n; ++i) d *= i;
    return d;
  }
  std::vector<std::string> basis(int n) const override {
    std::vector<int> w(n);
    std::iota(w.begin(), w.end(), 1);
    std::vector<std::string> out;
    do {
      out.push_back(keys::ass(w));
    } while (std::next_permutation(w.begin(), w.end()));
    std::sort(out.begin(), out.end());
    return out;
  }
  int arity(const std::string& key) const override {
    return static_cast<int>(keys::parse_ass(key).size());
  }
  LinComb compose(const std::string& mu, int i, const std::string& nu) const override {
    auto w = keys::parse_ass(mu);
    if (i < 1 || i > static_cast<int>(w.size()))
      throw std::out_of_range("ass compose: slot out of range");
    return LinComb(keys::ass(ass_compose_words(w, i, keys::parse_ass(nu))));
  }
  std::pair<std::string, int> sym_action(const std::vector<int>& sigma,
                                         const std::string& key) const override {
    auto w = keys::parse_ass(key);
    for (int& x : w) x = sigma[x - 1];
    return {keys::ass(w), 1};
  }
};

class ComOperad final : public OperadImpl {
 public:
  std::string name() const override { return "com"; }
  long long dim(int) const override { return 1; }
  std::vector<std::string> basis(int n) const override { return {keys::com(n)}; }
  int arity(const std::string& key) const override { return keys::parse_com(key); }
  LinComb compose(const std::string& mu, int i, const std::string& nu) const override {
    int n = keys::parse_com(mu), m = keys::parse_com(nu);
    if (i < 1 || i > n) throw std::out_of_range("com compose: slot out of range");
    return LinComb(keys::com(n + m - 1));
  }
  std::pair<std::string, int> sym_action(const std::vector<int>&,
                                         const std::string& key) const override {
    return {key, 1};
  }
};

inline const PreLieOperad& pl_operad() {
  static const PreLieOperad o;
  return o;
}
inline const PermOperad& perm_operad() {
  static const PermOperad o;
  return o;
}
inline const AssOperad& ass_operad() {
  static const AssOperad o;
  return o;
}
inline const ComOperad& com_operad() {
  static const ComOperad o;
  return o;
}

const OperadImpl& operad_by_name(const std::string& name);

// Hadamard product: pairs of basis keys, factor-wise composition, diagonal
// symmetric action. Realizes dialgebras when the second factor is Perm.
class HadamardOperad final : public OperadImpl {
 public:
  HadamardOperad(const OperadImpl& p, const OperadImpl& q) : p_(p), q_(q) {}
  std::string name() const override { return "had(" + p_.name() + "," + q_.name() + ")"; }
  long long dim(int n) const override { return p_.dim(n) * q_.dim(n); }
  std::vector<std::string> basis(int n) const override {
    std::vector<std::string> out;
    for (auto& a : p_.basis(n))
      for (auto& b : q_.basis(n)) out.push_back(a + "|" + b);
    std::sort(out.begin(), out.end());
    return out;
  }
  int arity(const std::string& key) const override {
    return p_.arity(key.substr(0, key.find('|')));
  }
  LinComb compose(const std::string& mu, int i, const std::string& nu) const override {
    auto cut = [](const std::string& k) {
      auto pos = k.find('|');
      return std::make_pair(k.substr(0, pos), k.substr(pos + 1));
    };
    auto [a, b] = cut(mu);
    auto [c, d] = cut(nu);
    LinComb pa = p_.compose(a, i, c), qb = q_.compose(b, i, d);
    LinComb out;
    for (auto& [ka, va] : pa.terms)
      for (auto& [kb, vb] : qb.terms) out.add(ka + "|" + kb, va * vb);
    return out;
  }
  std::pair<std::string, int> sym_action(const std::vector<int>& sigma,
                                         const std::string& key) const override {
    auto pos = key.find('|');
    auto [a, sa] = p_.sym_action(sigma, key.substr(0, pos));
    auto [b, sb] = q_.sym_action(sigma, key.substr(pos + 1));
    return {a + "|" + b, sa * sb};
  }

 private:
  const OperadImpl& p_;
  const OperadImpl& q_;
};

inline HadamardOperad hadamard(const OperadImpl& p, const OperadImpl& q) {
  return HadamardOperad(p, q);
}

// ---------------------------------------------------------------------------
// Operadic suspension signs. The one-dimensional endomorphism operad of an
// odd line has composition sigma_n o_i sigma_m = (-1)^((i-1)(m-1)) sigma_.. ;
// the sign is the Koszul cost of moving the inner degree-(1-m) generator past
// the first i-1 odd inputs. This single table orients every convolution
// complex in the project and is cross-validated by the explicit models.
// ---------------------------------------------------------------------------

struct SuspensionData {
  int sign(int /*n*/, int i, int m) const { return ((i - 1) * (m - 1)) % 2 == 0 ? 1 : -1; }
  int degree(int n) const { return 1 - n; }
};

inline const SuspensionData& suspension() {
  static const SuspensionData s;
  return s;
}

// ---------------------------------------------------------------------------
// The Lie operad inside PL: left-normed bracket monomials expanded through
// [a,b] = a<b - b<a into rooted-tree combinations. (n-1)! elements; their
// independence is established by rank elsewhere.
// ---------------------------------------------------------------------------

namespace detail {

// free pre-Lie product of trees with disjoint label sets: graft b's root
// below every vertex of a, i.e. as a new child of that vertex
inline void graft_terms(const RootedTree& a, const RootedTree& b,
                        std::vector<RootedTree>& out) {
  const int na = a.size(), nb = b.size();
  for (int v = 0; v < na; ++v) {
    RootedTree r;
    r.parent.resize(na + nb);
    r.dec.resize(na + nb);
    for (int x = 0; x < na; ++x) {
      r.parent[x] = a.parent[x];
      r.dec[x] = a.dec[x];
    }
    for (int y = 0; y < nb; ++y) {
      r.parent[na + y] = b.parent[y] == y ? v : na + b.parent[y];
      r.dec[na + y] = b.dec[y];
    }
    out.push_back(std::move(r));
  }
}

struct TreeSum {
  std::map<std::string, std::pair<RootedTree, Rat>> terms;  // key -> (tree, coeff)

  void add(const RootedTree& t, const Rat& c) {
    auto key = format_tree(t);
    auto it = terms.find(key);
    if (it == terms.end()) {
      terms.emplace(key, std::make_pair(t, c));
    } else {
      it->second.second += c;
      if (it->second.second == 0) terms.erase(it);
    }
  }
};

inline TreeSum pre_lie_product(const TreeSum& a, const TreeSum& b) {
  TreeSum out;
  std::vector<RootedTree> scratch;
  for (auto& [ka, ta] : a.terms)
    for (auto& [kb, tb] : b.terms) {
      scratch.clear();
      graft_terms(ta.first, tb.first, scratch);
      for (auto& t : scratch) out.add(t, ta.second * tb.second);
    }
  return out;
}

inline TreeSum bracket(const TreeSum& a, const TreeSum& b) {
  TreeSum out = pre_lie_product(a, b);
  TreeSum ba = pre_lie_product(b, a);
  for (auto& [k, tc] : ba.terms) out.add(tc.first, -tc.second);
  return out;
}

}  // namespace detail

inline const std::vector<LinComb>& lie_basis(int n, int cap = 9) {
  if (n > cap) throw ResourceLimitError("lie_basis: arity cap exceeded");
  if (n < 1) throw std::invalid_argument("lie_basis: n >= 1");
  static std::map<int, std::vector<LinComb>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto hit = cache.find(n);
  if (hit != cache.end()) return hit->second;
  std::vector<LinComb> out;
  if (n == 1) {
    out.emplace_back("1");
    return cache.emplace(n, std::move(out)).first->second;
  }
  std::vector<int> rest(n - 1);
  std::iota(rest.begin(), rest.end(), 2);
  auto single = [](int lab) {
    detail::TreeSum s;
    RootedTree t;
    t.parent = {0};
    t.dec = {label_dec(lab)};
    s.add(t, Rat(1));
    return s;
  };
  do {
    detail::TreeSum acc = single(1);
    for (int lab : rest) acc = detail::bracket(acc, single(lab));
    LinComb lc;
    for (auto& [k, tc] : acc.terms) lc.add(k, tc.second);
    out.push_back(std::move(lc));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return cache.emplace(n, std::move(out)).first->second;
}

inline LinComb compose_lin(const OperadImpl& o, const LinComb& a, int i, const LinComb& b) {
  LinComb out;
  for (auto& [ka, ca] : a.terms)
    for (auto& [kb, cb] : b.terms) {
      LinComb c = o.compose(ka, i, kb);
      c *= ca * cb;
      out += c;
    }
  return out;
}

namespace detail {

// echelon basis over string-keyed vectors, with coordinate tracking
struct SpanBasis {
  std::map<std::string, int> key_index;
  // echelon rows: sparse (key-id, coeff) sorted, plus the combination of the
  // inserted vectors realizing the row
  struct Row {
    std::vector<std::pair<int, Rat>> v;
    std::vector<std::pair<int, Rat>> comb;
  };
  std::vector<Row> rows;
  int n_inserted = 0;

  int id(const std::string& k) {
    auto [it, fresh] = key_index.try_emplace(k, static_cast<int>(key_index.size()));
    return it->second;
  }

  static void axpy(std::vector<std::pair<int, Rat>>& r, const Rat& f,
                   const std::vector<std::pair<int, Rat>>& s) {
    std::vector<std::pair<int, Rat>> out;
    out.reserve(r.size() + s.size());
    std::size_t i = 0, j = 0;
    while (i < r.size() || j < s.size()) {
      if (j == s.size() || (i < r.size() && r[i].first < s[j].first)) {
        out.push_back(std::move(r[i++]));
      } else if (i == r.size() || s[j].first < r[i].first) {
        out.emplace_back(s[j].first, f * s[j].second);
        if (out.back().second == 0) out.pop_back();
        ++j;
      } else {
        Rat v = r[i].second + f * s[j].second;
        if (v != 0) out.emplace_back(r[i].first, std::move(v));
        ++i, ++j;
      }
    }
    r.swap(out);
  }

  void reduce(std::vector<std::pair<int, Rat>>& v,
              std::vector<std::pair<int, Rat>>* comb) const {
    for (auto& row : rows) {
      if (v.empty()) break;
      int pc = row.v.front().first;
      auto it = std::lower_bound(v.begin(), v.end(), pc,
                                 [](const auto& q, int c) { return q.first < c; });
      if (it == v.end() || it->first != pc) continue;
      Rat f = -it->second / row.v.front().second;
      axpy(v, f, row.v);
      if (comb) axpy(*comb, f, row.comb);
    }
  }

  // returns true if the vector extended the span
  bool insert(const LinComb& vec) {
    std::vector<std::pair<int, Rat>> v;
    for (auto& [k, c] : vec.terms) v.emplace_back(id(k), c);
    std::sort(v.begin(), v.end());
    std::vector<std::pair<int, Rat>> comb{{n_inserted, Rat(1)}};
    ++n_inserted;
    reduce(v, &comb);
    if (v.empty()) return false;
    rows.push_back({std::move(v), std::move(comb)});
    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.v.front().first < b.v.front().first; });
    return true;
  }

  int rank() const { return static_cast<int>(rows.size()); }

  // express vec as a combination of the inserted vectors; false if outside
  bool express(const LinComb& vec, std::map<int, Rat>& coeffs) const {
    std::vector<std::pair<int, Rat>> v;
    for (auto& [k, c] : vec.terms) {
      auto it = key_index.find(k);
      if (it == key_index.end()) return false;
      v.emplace_back(it->second, c);
    }
    std::sort(v.begin(), v.end());
    std::vector<std::pair<int, Rat>> comb;
    reduce(v, &comb);
    if (!v.empty()) return false;
    coeffs.clear();
    for (auto& [j, c] : comb) coeffs[j] = -c;
    return true;
  }

  bool contains(const LinComb& vec) const {
    std::map<int, Rat> tmp;
    return express(vec, tmp);
  }
};

}  // namespace detail

// The Lie operad realized inside PL (never as an abstract presentation):
// basis keys lie:n:j index the left-normed bracket monomials; composition
// expands into trees, composes there, and re-expresses in the bracket basis.
class LieOperad final : public OperadImpl {
 public:
  std::string name() const override { return "lie"; }
  long long dim(int n) const override {
    long long d = 1;
    for (int i = 2; i < n; ++i) d *= i;
    return d;
  }
  std::vector<std::string> basis(int n) const override {
    std::vector<std::string> out;
    for (long long j = 0; j < dim(n); ++j)
      out.push_back("lie:" + std::to_string(n) + ":" + std::to_string(j));
    return out;
  }
  int arity(const std::string& key) const override {
    auto p1 = key.find(':');
    auto p2 = key.rfind(':');
    return std::stoi(key.substr(p1 + 1, p2 - p1 - 1));
  }
  // expansion of a basis key in the rooted-tree basis of PL(n)
  LinComb expand(const std::string& key) const {
    auto p2 = key.rfind(':');
    int n = arity(key);
    long long j = std::stoll(key.substr(p2 + 1));
    return lie_basis(n).at(j);
  }
  LinComb compose(const std::string& mu, int i, const std::string& nu) const override {
    const int n = arity(mu), m = arity(nu);
    LinComb in_trees = compose_lin(pl_operad(), expand(mu), i, expand(nu));
    detail::SpanBasis span;
    for (auto& v : lie_basis(n + m - 1)) span.insert(v);
    std::map<int, Rat> coeffs;
    if (!span.express(in_trees, coeffs))
      throw std::logic_error("lie compose left the Lie suboperad");
    LinComb out;
    for (auto& [idx, c] : coeffs)
      out.add("lie:" + std::to_string(n + m - 1) + ":" + std::to_string(idx), c);
    return out;
  }
  std::pair<std::string, int> sym_action(const std::vector<int>&,
                                         const std::string&) const override {
    throw std::logic_error("lie basis is not a permutation basis; use sym_action_lin");
  }
  LinComb sym_action_lin(const std::vector<int>& sigma, const std::string& key) const {
    const int n = arity(key);
    LinComb moved;
    for (auto& [k, c] : expand(key).terms) {
      auto [k2, s] = pl_operad().sym_action(sigma, k);
      moved.add(k2, c * s);
    }
    detail::SpanBasis span;
    for (auto& v : lie_basis(n)) span.insert(v);
    std::map<int, Rat> coeffs;
    if (!span.express(moved, coeffs))
      throw std::logic_error("lie sym_action left the Lie suboperad");
    LinComb out;
    for (auto& [idx, c] : coeffs)
      out.add("lie:" + std::to_string(n) + ":" + std::to_string(idx), c);
    return out;
  }
};

inline const LieOperad& lie_operad() {
  static const LieOperad o;
  return o;
}

inline const OperadImpl& operad_by_name(const std::string& name) {
  if (name == "pl") return pl_operad();
  if (name == "perm") return perm_operad();
  if (name == "ass") return ass_operad();
  if (name == "com") return com_operad();
  if (name == "lie") return lie_operad();
  throw std::invalid_argument("unknown operad: " + name);
}

// ---------------------------------------------------------------------------
// Infinitesimal cooperad decomposition of the Koszul dual: the (i, a, b)
// component is the transpose of the composition table of the dual operad,
// twisted by the suspension sign. Returns a combination of key pairs.
// ---------------------------------------------------------------------------

inline LinComb cooperad_decompose(const OperadImpl& pshriek, const SuspensionData& susp,
                                  const std::string& key, int i, int a, int b) {
  const int n = pshriek.arity(key);
  if (a + b - 1 != n) throw std::invalid_argument("cooperad_decompose: arity mismatch");
  if (i < 1 || i > a) throw std::invalid_argument("cooperad_decompose: bad slot");
  LinComb out;
  const int s = susp.sign(a, i, b);
  for (auto& x : pshriek.basis(a))
    for (auto& y : pshriek.basis(b)) {
      LinComb comp = pshriek.compose(x, i, y);
      auto it = comp.terms.find(key);
      if (it != comp.terms.end()) out.add(x + "|" + y, it->second * s);
    }
  return out;
}

}  // namespace oplab
