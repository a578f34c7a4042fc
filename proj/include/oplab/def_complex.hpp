#pragma once

#include <array>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "oplab/chain_complex.hpp"
#include "oplab/operads.hpp"

namespace oplab {

// ---------------------------------------------------------------------------
// Deformation complexes Def(f: P -> Q).
//
// Computational model: the weight-w component is realized on the sign-twisted
// coinvariant classes of (dual-of-P)(w) (x) Q(w) under the diagonal
// symmetric-group action (all w slots odd). A class is presented by a
// canonical representative pair of basis keys; presenting any labelled pair
// costs the sign of the relabelling, and classes with a sign-reversing
// stabilizer are zero. The differential is the bracket with the twisting
// element of weight 2, computed slot by slot with the operadic-suspension
// signs in front of the factor-wise compositions.
// ---------------------------------------------------------------------------

enum class FactorKind { Tree, Perm, Ass, Com };

struct OperadMapSpec {
  std::string source;
  std::string target;
  LinComb generator_image;  // image of the first binary generator in target(2)
  std::string name;
};

namespace detail {

inline FactorKind kind_of(const std::string& operad_name) {
  if (operad_name == "pl") return FactorKind::Tree;
  if (operad_name == "perm") return FactorKind::Perm;
  if (operad_name == "ass") return FactorKind::Ass;
  if (operad_name == "com") return FactorKind::Com;
  throw std::invalid_argument("no key model for operad " + operad_name);
}

inline const std::string& dual_name(const std::string& p) {
  static const std::map<std::string, std::string> table = {
      {"pl", "perm"}, {"perm", "pl"}, {"com", "lie"}, {"lie", "com"}, {"ass", "ass"}};
  return table.at(p);
}

inline int sgn_word(const std::vector<int>& w) {
  int s = 1;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (w[i] > w[j]) s = -s;
  return s;
}

// cached orbit bases (shared by the generic engine and the explicit models)
inline const std::vector<CanonicalResult>& orbit_basis(int n_labels, int k_alpha,
                                                       bool odd_all, int marked) {
  static std::map<std::tuple<int, int, bool, int>, std::vector<CanonicalResult>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n_labels, k_alpha, odd_all, marked);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, enumerate_orbits(n_labels, k_alpha, odd_all, marked)).first;
  return it->second;
}

}  // namespace detail

inline OperadMapSpec map_spec(const std::string& source, const std::string& target) {
  OperadMapSpec f;
  f.source = source;
  f.target = target;
  f.name = source == target ? "id-" + source : source + "-" + target;
  auto is = [&](const char* s, const char* t) { return source == s && target == t; };
  if (is("pl", "com") || is("perm", "com"))
    f.generator_image = LinComb(keys::com(2));
  else if (is("pl", "ass") || is("ass", "ass"))
    f.generator_image = LinComb("ass:1,2");
  else if (is("pl", "pl"))
    f.generator_image = LinComb("1(2)");
  else if (is("lie", "pl")) {
    f.generator_image = LinComb("1(2)");
    f.generator_image.add("2(1)", Rat(-1));
  } else if (is("lie", "perm")) {
    f.generator_image = LinComb(keys::perm(2, 1));
    f.generator_image.add(keys::perm(2, 2), Rat(-1));
  } else if (is("ass", "perm") || is("perm", "perm"))
    f.generator_image = LinComb(keys::perm(2, 1));
  else if (is("com", "com"))
    f.generator_image = LinComb(keys::com(2));
  else if (is("lie", "lie"))
    f.generator_image = LinComb("lie:2:0");
  else
    throw std::invalid_argument("unsupported operad map " + source + " -> " + target);
  return f;
}

namespace detail {

inline LinComb act(const std::string& operad, const std::vector<int>& sigma,
                   const LinComb& v) {
  LinComb out;
  if (operad == "lie") {
    for (auto& [k, c] : v.terms) {
      LinComb moved = lie_operad().sym_action_lin(sigma, k);
      moved *= c;
      out += moved;
    }
    return out;
  }
  const OperadImpl& op = operad_by_name(operad);
  for (auto& [k, c] : v.terms) {
    auto [k2, s] = op.sym_action(sigma, k);
    out.add(k2, c * s);
  }
  return out;
}

}  // namespace detail

// The induced map must respect the source's quadratic relations at arity 3;
// checked by expanding the relations through the generator image.
inline void check_map_spec(const OperadMapSpec& f) {
  const OperadImpl& q = operad_by_name(f.target);
  const LinComb& F = f.generator_image;
  auto comp = [&](const LinComb& a, int i, const LinComb& b) {
    return compose_lin(q, a, i, b);
  };
  const std::vector<int> swap12 = {2, 1}, swap23 = {1, 3, 2};
  const std::vector<int> rot = {2, 3, 1}, rot2 = {3, 1, 2};
  auto assoc = [&]() { return comp(F, 1, F) - comp(F, 2, F); };
  if (f.source == "pl") {
    LinComb r = assoc();
    LinComb rel = r - detail::act(f.target, swap23, r);
    if (!rel.is_zero()) throw std::logic_error(f.name + ": pre-Lie relation broken");
  } else if (f.source == "lie") {
    LinComb anti = detail::act(f.target, swap12, F) + F;
    if (!anti.is_zero()) throw std::logic_error(f.name + ": antisymmetry broken");
    LinComb j = comp(F, 1, F);
    LinComb jac = j + detail::act(f.target, rot, j) + detail::act(f.target, rot2, j);
    if (!jac.is_zero()) throw std::logic_error(f.name + ": Jacobi broken");
  } else if (f.source == "ass") {
    if (!assoc().is_zero()) throw std::logic_error(f.name + ": associativity broken");
  } else if (f.source == "perm") {
    if (!assoc().is_zero()) throw std::logic_error(f.name + ": associativity broken");
    LinComb rs = comp(F, 2, F) - comp(F, 2, detail::act(f.target, swap12, F));
    if (!rs.is_zero()) throw std::logic_error(f.name + ": right symmetry broken");
  } else if (f.source == "com") {
    if (!(detail::act(f.target, swap12, F) == F))
      throw std::logic_error(f.name + ": commutativity broken");
    if (!assoc().is_zero()) throw std::logic_error(f.name + ": associativity broken");
  }
}

// ---------------------------------------------------------------------------
// The pair engine.
// ---------------------------------------------------------------------------

class DefEngine {
 public:
  struct Classified {
    bool zero = false;
    std::string key;
    int sign = 1;
  };
  struct PairTerm {
    std::string x, q;
    Rat coeff;
  };

  DefEngine(FactorKind xk, FactorKind qk) : xk_(xk), qk_(qk) {
    if (xk_ == FactorKind::Tree && qk_ == FactorKind::Tree)
      throw std::invalid_argument("pair engine: tree (x) tree is not in scope");
  }

  FactorKind xkind() const { return xk_; }
  FactorKind qkind() const { return qk_; }

  static std::pair<std::string, std::string> split_key(const std::string& key) {
    auto pos = key.find('|');
    return {key.substr(0, pos), key.substr(pos + 1)};
  }

  int arity_of(const std::string& factor_key, FactorKind k) const {
    switch (k) {
      case FactorKind::Tree: return static_cast<int>(parse_tree(factor_key).size());
      case FactorKind::Perm: return keys::parse_perm(factor_key).first;
      case FactorKind::Ass: return static_cast<int>(keys::parse_ass(factor_key).size());
      case FactorKind::Com: return keys::parse_com(factor_key);
    }
    return 0;
  }

  Classified classify(const std::string& x, const std::string& q) const {
    // an Ass factor acts freely: normalize its word to the identity
    if (xk_ == FactorKind::Ass || qk_ == FactorKind::Ass) {
      const bool x_side = xk_ == FactorKind::Ass;
      auto word = keys::parse_ass(x_side ? x : q);
      const int w = static_cast<int>(word.size());
      std::vector<int> inv(w);
      for (int j = 0; j < w; ++j) inv[word[j] - 1] = j + 1;
      Classified res;
      res.sign = detail::sgn_word(word);
      res.key = apply_perm(xk_, x, inv) + "|" + apply_perm(qk_, q, inv);
      return res;
    }
    if (xk_ == FactorKind::Tree || qk_ == FactorKind::Tree) {
      const bool x_side = xk_ == FactorKind::Tree;
      const FactorKind partner = x_side ? qk_ : xk_;
      const std::string& tree_key = x_side ? x : q;
      const std::string& other = x_side ? q : x;
      RootedTree t = parse_tree(tree_key);
      t.odd_all_vertices = true;
      if (partner == FactorKind::Perm) {
        int mark = keys::parse_perm(other).second;
        for (int v = 0; v < t.size(); ++v)
          if (t.dec[v].kind == VertexKind::Label && t.dec[v].label == mark)
            t.dec[v].marked = true;
      }
      auto c = canonicalize(t);
      if (c.zero) return {true, "", 0};
      Classified res;
      res.sign = c.sign;
      std::string tree_lit, partner_key;
      const int w = t.size();
      if (partner == FactorKind::Perm) {
        int mark = 0;
        RootedTree stripped = c.rep;
        for (int v = 0; v < stripped.size(); ++v)
          if (stripped.dec[v].marked) {
            mark = stripped.dec[v].label;
            stripped.dec[v].marked = false;
          }
        tree_lit = format_tree(stripped);
        partner_key = keys::perm(w, mark);
      } else {
        tree_lit = c.key;
        partner_key = keys::com(w);
      }
      res.key = x_side ? tree_lit + "|" + partner_key : partner_key + "|" + tree_lit;
      return res;
    }
    // small closed forms: only Perm / Com factors remain
    const int w = arity_of(x, xk_);
    if (xk_ == FactorKind::Com && qk_ == FactorKind::Com) {
      if (w >= 2) return {true, "", 0};
      return {false, x + "|" + q, 1};
    }
    // one Perm factor, one Com factor: the stabilizer of the mark is the
    // symmetric group on the other w-1 letters, odd as soon as w >= 3
    if (w >= 3) return {true, "", 0};
    int mark = keys::parse_perm(xk_ == FactorKind::Perm ? x : q).second;
    std::string px = keys::perm(w, 1);
    std::string key = xk_ == FactorKind::Perm ? px + "|" + keys::com(w)
                                              : keys::com(w) + "|" + px;
    return {false, key, (w == 2 && mark == 2) ? -1 : 1};
  }

  std::vector<PairTerm> compose_pair(const std::string& x1, const std::string& q1,
                                     int i, const std::string& x2,
                                     const std::string& q2) const {
    auto fx = compose_factor(xk_, x1, i, x2);
    auto fq = compose_factor(qk_, q1, i, q2);
    std::vector<PairTerm> out;
    out.reserve(fx.size() * fq.size());
    for (auto& a : fx)
      for (auto& b : fq) out.push_back({a, b, Rat(1)});
    return out;
  }

  // class-level convolution insertion [a o_i b] with the suspension sign
  void insert_terms(const std::string& akey, int arity_a, int i,
                    const std::string& bkey, int arity_b, const Rat& coeff,
                    LinComb& out) const {
    auto [ax, aq] = split_key(akey);
    auto [bx, bq] = split_key(bkey);
    const Rat s = coeff * suspension().sign(arity_a, i, arity_b);
    for (auto& t : compose_pair(ax, aq, i, bx, bq)) {
      auto c = classify(t.x, t.q);
      if (!c.zero) out.add(c.key, s * t.coeff * c.sign);
    }
  }

  // convolution pre-Lie product of class vectors (a of weight p, b of weight q)
  LinComb conv_product(const LinComb& a, int p, const LinComb& b, int q) const {
    LinComb out;
    for (auto& [ka, ca] : a.terms)
      for (auto& [kb, cb] : b.terms)
        for (int i = 1; i <= p; ++i) insert_terms(ka, p, i, kb, q, ca * cb, out);
    return out;
  }

  // graded commutator bracket; weight-w elements have degree 1-w
  LinComb conv_bracket(const LinComb& a, int p, const LinComb& b, int q) const {
    LinComb out = conv_product(a, p, b, q);
    LinComb ba = conv_product(b, q, a, p);
    int sign = ((1 - p) * (1 - q)) % 2 == 0 ? 1 : -1;
    ba *= Rat(-sign);
    out += ba;
    return out;
  }

  std::vector<std::string> basis(int w) const {
    std::vector<std::string> out;
    if (xk_ == FactorKind::Ass || qk_ == FactorKind::Ass) {
      std::vector<int> idw(w);
      std::iota(idw.begin(), idw.end(), 1);
      const std::string id_key = keys::ass(idw);
      if (xk_ == FactorKind::Ass) {
        for (auto& q : factor_basis(qk_, w)) out.push_back(id_key + "|" + q);
      } else {
        for (auto& x : factor_basis(xk_, w)) out.push_back(x + "|" + id_key);
      }
    } else if (xk_ == FactorKind::Tree || qk_ == FactorKind::Tree) {
      const FactorKind partner = xk_ == FactorKind::Tree ? qk_ : xk_;
      for (auto& c : detail::orbit_basis(w, 0, true,
                                         partner == FactorKind::Perm ? 1 : 0)) {
        std::string tree_lit, partner_key;
        if (partner == FactorKind::Perm) {
          RootedTree stripped = c.rep;
          int mark = 0;
          for (int v = 0; v < stripped.size(); ++v)
            if (stripped.dec[v].marked) {
              mark = stripped.dec[v].label;
              stripped.dec[v].marked = false;
            }
          tree_lit = format_tree(stripped);
          partner_key = keys::perm(w, mark);
        } else {
          tree_lit = c.key;
          partner_key = keys::com(w);
        }
        out.push_back(xk_ == FactorKind::Tree ? tree_lit + "|" + partner_key
                                              : partner_key + "|" + tree_lit);
      }
    } else if (xk_ == FactorKind::Com && qk_ == FactorKind::Com) {
      if (w == 1) out.push_back(keys::com(1) + "|" + keys::com(1));
    } else {
      // one Perm, one Com
      if (w <= 2) {
        std::string px = keys::perm(w, 1);
        out.push_back(xk_ == FactorKind::Perm ? px + "|" + keys::com(w)
                                              : keys::com(w) + "|" + px);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  FactorKind xk_, qk_;

  static std::string apply_perm(FactorKind k, const std::string& key,
                                const std::vector<int>& sigma) {
    switch (k) {
      case FactorKind::Tree: return format_tree(relabel(parse_tree(key), sigma));
      case FactorKind::Perm: {
        auto [n, i] = keys::parse_perm(key);
        return keys::perm(n, sigma[i - 1]);
      }
      case FactorKind::Ass: {
        auto w = keys::parse_ass(key);
        for (int& x : w) x = sigma[x - 1];
        return keys::ass(w);
      }
      case FactorKind::Com: return key;
    }
    return key;
  }

  static std::vector<std::string> factor_basis(FactorKind k, int w) {
    switch (k) {
      case FactorKind::Perm: return perm_operad().basis(w);
      case FactorKind::Ass: return ass_operad().basis(w);
      case FactorKind::Com: return com_operad().basis(w);
      case FactorKind::Tree:
        throw std::logic_error("tree factor bases come from orbit enumeration");
    }
    return {};
  }

  std::vector<std::string> compose_factor(FactorKind k, const std::string& a, int i,
                                          const std::string& b) const {
    switch (k) {
      case FactorKind::Tree: {
        std::vector<std::string> out;
        for (auto& t : pl_compose_trees(parse_tree(a), i, parse_tree(b)))
          out.push_back(format_tree(t));
        return out;
      }
      case FactorKind::Perm: {
        auto [n, ma] = keys::parse_perm(a);
        auto [m, mb] = keys::parse_perm(b);
        return {keys::perm(n + m - 1, perm_compose_mark(n, ma, i, m, mb, m))};
      }
      case FactorKind::Ass:
        return {keys::ass(ass_compose_words(keys::parse_ass(a), i, keys::parse_ass(b)))};
      case FactorKind::Com: {
        int n = keys::parse_com(a), m = keys::parse_com(b);
        return {keys::com(n + m - 1)};
      }
    }
    return {};
  }
};

// ---------------------------------------------------------------------------
// The twisting element: one canonical weight-2 class per map, derived from
// the sign-twisted dual basis of the source generators paired with their
// images. The class projection halves the two-term invariant sum.
// ---------------------------------------------------------------------------

inline LinComb alpha_class(const OperadMapSpec& f, const DefEngine& eng) {
  std::vector<std::pair<std::string, Rat>> xduals;  // dual generator, sign
  if (f.source == "pl")
    xduals = {{keys::perm(2, 1), Rat(1)}, {keys::perm(2, 2), Rat(-1)}};
  else if (f.source == "ass")
    xduals = {{"ass:1,2", Rat(1)}, {"ass:2,1", Rat(-1)}};
  else if (f.source == "perm")
    xduals = {{"1(2)", Rat(1)}, {"2(1)", Rat(-1)}};
  else if (f.source == "lie")
    xduals = {{keys::com(2), Rat(1)}};
  else if (f.source == "com")
    xduals = {{"1(2)", Rat(1)}, {"2(1)", Rat(-1)}};  // the bracket, in trees
  else
    throw std::invalid_argument("alpha_class: unsupported source");

  const std::vector<int> swap12 = {2, 1};
  LinComb acc;
  for (std::size_t g = 0; g < xduals.size(); ++g) {
    // the g-th source generator is the (12)-translate of the first one;
    // its image is the corresponding translate of the generator image
    LinComb image = f.generator_image;
    if (g == 1) image = detail::act(f.target == "lie" ? "pl" : f.target, swap12, image);
    for (auto& [qk, qc] : image.terms) {
      auto c = eng.classify(xduals[g].first, qk);
      if (!c.zero) acc.add(c.key, xduals[g].second * qc * c.sign);
    }
  }
  acc *= Rat(1, 2);
  return acc;
}

// differential of a weight-w class: d = [alpha, -] expanded slot by slot
inline LinComb def_differential(const DefEngine& eng, const LinComb& alpha,
                                const std::string& class_key, int w) {
  LinComb out;
  for (auto& [akey, ac] : alpha.terms) {
    for (int k = 1; k <= 2; ++k) eng.insert_terms(akey, 2, k, class_key, w, ac, out);
    const Rat outer = (w % 2 == 0) ? ac : -ac;  // -(-1)^{|alpha||v|}
    for (int j = 1; j <= w; ++j)
      eng.insert_terms(class_key, w, j, akey, 2, outer, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

namespace detail {

inline SparseMatrix block_from_columns(const std::vector<std::string>& domain,
                                       const std::vector<std::string>& codomain,
                                       const std::vector<LinComb>& cols,
                                       const std::string& context) {
  std::map<std::string, int> row_of;
  for (std::size_t r = 0; r < codomain.size(); ++r)
    row_of.emplace(codomain[r], static_cast<int>(r));
  SparseMatrix m(static_cast<int>(codomain.size()), static_cast<int>(domain.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (auto& [k, v] : cols[c].terms) {
      auto it = row_of.find(k);
      if (it == row_of.end())
        throw std::logic_error(context + ": differential left the computed basis: " + k);
      m.add(it->second, static_cast<int>(c), v);
    }
  m.normalize();
  return m;
}

inline GradedChainComplex build_com_lie_identity(const OperadMapSpec& f, int w_max);

}  // namespace detail

// Generic convolution-complex builder. Components run over weights 1..w_max+1
// and blocks over 1..w_max, so homology is available on 1..w_max.
// Def(id_Com) and Def(id_Lie) collapse onto the bracket subspace and carry
// components only up to w_max (their weight-3 and higher components vanish).
inline GradedChainComplex build_generic(const OperadMapSpec& f, int w_max,
                                        int cap = 8) {
  check_map_spec(f);
  if (f.source == "com" || f.target == "lie")
    return detail::build_com_lie_identity(f, w_max);
  if (w_max + 1 > cap)
    throw ResourceLimitError("build_generic: weight cap exceeded");
  DefEngine eng(detail::kind_of(detail::dual_name(f.source)),
                f.target == "lie" ? FactorKind::Tree : detail::kind_of(f.target));
  LinComb alpha = alpha_class(f, eng);
  GradedChainComplex c;
  c.name = "def:" + f.name;
  for (int w = 1; w <= w_max + 1; ++w) c.bases.push_back(eng.basis(w));
  for (int w = 1; w <= w_max; ++w) {
    std::vector<LinComb> cols;
    cols.reserve(c.bases[w - 1].size());
    for (auto& key : c.bases[w - 1]) cols.push_back(def_differential(eng, alpha, key, w));
    c.blocks.push_back(
        detail::block_from_columns(c.bases[w - 1], c.bases[w], cols, c.name));
  }
  return c;
}

namespace detail {

// Def(id_Com) and Def(id_Lie): the components are the sign-orbit projections
// of the bracket subspace of the tree space, which collapse to dimensions
// 1, 1, 0, 0, ... The differential acts through the ambient class engine.
inline GradedChainComplex build_com_lie_identity(const OperadMapSpec& f, int w_max) {
  DefEngine eng(FactorKind::Tree, FactorKind::Com);
  LinComb alpha("1(2)|" + keys::com(2));
  GradedChainComplex c;
  c.name = "def:" + f.name;
  std::vector<std::vector<LinComb>> comp_vectors;  // per weight, over class keys
  for (int w = 1; w <= w_max; ++w) {
    SpanBasis span;
    std::vector<LinComb> vecs;
    for (auto& b : lie_basis(w)) {
      LinComb vec;
      for (auto& [treekey, coeff] : b.terms) {
        RootedTree t = parse_tree(treekey);
        t.odd_all_vertices = true;
        auto cc = canonicalize(t);
        if (!cc.zero) vec.add(cc.key + "|" + keys::com(w), coeff * cc.sign);
      }
      if (!vec.is_zero() && span.insert(vec)) vecs.push_back(vec);
    }
    comp_vectors.push_back(vecs);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < vecs.size(); ++j)
      names.push_back("cls:" + std::to_string(w) + ":" + std::to_string(j));
    c.bases.push_back(names);
  }
  for (int w = 1; w < w_max; ++w) {
    SpanBasis target;
    for (auto& v : comp_vectors[w]) target.insert(v);
    std::vector<LinComb> cols;
    for (auto& v : comp_vectors[w - 1]) {
      LinComb img;
      for (auto& [key, coeff] : v.terms) {
        LinComb d = def_differential(eng, alpha, key, w);
        d *= coeff;
        img += d;
      }
      std::map<int, Rat> coeffs;
      if (!target.express(img, coeffs))
        throw std::logic_error(c.name + ": differential left the bracket subspace");
      LinComb col;
      for (auto& [j, cf] : coeffs) col.add(c.bases[w][j], cf);
      cols.push_back(col);
    }
    c.blocks.push_back(block_from_columns(c.bases[w - 1], c.bases[w], cols, c.name));
  }
  return c;
}

// split the vertex labelled j of a canonically labelled tree: the lower
// vertex keeps label j (and the mark, if any), the upper one is the fresh
// label j+1, labels above j shift up, and the children in the chosen subset
// move to the upper vertex. Matches the insertion relabelling exactly.
inline RootedTree make_split(const RootedTree& t, int j,
                             const std::vector<int>& subset_children) {
  RootedTree s = t;
  for (auto& d : s.dec)
    if (d.kind == VertexKind::Label && d.label > j) ++d.label;
  int vj = -1;
  for (int v = 0; v < s.size(); ++v)
    if (s.dec[v].kind == VertexKind::Label && s.dec[v].label == j) vj = v;
  const int upper = s.size();
  s.parent.push_back(vj);
  s.dec.push_back(label_dec(j + 1));
  for (int child : subset_children) s.parent[child] = upper;
  return s;
}

template <class TermFn>
void tree_model_terms(const RootedTree& rep, int w, bool marked_model, TermFn&& emit) {
  auto ch = rep.children();
  // extra-leaf terms: +1 each
  for (int v = 0; v < rep.size(); ++v) {
    RootedTree s = rep;
    s.parent.push_back(v);
    s.dec.push_back(label_dec(w + 1));
    emit(std::move(s), Rat(1));
  }
  // root graft, (-1)^(w-1); in the marked model the new root takes the mark
  {
    RootedTree s;
    s.parent.resize(w + 1);
    s.dec.resize(w + 1);
    s.parent[0] = 0;
    s.dec[0] = label_dec(1, marked_model);
    for (int v = 0; v < w; ++v) {
      s.parent[v + 1] = rep.parent[v] == v ? 0 : rep.parent[v] + 1;
      VertexDecoration d = rep.dec[v];
      d.label += 1;
      d.marked = false;
      s.dec[v + 1] = d;
    }
    emit(std::move(s), Rat(w % 2 == 1 ? 1 : -1));
  }
  // vertex splittings, (-1)^w (-1)^(j-1) per subset
  const Rat wsign(w % 2 == 0 ? 1 : -1);
  for (int v = 0; v < rep.size(); ++v) {
    const int j = rep.dec[v].label;
    const Rat js = wsign * Rat(j % 2 == 1 ? 1 : -1);
    const auto& kids = ch[v];
    const std::size_t subsets = std::size_t(1) << kids.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      std::vector<int> chosen;
      for (std::size_t b = 0; b < kids.size(); ++b)
        if (mask & (std::size_t(1) << b)) chosen.push_back(kids[b]);
      emit(make_split(rep, j, chosen), js);
    }
  }
}

inline GradedChainComplex build_tree_model(const std::string& name, int w_max,
                                           bool marked_model) {
  GradedChainComplex c;
  c.name = name;
  std::vector<const std::vector<CanonicalResult>*> bases;
  for (int w = 1; w <= w_max + 1; ++w) {
    bases.push_back(&orbit_basis(w, 0, true, marked_model ? 1 : 0));
    std::vector<std::string> names;
    for (auto& cc : *bases.back()) names.push_back(cc.key);
    c.bases.push_back(names);
  }
  for (int w = 1; w <= w_max; ++w) {
    std::vector<LinComb> cols;
    for (auto& cc : *bases[w - 1]) {
      LinComb col;
      tree_model_terms(cc.rep, w, marked_model, [&](RootedTree s, Rat coeff) {
        s.odd_all_vertices = true;
        auto cz = canonicalize(s);
        if (!cz.zero) col.add(cz.key, coeff * cz.sign);
      });
      cols.push_back(std::move(col));
    }
    c.blocks.push_back(block_from_columns(c.bases[w - 1], c.bases[w], cols, c.name));
  }
  return c;
}

}  // namespace detail

// Explicit model of Def(Lie -> PL): sign-admissible unlabelled rooted trees,
// with the splitting / grafting / leaf-adding differential.
inline GradedChainComplex build_lie_to_pl(int w_max, int cap = 8) {
  if (w_max + 1 > cap) throw ResourceLimitError("build_lie_to_pl: cap exceeded");
  return detail::build_tree_model("def:lie-pl:trees", w_max, false);
}

// Explicit model of Def(id_PL): one distinguished vertex per tree.
inline GradedChainComplex build_id_pl(int w_max, int cap = 8) {
  if (w_max + 1 > cap) throw ResourceLimitError("build_id_pl: cap exceeded");
  return detail::build_tree_model("def:id-pl:trees", w_max, true);
}

// Explicit model of Def(PL -> Ass): basis e_w^1..e_w^w per weight with the
// case-split differential formula.
inline std::string e_key(int n, int i) {
  return "e:" + std::to_string(n) + ":" + std::to_string(i);
}

inline LinComb e_model_differential(int n, int i) {
  LinComb out;
  if ((n + i) % 2 == 1) out.add(e_key(n + 1, i), Rat(1));  // opposite parities
  out.add(e_key(n + 1, 1), Rat(n % 2 == 1 ? 1 : -1));
  if (i % 2 == 0) out.add(e_key(n + 1, i + 1), Rat(n % 2 == 0 ? 1 : -1));
  return out;
}

inline GradedChainComplex build_pl_to_ass(int w_max, int cap = 64) {
  if (w_max + 1 > cap) throw ResourceLimitError("build_pl_to_ass: cap exceeded");
  GradedChainComplex c;
  c.name = "def:pl-ass:words";
  for (int w = 1; w <= w_max + 1; ++w) {
    std::vector<std::string> names;
    for (int i = 1; i <= w; ++i) names.push_back(e_key(w, i));
    c.bases.push_back(names);
  }
  for (int w = 1; w <= w_max; ++w) {
    std::vector<LinComb> cols;
    for (int i = 1; i <= w; ++i) cols.push_back(e_model_differential(w, i));
    c.blocks.push_back(
        detail::block_from_columns(c.bases[w - 1], c.bases[w], cols, c.name));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Koszul-duality comparison: for f and its dual map, component dimensions
// must agree weight-wise and the factor-swap identification must conjugate
// one differential into the other exactly.
// ---------------------------------------------------------------------------

struct DualCheckRow {
  int weight = 0;
  int dim_a = 0, dim_b = 0;
  bool dims_ok = false;
  bool block_ok = false;  // block leaving this weight
};

struct DualCheckReport {
  std::string name;
  std::vector<DualCheckRow> rows;
  bool pass = true;
};

inline OperadMapSpec dual_map(const OperadMapSpec& f) {
  static const std::map<std::string, std::pair<std::string, std::string>> table = {
      {"pl-com", {"lie", "perm"}}, {"lie-perm", {"pl", "com"}},
      {"lie-pl", {"perm", "com"}}, {"perm-com", {"lie", "pl"}},
      {"pl-ass", {"ass", "perm"}}, {"ass-perm", {"pl", "ass"}},
      {"id-pl", {"perm", "perm"}}, {"id-perm", {"pl", "pl"}},
      {"id-com", {"lie", "lie"}},  {"id-lie", {"com", "com"}},
      {"id-ass", {"ass", "ass"}}};
  auto [s, t] = table.at(f.name);
  return map_spec(s, t);
}

inline DualCheckReport koszul_dual_check(const OperadMapSpec& f, int w_max) {
  OperadMapSpec g = dual_map(f);
  DualCheckReport rep;
  rep.name = f.name + " vs " + g.name;
  GradedChainComplex A = build_generic(f, w_max);
  GradedChainComplex B = build_generic(g, w_max);
  DefEngine engB(detail::kind_of(detail::dual_name(g.source)),
                 detail::kind_of(g.target));
  // signed identification per weight: swap the two Hadamard factors
  std::vector<std::map<int, std::pair<int, int>>> ident;  // w -> colA -> (rowB, sign)
  for (int w = 1; w <= w_max + 1; ++w) {
    std::map<std::string, int> indexB;
    for (std::size_t r = 0; r < B.bases[w - 1].size(); ++r)
      indexB.emplace(B.bases[w - 1][r], static_cast<int>(r));
    std::map<int, std::pair<int, int>> phi;
    bool ok = A.bases[w - 1].size() == B.bases[w - 1].size();
    for (std::size_t cidx = 0; ok && cidx < A.bases[w - 1].size(); ++cidx) {
      auto [x, q] = DefEngine::split_key(A.bases[w - 1][cidx]);
      auto cls = engB.classify(q, x);
      auto it = cls.zero ? indexB.end() : indexB.find(cls.key);
      if (it == indexB.end()) {
        ok = false;
        break;
      }
      phi[static_cast<int>(cidx)] = {it->second, cls.sign};
    }
    ident.push_back(ok ? phi : std::map<int, std::pair<int, int>>{});
    if (w <= w_max + 1) {
      DualCheckRow row;
      row.weight = w;
      row.dim_a = A.dim(w);
      row.dim_b = B.dim(w);
      row.dims_ok = ok;
      rep.rows.push_back(row);
    }
  }
  for (int w = 1; w <= w_max; ++w) {
    bool ok = rep.rows[w - 1].dims_ok && rep.rows[w].dims_ok;
    if (ok) {
      // compare P_{w+1} D_A(w) with D_B(w) P_w entrywise
      SparseMatrix lhs(B.dim(w + 1), A.dim(w));
      for (auto& [r, c, v] : A.block(w).entries) {
        auto [rb, s] = ident[w].at(r);
        lhs.add(rb, c, v * s);
      }
      lhs.normalize();
      SparseMatrix rhs(B.dim(w + 1), A.dim(w));
      for (auto& [r, c, v] : B.block(w).entries) {
        // column c of B corresponds to the A-column mapped onto it
        rhs.add(r, c, v);  // temporarily in B-columns
      }
      // remap rhs columns through the inverse of ident[w-1]
      std::vector<int> colB_to_A(B.dim(w), -1);
      std::vector<int> sgn_col(B.dim(w), 1);
      for (auto& [ca, pr] : ident[w - 1]) {
        colB_to_A[pr.first] = ca;
        sgn_col[pr.first] = pr.second;
      }
      SparseMatrix rhs2(B.dim(w + 1), A.dim(w));
      for (auto& [r, cb, v] : rhs.entries)
        rhs2.add(r, colB_to_A[cb], v * sgn_col[cb]);
      rhs2.normalize();
      ok = lhs.entries == rhs2.entries;
    }
    rep.rows[w - 1].block_ok = ok;
    if (!ok) rep.pass = false;
  }
  for (auto& row : rep.rows)
    if (!row.dims_ok) rep.pass = false;
  return rep;
}

}  // namespace oplab
