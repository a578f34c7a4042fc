#pragma once

#include <string>
#include <vector>

#include "oplab/def_complex.hpp"

namespace oplab {

// ---------------------------------------------------------------------------
// The twisted operad Tw(PL).
//
// The arity-n component with k alpha vertices is spanned by rooted trees with
// labelled vertices 1..n (even) and k interchangeable alpha vertices (odd,
// degree -1 each). Classes are canonical representatives; the orientation of
// a representative is its alpha vertices in increasing vertex id (for
// canonical trees this is their first-visit order in the DFS). Every term of
// the differential adds exactly one alpha, so the k-grading is exact and the
// completed coproduct never truncates.
//
// d_Tw(T) consists of:
//   . splitting an alpha vertex (position p) into two alphas, the new one
//     right after it in the orientation, with sign -(-1)^(p-1) per subset of
//     children moved up;
//   . splitting a labelled vertex into label+alpha: the variant with the
//     label further from the root enters with +(-1)^k, the other with
//     -(-1)^k, the new alpha last in the orientation;
//   . grafting at a new alpha root (sign -1) and adding one alpha leaf at
//     every vertex (sign +1), the new alpha last.
// The sign rule is pinned by d(alpha) = alpha o alpha, the arity-2 cycle
// check, d^2 = 0 on the whole window, and the homology of Theorem-5.1 type.
// ---------------------------------------------------------------------------

namespace twdetail {

inline RootedTree rebuild(const std::vector<int>& parent,
                          const std::vector<VertexDecoration>& dec,
                          const std::vector<int>& alpha_order) {
  const int n = static_cast<int>(parent.size());
  std::vector<int> new_id(n, -1);
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (dec[v].kind != VertexKind::Alpha) new_id[v] = next++;
  for (int a : alpha_order) new_id[a] = next++;
  RootedTree t;
  t.parent.resize(n);
  t.dec.resize(n);
  for (int v = 0; v < n; ++v) {
    t.parent[new_id[v]] = parent[v] == v ? new_id[v] : new_id[parent[v]];
    t.dec[new_id[v]] = dec[v];
  }
  return t;
}

// emit(tree, coeff) over all differential terms of the class representative
template <class Emit>
void tw_terms(const RootedTree& rep, Emit&& emit) {
  const int n = rep.size();
  auto ch = rep.children();
  std::vector<int> alphas;
  for (int v = 0; v < n; ++v)
    if (rep.dec[v].kind == VertexKind::Alpha) alphas.push_back(v);
  const int k = static_cast<int>(alphas.size());
  const Rat ksign(k % 2 == 0 ? 1 : -1);

  auto base_order = alphas;  // orientation of the input

  // alpha splittings
  for (int p = 1; p <= k; ++p) {
    const int u = alphas[p - 1];
    const Rat coeff = Rat(p % 2 == 1 ? -1 : 1);  // -(-1)^(p-1)
    const auto& kids = ch[u];
    const std::size_t subsets = std::size_t(1) << kids.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      std::vector<int> parent = rep.parent;
      std::vector<VertexDecoration> dec = rep.dec;
      const int up = n;
      parent.push_back(u);
      dec.push_back(alpha_dec());
      for (std::size_t b = 0; b < kids.size(); ++b)
        if (mask & (std::size_t(1) << b)) parent[kids[b]] = up;
      std::vector<int> order;
      for (int i = 0; i < p; ++i) order.push_back(base_order[i]);
      order.push_back(up);
      for (int i = p; i < k; ++i) order.push_back(base_order[i]);
      emit(rebuild(parent, dec, order), coeff);
    }
  }

  // labelled-vertex splittings
  for (int v = 0; v < n; ++v) {
    if (rep.dec[v].kind != VertexKind::Label) continue;
    const auto& kids = ch[v];
    const std::size_t subsets = std::size_t(1) << kids.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      // variant 1: the label stays further from the root, alpha below: +(-1)^k
      {
        std::vector<int> parent = rep.parent;
        std::vector<VertexDecoration> dec = rep.dec;
        const int down = n;
        parent.push_back(rep.parent[v] == v ? down : rep.parent[v]);
        if (rep.parent[v] == v) parent[down] = down;
        dec.push_back(alpha_dec());
        parent[v] = down;
        for (std::size_t b = 0; b < kids.size(); ++b)
          if (!(mask & (std::size_t(1) << b))) parent[kids[b]] = down;
        std::vector<int> order = base_order;
        order.push_back(down);
        emit(rebuild(parent, dec, order), ksign);
      }
      // variant 2: alpha further from the root, label below: -(-1)^k
      {
        std::vector<int> parent = rep.parent;
        std::vector<VertexDecoration> dec = rep.dec;
        const int up = n;
        parent.push_back(v);
        dec.push_back(alpha_dec());
        for (std::size_t b = 0; b < kids.size(); ++b)
          if (mask & (std::size_t(1) << b)) parent[kids[b]] = up;
        std::vector<int> order = base_order;
        order.push_back(up);
        emit(rebuild(parent, dec, order), -ksign);
      }
    }
  }

  // graft at a new alpha root
  {
    std::vector<int> parent = rep.parent;
    std::vector<VertexDecoration> dec = rep.dec;
    const int newroot = n;
    parent.push_back(newroot);
    dec.push_back(alpha_dec());
    parent[rep.root()] = newroot;
    std::vector<int> order = base_order;
    order.push_back(newroot);
    emit(rebuild(parent, dec, order), Rat(-1));
  }

  // one extra alpha leaf at every vertex
  for (int v = 0; v < n; ++v) {
    std::vector<int> parent = rep.parent;
    std::vector<VertexDecoration> dec = rep.dec;
    parent.push_back(v);
    dec.push_back(alpha_dec());
    std::vector<int> order = base_order;
    order.push_back(n);
    emit(rebuild(parent, dec, order), Rat(1));
  }
}

}  // namespace twdetail

// basis of the (arity n, k alphas) piece; degree -k
inline const std::vector<CanonicalResult>& tw_component(int n, int k, int cap = 8) {
  if (n + k > cap) throw ResourceLimitError("tw_component: n + k exceeds cap");
  if (n == 0 && k == 0)
    throw std::invalid_argument("tw_component: the (0,0) piece is empty by reducedness");
  return detail::orbit_basis(n, k, false, 0);
}

inline std::vector<std::string> tw_component_keys(int n, int k, int cap = 8) {
  if (n == 0 && k == 0) return {};
  std::vector<std::string> out;
  for (auto& c : tw_component(n, k, cap)) out.push_back(c.key);
  return out;
}

// differential of a single class vector, as a combination of (n, k+1) keys
inline LinComb tw_differential_of(const RootedTree& rep) {
  LinComb out;
  twdetail::tw_terms(rep, [&](RootedTree t, Rat coeff) {
    auto c = canonicalize(t);
    if (!c.zero) out.add(c.key, coeff * c.sign);
  });
  return out;
}

// block (n,k) -> (n,k+1)
inline SparseMatrix tw_differential(int n, int k, int cap = 8) {
  if (n + k + 1 > cap) throw ResourceLimitError("tw_differential: cap exceeded");
  const auto dom = tw_component_keys(n, k, cap);
  const auto cod = tw_component_keys(n, k + 1, cap);
  std::map<std::string, int> row_of;
  for (std::size_t r = 0; r < cod.size(); ++r)
    row_of.emplace(cod[r], static_cast<int>(r));
  SparseMatrix m(static_cast<int>(cod.size()), static_cast<int>(dom.size()));
  if (n == 0 && k == 0) {
    m.normalize();
    return m;
  }
  const auto& basis = tw_component(n, k, cap);
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (auto& [key, coeff] : tw_differential_of(basis[c].rep).terms)
      m.add(row_of.at(key), static_cast<int>(c), coeff);
  m.normalize();
  return m;
}

// the whole k-column as a chain complex object (weights shifted by one so
// that k = w - 1; block(0) = 0 is the usual convention)
inline GradedChainComplex tw_complex(int n, int k_top, int cap = 8) {
  GradedChainComplex c;
  c.name = "tw:arity" + std::to_string(n);
  for (int k = 0; k <= k_top; ++k) c.bases.push_back(tw_component_keys(n, k, cap));
  for (int k = 0; k + 1 <= k_top; ++k) c.blocks.push_back(tw_differential(n, k, cap));
  return c;
}

// homology reports indexed by k = 0..k_max; requires n + k_max + 1 <= cap
inline std::vector<HomologyReport> tw_homology(int n, int k_max,
                                               ProfileOptions opt = {}, int cap = 8) {
  if (n + k_max + 1 > cap) throw ResourceLimitError("tw_homology: cap exceeded");
  auto c = tw_complex(n, k_max + 1, cap);
  auto prof = homology_profile(c, 1, k_max + 1, opt);
  for (auto& rep : prof) rep.weight -= 1;  // report k, not the shifted weight
  return prof;
}

// do the bracket elements of arity n span the k = 0 homology?
inline bool lie_image_check(int n, int cap = 8) {
  const auto keys0 = tw_component_keys(n, 0, cap);
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < keys0.size(); ++i)
    idx.emplace(keys0[i], static_cast<int>(i));
  SparseMatrix d0 = tw_differential(n, 0, cap);
  // every bracket monomial must be a cycle
  std::vector<std::vector<std::pair<int, Rat>>> cols(d0.n_cols);
  for (auto& [r, cc, v] : d0.entries) cols[cc].emplace_back(r, v);
  detail::SpanBasis lie_span;
  for (auto& b : lie_basis(n)) {
    std::map<int, Rat> img;
    for (auto& [key, coeff] : b.terms)
      for (auto& [r, v] : cols[idx.at(key)]) img[r] += coeff * v;
    for (auto& [r, v] : img)
      if (v != 0) return false;
    lie_span.insert(b);
  }
  long long lf = 1;
  for (int i = 2; i < n; ++i) lf *= i;
  if (lie_span.rank() != lf) return false;
  // the cycles span the homology iff dim ker d0 = (n-1)!
  const int kernel_dim = d0.n_cols - rank(d0);
  return kernel_dim == lf;
}

// spanning columns of the (alpha o alpha)-ideal piece in the (n, k) component
inline SparseMatrix ideal_spanning(int n, int k, int cap = 8) {
  const auto cod = tw_component_keys(n, k, cap);
  std::map<std::string, int> row_of;
  for (std::size_t r = 0; r < cod.size(); ++r)
    row_of.emplace(cod[r], static_cast<int>(r));
  if (k < 2) {
    SparseMatrix empty(static_cast<int>(cod.size()), 0);
    return empty;
  }
  // insert the two-alpha path into the extra slot n+1 of every tree with
  // labels {1..n+1} and k-2 alphas, with pl_compose reattachment semantics
  const auto& slots = detail::orbit_basis(n + 1, k - 2, false, 0);
  RootedTree path2 = parse_tree("1(2)");
  std::vector<std::tuple<int, int, Rat>> entries;
  int col = 0;
  for (auto& b : slots) {
    LinComb vec;
    for (auto& t : pl_compose_trees(b.rep, n + 1, path2)) {
      RootedTree s = t;
      // the inserted pair are the vertices labelled n+1 and n+2; they become
      // alphas, appended to the orientation in root-then-leaf order
      int first = -1, second = -1;
      for (int v = 0; v < s.size(); ++v) {
        if (s.dec[v].kind != VertexKind::Label) continue;
        if (s.dec[v].label == n + 1) first = v;
        if (s.dec[v].label == n + 2) second = v;
      }
      std::vector<int> order;
      for (int v = 0; v < s.size(); ++v)
        if (s.dec[v].kind == VertexKind::Alpha) order.push_back(v);
      s.dec[first] = alpha_dec();
      s.dec[second] = alpha_dec();
      order.push_back(first);
      order.push_back(second);
      s = twdetail::rebuild(s.parent, s.dec, order);
      auto c = canonicalize(s);
      if (!c.zero) vec.add(c.key, Rat(c.sign));
    }
    for (auto& [key, coeff] : vec.terms) entries.emplace_back(row_of.at(key), col, coeff);
    ++col;
  }
  SparseMatrix m(static_cast<int>(cod.size()), col);
  m.entries = std::move(entries);
  m.normalize();
  return m;
}

// independent basis of the ideal piece, as combinations of component keys
inline std::vector<LinComb> ideal_component(int n, int k, int cap = 8) {
  if (n + k > cap) throw ResourceLimitError("ideal_component: cap exceeded");
  const auto cod = tw_component_keys(n, k, cap);
  SparseMatrix span = ideal_spanning(n, k, cap);
  std::vector<std::vector<std::pair<int, Rat>>> cols(span.n_cols);
  for (auto& [r, c, v] : span.entries) cols[c].emplace_back(r, v);
  detail::SpanBasis sb;
  std::vector<LinComb> out;
  for (auto& colv : cols) {
    LinComb vec;
    for (auto& [r, v] : colv) vec.add(cod[r], v);
    if (!vec.is_zero() && sb.insert(vec)) out.push_back(vec);
  }
  return out;
}

namespace twdetail {

inline SparseMatrix concat_columns(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.n_rows != b.n_rows) throw std::invalid_argument("concat_columns: rows differ");
  SparseMatrix m(a.n_rows, a.n_cols + b.n_cols);
  m.entries = a.entries;
  for (auto& [r, c, v] : b.entries) m.entries.emplace_back(r, c + a.n_cols, v);
  m.normalize();
  return m;
}

inline int rank_by_mode(const SparseMatrix& m, const ProfileOptions& opt,
                        bool& used_modular) {
  if (m.nnz() == 0) return 0;
  if (opt.modular && (m.n_rows > opt.exact_threshold || m.n_cols > opt.exact_threshold)) {
    auto mr = rank_modular(m, default_primes());
    if (mr.certified) {
      used_modular = true;
      return mr.rank;
    }
  }
  return rank(m);
}

}  // namespace twdetail

// Homology of the quotient by the (alpha o alpha)-ideal, reported per k.
// Ranks use the spanning-set identities
//   dim Q_k           = dim Tw_k - rank I_k
//   rank(dbar_k)      = rank [ d_k | I_{k+1} ] - rank I_{k+1}
// which avoid choosing coset representatives. Closure of the ideal under the
// differential is asserted on the way.
inline std::vector<HomologyReport> rpl_homology(int n, int k_max,
                                                ProfileOptions opt = {}, int cap = 8) {
  if (n + k_max + 1 > cap) throw ResourceLimitError("rpl_homology: cap exceeded");
  std::vector<SparseMatrix> D(k_max + 1), I(k_max + 2);
  for (int k = 0; k <= k_max; ++k) D[k] = tw_differential(n, k, cap);
  for (int k = 0; k <= k_max + 1; ++k) I[k] = ideal_spanning(n, k, cap);
  std::vector<int> rank_I(k_max + 2, 0), rank_Q(k_max + 1, 0);
  std::vector<char> used_mod(k_max + 2, 0);
  for (int k = 0; k <= k_max + 1; ++k) {
    bool um = false;
    rank_I[k] = twdetail::rank_by_mode(I[k], opt, um);
    used_mod[k] |= um;
  }
  for (int k = 0; k <= k_max; ++k) {
    bool um = false;
    // closure: d(ideal) stays in the ideal
    if (I[k].n_cols > 0) {
      SparseMatrix dI = D[k].mul(I[k]);
      int r = twdetail::rank_by_mode(twdetail::concat_columns(dI, I[k + 1]), opt, um);
      if (r != rank_I[k + 1])
        throw std::logic_error("rpl: ideal is not closed under the differential");
    }
    rank_Q[k] =
        twdetail::rank_by_mode(twdetail::concat_columns(D[k], I[k + 1]), opt, um) -
        rank_I[k + 1];
    used_mod[k] |= um;
  }
  std::vector<HomologyReport> out;
  for (int k = 0; k <= k_max; ++k) {
    HomologyReport rep;
    rep.weight = k;
    rep.dim_chain = (k == 0 && n == 0) ? 0
                                       : static_cast<int>(tw_component_keys(n, k, cap).size()) -
                                             rank_I[k];
    rep.rank_in = k == 0 ? 0 : rank_Q[k - 1];
    rep.rank_out = rank_Q[k];
    rep.betti = rep.dim_chain - rep.rank_in - rep.rank_out;
    rep.modular = used_mod[k] || (k > 0 && used_mod[k - 1]);
    if (rep.betti < 0) throw std::logic_error("rpl: negative betti");
    out.push_back(rep);
  }
  return out;
}

// kernel of the induced degree-0 differential: must coincide with the span
// of the bracket monomials inside the tree space
inline std::vector<LinComb> lie_elements_kernel(int n, int cap = 8) {
  if (n + 1 > cap) throw ResourceLimitError("lie_elements_kernel: cap exceeded");
  const auto keys0 = tw_component_keys(n, 0, cap);
  SparseMatrix d0 = tw_differential(n, 0, cap);
  std::vector<LinComb> out;
  for (auto& vec : nullspace(d0)) {
    LinComb v;
    for (auto& [c, coeff] : vec) v.add(keys0[c], coeff);
    out.push_back(std::move(v));
  }
  return out;
}

inline bool lie_kernel_matches_brackets(int n, int cap = 8) {
  auto kernel = lie_elements_kernel(n, cap);
  detail::SpanBasis a, b, both;
  for (auto& v : kernel) {
    a.insert(v);
    both.insert(v);
  }
  for (auto& v : lie_basis(n)) {
    b.insert(v);
    both.insert(v);
  }
  long long lf = 1;
  for (int i = 2; i < n; ++i) lf *= i;
  if (n == 1) lf = 1;
  return a.rank() == lf && b.rank() == lf && both.rank() == lf;
}

// ---------------------------------------------------------------------------
// Free tree-model products for the derivation identity of the quotient.
// ---------------------------------------------------------------------------

// x < y on class keys: graft y's root under every vertex of x; orientation is
// x's alphas followed by y's
inline LinComb tw_graft_product(const std::string& xkey, const std::string& ykey) {
  RootedTree x = parse_tree(xkey), y = parse_tree(ykey);
  const int nx = x.size(), ny = y.size();
  LinComb out;
  for (int v = 0; v < nx; ++v) {
    std::vector<int> parent(nx + ny);
    std::vector<VertexDecoration> dec(nx + ny);
    for (int i = 0; i < nx; ++i) {
      parent[i] = x.parent[i];
      dec[i] = x.dec[i];
    }
    for (int j = 0; j < ny; ++j) {
      parent[nx + j] = y.parent[j] == j ? v : nx + y.parent[j];
      dec[nx + j] = y.dec[j];
    }
    std::vector<int> order;
    for (int i = 0; i < nx; ++i)
      if (dec[i].kind == VertexKind::Alpha) order.push_back(i);
    for (int j = 0; j < ny; ++j)
      if (dec[nx + j].kind == VertexKind::Alpha) order.push_back(nx + j);
    auto c = canonicalize(twdetail::rebuild(parent, dec, order));
    if (!c.zero) out.add(c.key, Rat(c.sign));
  }
  return out;
}

inline LinComb tw_graft_product(const LinComb& a, const LinComb& b) {
  LinComb out;
  for (auto& [ka, ca] : a.terms)
    for (auto& [kb, cb] : b.terms) {
      LinComb t = tw_graft_product(ka, kb);
      t *= ca * cb;
      out += t;
    }
  return out;
}

inline LinComb tw_d(const LinComb& a) {
  LinComb out;
  for (auto& [key, coeff] : a.terms) {
    RootedTree t = parse_tree(key);
    LinComb d = tw_differential_of(t);
    d *= coeff;
    out += d;
  }
  return out;
}

// d(a < b) = d(a) < b + (-1)^{|a|} a < d(b) + Q(a, b) in the quotient, with
// Q(a, b) = (o < a) < b - o < (a < b) for the arity-0 alpha generator o.
// For multilinear degree-0 inputs the identity already holds on the nose in
// the (n, 1) component, since the ideal only starts at two alphas.
inline bool q_identity_check(int n, int cap = 8) {
  if (n + 1 > cap) throw ResourceLimitError("q_identity_check: cap exceeded");
  if (n == 1) return tw_d(LinComb("1")).is_zero();  // d kills generators
  const std::string circ = "*";
  // enumerate multilinear basis pairs: trees on I and on its complement
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 1);
  for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << n); ++mask) {
    std::vector<int> I, J;
    for (int b = 0; b < n; ++b)
      ((mask >> b) & 1 ? I : J).push_back(b + 1);
    auto trees_on = [&](const std::vector<int>& labels) {
      std::vector<std::string> out;
      for_each_labelled_tree(static_cast<int>(labels.size()), [&](const RootedTree& t) {
        RootedTree s = t;
        for (auto& d : s.dec) d.label = labels[d.label - 1];
        out.push_back(format_tree(s));
      });
      return out;
    };
    for (auto& akey : trees_on(I))
      for (auto& bkey : trees_on(J)) {
        LinComb a(akey), b(bkey);
        LinComb ab = tw_graft_product(a, b);
        LinComb lhs = tw_d(ab) - tw_graft_product(tw_d(a), b) -
                      tw_graft_product(a, tw_d(b));
        LinComb qab = tw_graft_product(tw_graft_product(LinComb(circ), a), b) -
                      tw_graft_product(LinComb(circ), ab);
        if (!(lhs == qab)) return false;
      }
  }
  return true;
}

}  // namespace oplab
