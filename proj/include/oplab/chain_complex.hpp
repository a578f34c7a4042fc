#pragma once

#include <string>
#include <vector>

#include "oplab/sparse_matrix.hpp"

namespace oplab {

// Weight-graded chain complex: one ordered basis per weight w = 1..top,
// plus the differential blocks C_w -> C_{w+1}. Weight-w chains sit in
// homological degree 1-w; every differential in this project raises the
// weight by exactly 1, so homology inside a computed window is exact.
struct GradedChainComplex {
  std::string name;
  std::vector<std::vector<std::string>> bases;  // bases[w-1] is the weight-w basis
  std::vector<SparseMatrix> blocks;             // blocks[w-1]: C_w -> C_{w+1}

  int top_weight() const { return static_cast<int>(bases.size()); }
  int dim(int w) const { return static_cast<int>(bases.at(w - 1).size()); }
  const SparseMatrix& block(int w) const { return blocks.at(w - 1); }
};

struct ProfileOptions {
  bool modular = false;      // allow certified multi-prime ranks on big blocks
  int exact_threshold = 2000;  // blocks with both dims <= threshold stay exact
};

// Exact betti numbers per weight in [w_lo, w_hi]. Needs blocks up to w_hi
// (block(0) is zero by convention). d o d = 0 is checked exactly on the way;
// a violation surfaces as CompositionNonzeroError.
inline std::vector<HomologyReport> homology_profile(const GradedChainComplex& c,
                                                    int w_lo, int w_hi,
                                                    ProfileOptions opt = {}) {
  if (w_lo < 1 || w_hi + 1 > c.top_weight() || w_lo > w_hi)
    throw std::invalid_argument("homology_profile: window outside computed blocks");
  for (int w = w_lo; w < w_hi; ++w)
    if (!c.block(w + 1).mul(c.block(w)).is_zero())
      throw CompositionNonzeroError(c.name + ": d o d != 0 at weight " +
                                    std::to_string(w));
  if (w_lo >= 2 && !c.block(w_lo).mul(c.block(w_lo - 1)).is_zero())
    throw CompositionNonzeroError(c.name + ": d o d != 0 at weight " +
                                  std::to_string(w_lo - 1));
  auto block_rank = [&](int w, bool& used_modular) -> int {
    if (w < 1) return 0;
    const SparseMatrix& m = c.block(w);
    if (m.nnz() == 0) return 0;
    if (opt.modular &&
        (m.n_rows > opt.exact_threshold || m.n_cols > opt.exact_threshold)) {
      auto mr = rank_modular(m, default_primes());
      if (mr.certified) {
        used_modular = true;
        return mr.rank;
      }
      // disagreement: fall back to the exact path
    }
    return rank(m);
  };
  std::vector<HomologyReport> out;
  int prev_rank = 0;
  bool prev_mod = false;
  {
    bool used = false;
    prev_rank = block_rank(w_lo - 1, used);
    prev_mod = used;
  }
  for (int w = w_lo; w <= w_hi; ++w) {
    bool used = false;
    int out_rank = block_rank(w, used);
    HomologyReport rep;
    rep.weight = w;
    rep.dim_chain = c.dim(w);
    rep.rank_in = prev_rank;
    rep.rank_out = out_rank;
    rep.betti = rep.dim_chain - rep.rank_in - rep.rank_out;
    rep.modular = used || prev_mod;
    if (rep.betti < 0)
      throw std::logic_error(c.name + ": negative betti, rank computation broken");
    out.push_back(rep);
    prev_rank = out_rank;
    prev_mod = used;
  }
  return out;
}

}  // namespace oplab
