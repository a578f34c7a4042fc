#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oplab/rational.hpp"

namespace oplab {

// Exact rational sparse matrix in coordinate form. Entries are kept sorted
// by (row, col) with no duplicates and no stored zeros.
struct SparseMatrix {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<std::tuple<int, int, Rat>> entries;

  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : n_rows(rows), n_cols(cols) {}

  void add(int r, int c, const Rat& v) {
    if (r < 0 || r >= n_rows || c < 0 || c >= n_cols)
      throw std::out_of_range("SparseMatrix::add: index out of range");
    if (v != 0) entries.emplace_back(r, c, v);
  }

  // Collapse duplicate coordinates and drop zeros; call once after building.
  void normalize() {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) {
                return std::tie(std::get<0>(a), std::get<1>(a)) <
                       std::tie(std::get<0>(b), std::get<1>(b));
              });
    std::vector<std::tuple<int, int, Rat>> out;
    out.reserve(entries.size());
    for (auto& e : entries) {
      if (!out.empty() && std::get<0>(out.back()) == std::get<0>(e) &&
          std::get<1>(out.back()) == std::get<1>(e)) {
        std::get<2>(out.back()) += std::get<2>(e);
        if (std::get<2>(out.back()) == 0) out.pop_back();
      } else if (std::get<2>(e) != 0) {
        out.push_back(e);
      }
    }
    entries.swap(out);
  }

  std::size_t nnz() const { return entries.size(); }
  bool is_zero() const { return entries.empty(); }

  SparseMatrix transpose() const {
    SparseMatrix t(n_cols, n_rows);
    for (const auto& [r, c, v] : entries) t.entries.emplace_back(c, r, v);
    t.normalize();
    return t;
  }

  static SparseMatrix identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.add(i, i, Rat(1));
    m.normalize();
    return m;
  }

  // this * other
  SparseMatrix mul(const SparseMatrix& other) const {
    if (n_cols != other.n_rows)
      throw std::invalid_argument("SparseMatrix::mul: dimension mismatch");
    std::vector<std::vector<std::pair<int, Rat>>> cols_of_left(n_cols);
    for (const auto& [r, c, v] : entries) cols_of_left[c].emplace_back(r, v);
    SparseMatrix out(n_rows, other.n_cols);
    std::map<std::pair<int, int>, Rat> acc;
    for (const auto& [k, j, w] : other.entries)
      for (const auto& [i, v] : cols_of_left[k]) acc[{i, j}] += v * w;
    for (auto& [rc, v] : acc)
      if (v != 0) out.entries.emplace_back(rc.first, rc.second, v);
    return out;
  }

  // Matrix market style dump for debugging exports.
  std::string matrix_market() const {
    std::ostringstream os;
    os << "%%MatrixMarket matrix coordinate rational general\n";
    os << n_rows << " " << n_cols << " " << entries.size() << "\n";
    for (const auto& [r, c, v] : entries)
      os << (r + 1) << " " << (c + 1) << " " << rat_str(v) << "\n";
    return os.str();
  }
};

namespace detail {

// Sparse row of rationals, sorted by column.
using SpRow = std::vector<std::pair<int, Rat>>;

// r += f * s  (merged, sorted)
inline void axpy(SpRow& r, const Rat& f, const SpRow& s) {
  SpRow out;
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
      ++i;
      ++j;
    }
  }
  r.swap(out);
}

}  // namespace detail

namespace detail {

// Shared sparse elimination skeleton. Scalar ops differ between the exact
// and the mod-p path; everything else (Markowitz-style pivoting through a
// lazy min-heap on column fill, reproducible tie-breaks) is identical.
template <class Row, class Eliminate, class RowPred>
int eliminate_sparse(int R, int C, std::vector<Row>& rows, Eliminate&& axpy_rows,
                     RowPred&& row_has) {
  std::vector<std::vector<int>> col_rows(C);
  for (int r = 0; r < R; ++r)
    for (auto& e : rows[r]) col_rows[e.first].push_back(r);
  std::vector<char> row_done(R, 0), col_done(C, 0), in_heap(C, 0);
  // lazy heap of (column nnz estimate, column); estimates are refreshed on pop
  using HeapEntry = std::pair<int, int>;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap;
  auto refresh = [&](int c) {
    auto& lst = col_rows[c];
    std::sort(lst.begin(), lst.end());
    lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
    lst.erase(std::remove_if(lst.begin(), lst.end(),
                             [&](int r) { return row_done[r] || !row_has(rows[r], c); }),
              lst.end());
    return static_cast<int>(lst.size());
  };
  for (int c = 0; c < C; ++c)
    if (!col_rows[c].empty()) {
      heap.emplace(static_cast<int>(col_rows[c].size()), c);
      in_heap[c] = 1;
    }
  int rk = 0;
  while (!heap.empty()) {
    auto [est, c] = heap.top();
    heap.pop();
    if (col_done[c]) continue;
    int fresh = refresh(c);
    if (fresh == 0) {
      in_heap[c] = 0;  // may resurrect through fill-in later
      continue;
    }
    if (fresh != est) {
      heap.emplace(fresh, c);
      continue;
    }
    int pivot_row = -1;
    std::size_t best_rn = 0;
    for (int r : col_rows[c]) {
      if (pivot_row == -1 || rows[r].size() < best_rn ||
          (rows[r].size() == best_rn && r < pivot_row)) {
        pivot_row = r;
        best_rn = rows[r].size();
      }
    }
    for (int r : col_rows[c]) {
      if (r == pivot_row) continue;
      axpy_rows(rows[r], rows[pivot_row], c);
      for (auto& e : rows[r]) {
        int cc = e.first;
        if (col_done[cc]) continue;
        col_rows[cc].push_back(r);
        if (!in_heap[cc]) {
          heap.emplace(static_cast<int>(col_rows[cc].size()), cc);
          in_heap[cc] = 1;
        }
      }
    }
    row_done[pivot_row] = 1;
    col_done[c] = 1;
    rows[pivot_row].clear();
    rows[pivot_row].shrink_to_fit();
    ++rk;
  }
  return rk;
}

}  // namespace detail

// Exact rank over Q. Gaussian elimination with a fill-minimizing pivot rule
// (sparsest live column, shortest row in it); ties break by index so runs
// are reproducible.
inline int rank(const SparseMatrix& m) {
  std::vector<detail::SpRow> rows(m.n_rows);
  for (const auto& [r, c, v] : m.entries) rows[r].emplace_back(c, v);
  auto row_has = [](const detail::SpRow& row, int c) {
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& p, int cc) { return p.first < cc; });
    return it != row.end() && it->first == c;
  };
  auto axpy_rows = [&](detail::SpRow& target, const detail::SpRow& pivot, int c) {
    auto get = [&](const detail::SpRow& row) {
      return std::lower_bound(row.begin(), row.end(), c,
                              [](const auto& p, int cc) { return p.first < cc; })
          ->second;
    };
    Rat f = -get(target) / get(pivot);
    detail::axpy(target, f, pivot);
  };
  return detail::eliminate_sparse(m.n_rows, m.n_cols, rows, axpy_rows, row_has);
}

// Rank over Z/p. Rational entries reduce mod p; returns -1 when p divides a
// denominator (the caller must then exclude this prime).
inline int rank_mod(const SparseMatrix& m, std::uint64_t p) {
  using Row = std::vector<std::pair<int, std::uint64_t>>;
  std::vector<Row> rows(m.n_rows);
  for (const auto& [r, c, v] : m.entries) {
    std::uint64_t x;
    if (!rat_mod(v, p, x)) return -1;
    if (x != 0) rows[r].emplace_back(c, x);
  }
  auto mulmod = [p](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  };
  auto powmod = [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
      if (e & 1) r = mulmod(r, b);
      b = mulmod(b, b);
      e >>= 1;
    }
    return r;
  };
  auto row_has = [](const Row& row, int c) {
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& q, int cc) { return q.first < cc; });
    return it != row.end() && it->first == c;
  };
  auto axpy_rows = [&](Row& rr, const Row& prow, int c) {
    auto get = [&](const Row& row) {
      return std::lower_bound(row.begin(), row.end(), c,
                              [](const auto& q, int cc) { return q.first < cc; })
          ->second;
    };
    const std::uint64_t f = p - mulmod(get(rr), powmod(get(prow), p - 2));
    Row out;
    out.reserve(rr.size() + prow.size());
    std::size_t i = 0, j = 0;
    while (i < rr.size() || j < prow.size()) {
      if (j == prow.size() || (i < rr.size() && rr[i].first < prow[j].first)) {
        out.push_back(rr[i++]);
      } else if (i == rr.size() || prow[j].first < rr[i].first) {
        std::uint64_t v = mulmod(f, prow[j].second);
        if (v != 0) out.emplace_back(prow[j].first, v);
        ++j;
      } else {
        std::uint64_t v = (rr[i].second + mulmod(f, prow[j].second)) % p;
        if (v != 0) out.emplace_back(rr[i].first, v);
        ++i, ++j;
      }
    }
    rr.swap(out);
  };
  return detail::eliminate_sparse(m.n_rows, m.n_cols, rows, axpy_rows, row_has);
}

struct ModularRank {
  int rank = 0;
  bool certified = false;
};

// Mod-p rank is a lower bound for the rational rank, so the max over several
// large random primes is reported; at least 3 agreeing primes certify it.
// Primes dividing some denominator are skipped (spec: primes must be > 2^20).
inline ModularRank rank_modular(const SparseMatrix& m,
                                const std::vector<std::uint64_t>& primes) {
  ModularRank out;
  int agree = 0;
  for (std::uint64_t p : primes) {
    if (p <= (1u << 20)) throw std::invalid_argument("rank_modular: prime too small");
    int r = rank_mod(m, p);
    if (r < 0) continue;  // denominator hit, exclude this prime
    if (r > out.rank) {
      out.rank = r;
      agree = 1;
    } else if (r == out.rank) {
      ++agree;
    }
  }
  out.certified = agree >= 3;
  return out;
}

inline const std::vector<std::uint64_t>& default_primes() {
  static const std::vector<std::uint64_t> ps = {2147483629ull, 2147483587ull,
                                                2147483563ull, 2147483549ull};
  return ps;
}

// Nullspace basis of m (vectors x with m x = 0), via RREF on the rows.
inline std::vector<std::vector<std::pair<int, Rat>>> nullspace(const SparseMatrix& m) {
  const int C = m.n_cols;
  std::vector<detail::SpRow> rows(m.n_rows);
  for (const auto& [r, c, v] : m.entries) rows[r].emplace_back(c, v);
  // forward elimination, smallest live column first
  std::vector<std::pair<int, detail::SpRow>> echelon;  // (pivot col, row)
  for (auto& row : rows) {
    detail::SpRow cur = std::move(row);
    for (auto& [pc, prow] : echelon) {
      auto it = std::lower_bound(cur.begin(), cur.end(), pc,
                                 [](const auto& q, int cc) { return q.first < cc; });
      if (it != cur.end() && it->first == pc) {
        Rat f = -it->second / prow.front().second;
        detail::axpy(cur, f, prow);
      }
    }
    if (!cur.empty()) echelon.emplace_back(cur.front().first, std::move(cur));
    std::sort(echelon.begin(), echelon.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  // back substitution to full RREF
  for (int i = static_cast<int>(echelon.size()) - 1; i >= 0; --i) {
    for (int j = 0; j < i; ++j) {
      auto& target = echelon[j].second;
      int pc = echelon[i].first;
      auto it = std::lower_bound(target.begin(), target.end(), pc,
                                 [](const auto& q, int cc) { return q.first < cc; });
      if (it != target.end() && it->first == pc) {
        Rat f = -it->second / echelon[i].second.front().second;
        detail::axpy(target, f, echelon[i].second);
      }
    }
  }
  std::vector<char> is_pivot(C, 0);
  for (auto& [pc, row] : echelon) is_pivot[pc] = 1;
  std::vector<std::vector<std::pair<int, Rat>>> basis;
  for (int f = 0; f < C; ++f) {
    if (is_pivot[f]) continue;
    std::vector<std::pair<int, Rat>> v;
    v.emplace_back(f, Rat(1));
    for (auto& [pc, row] : echelon) {
      auto it = std::lower_bound(row.begin(), row.end(), f,
                                 [](const auto& q, int cc) { return q.first < cc; });
      if (it != row.end() && it->first == f)
        v.emplace_back(pc, -it->second / row.front().second);
    }
    std::sort(v.begin(), v.end());
    basis.push_back(std::move(v));
  }
  return basis;
}

struct HomologyReport {
  int weight = 0;
  int dim_chain = 0;
  int rank_in = 0;
  int rank_out = 0;
  int betti = 0;
  bool modular = false;  // true when ranks came from the certified modular path
};

struct CompositionNonzeroError : std::runtime_error {
  CompositionNonzeroError(const std::string& what) : std::runtime_error(what) {}
};

// Homology dimension of  . --d_in--> V --d_out--> .  at V.
// d_out o d_in = 0 is checked; a violation signals a sign bug upstream and is
// reported as a distinguished error class.
inline HomologyReport homology_dim(const SparseMatrix& d_in, const SparseMatrix& d_out) {
  if (d_in.n_rows != d_out.n_cols)
    throw std::invalid_argument("homology_dim: chain space dimension mismatch");
  if (!d_out.mul(d_in).is_zero())
    throw CompositionNonzeroError("homology_dim: d o d != 0");
  HomologyReport rep;
  rep.dim_chain = d_in.n_rows;
  rep.rank_in = rank(d_in);
  rep.rank_out = rank(d_out);
  rep.betti = rep.dim_chain - rep.rank_in - rep.rank_out;
  return rep;
}

}  // namespace oplab
