#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "oplab/operads.hpp"
#include "oplab/sparse_matrix.hpp"

using namespace oplab;

namespace {

std::vector<int> id_perm(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  return p;
}

std::vector<int> random_perm(int n, std::mt19937& rng) {
  auto p = id_perm(n);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

LinComb lin(const std::string& k) { return LinComb(k); }

// Oracle for Perm composition: normal form of a permutative monomial is
// (first factor, sorted tail). Substitution + renormalization, by hand.
int perm_compose_oracle(int /*n*/, int i, int k, int m, int j) {
  auto relab_outer = [&](int x) { return x < k ? x : x + m - 1; };
  auto relab_inner = [&](int x) { return k + x - 1; };
  if (i != k) return relab_outer(i);  // first factor untouched
  return relab_inner(j);              // inner first factor leads
}

}  // namespace

TEST_CASE("the displayed four-term tree composition") {
  auto c = pl_operad().compose("2(1,3)", 2, "1(2)");
  LinComb expect;
  expect.add("2(1,3,4)", Rat(1));
  expect.add("2(1,3(4))", Rat(1));
  expect.add("2(3(1),4)", Rat(1));
  expect.add("2(3(1,4))", Rat(1));
  CHECK(c == expect);
}

TEST_CASE("tree composition respects units") {
  CHECK(pl_operad().compose("1", 1, "1(2)") == lin("1(2)"));
  CHECK(pl_operad().compose("1(2)", 2, "1") == lin("1(2)"));
  CHECK(pl_operad().compose("1(2)", 1, "1") == lin("1(2)"));
  CHECK(pl_operad().compose("2(1)", 2, "1") == lin("2(1)"));
}

TEST_CASE("number of insertion terms is |S|^children") {
  // vertex 1 of 1(2,3) has two children; inserting a 3-vertex tree gives 9
  auto c = pl_operad().compose("1(2,3)", 1, "1(2(3))");
  long long total = 0;
  for (auto& [k, v] : c.terms) total += v.get_num().get_si();
  CHECK(total == 9);
}

TEST_CASE("perm composition against the monomial oracle") {
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= n; ++k)
          for (int j = 1; j <= m; ++j) {
            auto c = perm_operad().compose(keys::perm(n, i), k, keys::perm(m, j));
            REQUIRE(c.terms.size() == 1);
            CHECK(c.terms.begin()->first ==
                  keys::perm(n + m - 1, perm_compose_oracle(n, i, k, m, j)));
          }
  // spec example: mark-1 o_1 mark-1 at arity 2 -> mark-1 of arity 3
  CHECK(perm_operad().compose(keys::perm(2, 1), 1, keys::perm(2, 1)) ==
        lin(keys::perm(3, 1)));
}

TEST_CASE("com and ass basics") {
  CHECK(com_operad().compose(keys::com(2), 2, keys::com(2)) == lin(keys::com(3)));
  CHECK(com_operad().compose(keys::com(2), 1, keys::com(2)) == lin(keys::com(3)));
  CHECK(ass_operad().compose("ass:1,2", 2, "ass:1") == lin("ass:1,2"));
  CHECK(ass_operad().compose("ass:1", 1, "ass:2,1") == lin("ass:2,1"));
  CHECK(ass_operad().compose("ass:2,1", 1, "ass:1,2") == lin("ass:3,1,2"));
}

TEST_CASE("dimension table") {
  CHECK(pl_operad().dim(7) == 117649);
  for (int n = 1; n <= 5; ++n) {
    CHECK(static_cast<long long>(pl_operad().basis(n).size()) == pl_operad().dim(n));
    CHECK(static_cast<long long>(perm_operad().basis(n).size()) == n);
    CHECK(static_cast<long long>(ass_operad().basis(n).size()) == ass_operad().dim(n));
    CHECK(com_operad().basis(n).size() == 1);
  }
}

TEST_CASE("operad axioms: sequential and parallel composition") {
  std::mt19937 rng(3);
  std::vector<const OperadImpl*> ops = {&pl_operad(), &perm_operad(), &ass_operad(),
                                        &com_operad(), &lie_operad()};
  for (const OperadImpl* op : ops) {
    for (int n = 1; n <= 3; ++n)
      for (int m = 1; m <= 3; ++m)
        for (int l = 1; l <= 2; ++l) {
          if (n + m + l > 6) continue;
          auto bn = op->basis(n), bm = op->basis(m), bl = op->basis(l);
          auto pick = [&](const std::vector<std::string>& b) {
            return b[rng() % b.size()];
          };
          for (int rep = 0; rep < 3; ++rep) {
            auto a = pick(bn), b = pick(bm), c = pick(bl);
            // sequential: (a o_i b) o_{i+j-1} c == a o_i (b o_j c)
            for (int i = 1; i <= n; ++i)
              for (int j = 1; j <= m; ++j) {
                auto lhs = compose_lin(*op, op->compose(a, i, b), i + j - 1, lin(c));
                auto rhs = compose_lin(*op, lin(a), i, op->compose(b, j, c));
                CHECK(lhs == rhs);
              }
            // parallel: (a o_i b) o_{j+m-1} c == (a o_j c) o_i b for i < j
            for (int i = 1; i <= n; ++i)
              for (int j = i + 1; j <= n; ++j) {
                auto lhs = compose_lin(*op, op->compose(a, i, b), j + m - 1, lin(c));
                auto rhs = compose_lin(*op, op->compose(a, j, c), i, lin(b));
                CHECK(lhs == rhs);
              }
          }
        }
  }
}

TEST_CASE("unit is a two-sided identity") {
  std::vector<const OperadImpl*> ops = {&pl_operad(), &perm_operad(), &ass_operad(),
                                        &com_operad()};
  for (const OperadImpl* op : ops) {
    CHECK(op->basis(1).size() == 1);
    auto u = op->unit_key();
    for (auto& k : op->basis(3)) {
      CHECK(op->compose(u, 1, k) == lin(k));
      for (int i = 1; i <= 3; ++i) CHECK(op->compose(k, i, u) == lin(k));
    }
  }
}

TEST_CASE("equivariance of composition") {
  std::mt19937 rng(17);
  std::vector<const OperadImpl*> ops = {&pl_operad(), &perm_operad(), &ass_operad(),
                                        &com_operad()};
  for (const OperadImpl* op : ops) {
    for (int n = 2; n <= 3; ++n)
      for (int m = 1; m <= 3; ++m) {
        auto bn = op->basis(n), bm = op->basis(m);
        for (int rep = 0; rep < 4; ++rep) {
          auto mu = bn[rng() % bn.size()];
          auto nu = bm[rng() % bm.size()];
          auto sigma = random_perm(n, rng);
          auto tau = random_perm(m, rng);
          int i = 1 + static_cast<int>(rng() % n);
          auto [smu, s1] = op->sym_action(sigma, mu);
          auto [tnu, s2] = op->sym_action(tau, nu);
          LinComb lhs = op->compose(smu, sigma[i - 1], tnu);
          lhs *= Rat(s1 * s2);
          auto rho = compose_perm(sigma, i, tau);
          LinComb rhs;
          for (auto& [k, c] : op->compose(mu, i, nu).terms) {
            auto [k2, s] = op->sym_action(rho, k);
            rhs.add(k2, c * s);
          }
          CHECK(lhs == rhs);
        }
      }
  }
}

TEST_CASE("lie basis dimensions and independence") {
  CHECK(lie_basis(1).size() == 1);
  CHECK(lie_basis(2).size() == 1);
  CHECK(lie_basis(3).size() == 2);
  CHECK(lie_basis(4).size() == 6);
  CHECK(lie_basis(5).size() == 24);

  LinComb bracket = lie_basis(2)[0];
  LinComb expect;
  expect.add("1(2)", Rat(1));
  expect.add("2(1)", Rat(-1));
  CHECK(bracket == expect);

  // independence by rank, against the rooted-tree coordinates of PL(n)
  for (int n = 2; n <= 5; ++n) {
    auto& basis = lie_basis(n);
    std::map<std::string, int> col;
    for (auto& v : basis)
      for (auto& [k, c] : v.terms) col.try_emplace(k, static_cast<int>(col.size()));
    SparseMatrix m(static_cast<int>(basis.size()), static_cast<int>(col.size()));
    for (int r = 0; r < static_cast<int>(basis.size()); ++r)
      for (auto& [k, c] : basis[r].terms) m.add(r, col[k], c);
    m.normalize();
    CHECK(rank(m) == static_cast<int>(basis.size()));
  }
}

TEST_CASE("lie elements die under the projection to com") {
  // the projection sends every tree to the single com generator; on lie
  // brackets the coefficients cancel pairwise
  for (int n = 2; n <= 5; ++n)
    for (auto& v : lie_basis(n)) {
      Rat total(0);
      for (auto& [k, c] : v.terms) total += c;
      CHECK(total == 0);
    }
}

TEST_CASE("lie operad composes inside itself") {
  auto c = lie_operad().compose("lie:2:0", 1, "lie:2:0");
  CHECK(!c.is_zero());
  auto c2 = lie_operad().compose("lie:2:0", 2, "lie:2:0");
  CHECK(!c2.is_zero());
  // brackets of brackets stay in the Lie suboperad of PL
  LinComb left = compose_lin(pl_operad(), lie_basis(2)[0], 1, lie_basis(2)[0]);
  detail::SpanBasis span;
  for (auto& v : lie_basis(3)) span.insert(v);
  CHECK(span.contains(left));
}

TEST_CASE("hadamard product dimensions and examples") {
  auto plperm = hadamard(pl_operad(), perm_operad());
  CHECK(plperm.dim(3) == 27);  // n * n^(n-1)
  CHECK(plperm.basis(3).size() == 27);
  auto assperm = hadamard(ass_operad(), perm_operad());
  CHECK(assperm.dim(3) == 18);
  // q = Com gives an isomorphic copy
  auto plcom = hadamard(pl_operad(), com_operad());
  CHECK(plcom.dim(4) == pl_operad().dim(4));
  auto lhs = plcom.compose("2(1,3)|" + keys::com(3), 2, "1(2)|" + keys::com(2));
  auto rhs = pl_operad().compose("2(1,3)", 2, "1(2)");
  LinComb strip;
  for (auto& [k, c] : lhs.terms) strip.add(k.substr(0, k.find('|')), c);
  CHECK(strip == rhs);
}

TEST_CASE("hadamard with perm marks one vertex") {
  auto v = hadamard(pl_operad(), perm_operad());
  std::set<std::string> b;
  for (auto& k : v.basis(2)) b.insert(k);
  CHECK(b.size() == 4);
  CHECK(b.count("1(2)|" + keys::perm(2, 1)) == 1);
  CHECK(b.count("1(2)|" + keys::perm(2, 2)) == 1);
}

TEST_CASE("suspension sign table makes the sign operad associative") {
  const auto& s = suspension();
  // graded sequential axiom (no sign) and parallel axiom with Koszul sign
  for (int n = 1; n <= 5; ++n)
    for (int m = 1; m <= 5; ++m)
      for (int l = 1; l <= 5; ++l) {
        if (n + m + l > 9) continue;
        for (int i = 1; i <= n; ++i) {
          for (int j = 1; j <= m; ++j)
            CHECK(s.sign(n, i, m) * s.sign(n + m - 1, i + j - 1, l) ==
                  s.sign(m, j, l) * s.sign(n, i, m + l - 1));
          for (int j = i + 1; j <= n; ++j) {
            int koszul = ((1 - m) * (1 - l)) % 2 == 0 ? 1 : -1;
            CHECK(s.sign(n, i, m) * s.sign(n + m - 1, j + m - 1, l) ==
                  koszul * s.sign(n, j, l) * s.sign(n + l - 1, i, m));
          }
        }
      }
}

TEST_CASE("cooperad decomposition: counit slots") {
  // split (n, 1) with the unit in the second slot returns key (x) unit, +1
  for (auto& key : perm_operad().basis(3)) {
    auto d = cooperad_decompose(perm_operad(), suspension(), key, 2, 3, 1);
    CHECK(d == LinComb(key + "|" + keys::perm(1, 1)));
  }
  for (auto& key : ass_operad().basis(3)) {
    auto d = cooperad_decompose(ass_operad(), suspension(), key, 1, 3, 1);
    CHECK(d == LinComb(key + "|" + keys::ass({1})));
  }
}

TEST_CASE("cooperad decomposition of the dual of the lie operad") {
  // source Lie has dual operad Com; the (2,2) components transpose the
  // one-dimensional Com multiplication with the suspension sign
  auto d1 = cooperad_decompose(com_operad(), suspension(), keys::com(3), 1, 2, 2);
  auto d2 = cooperad_decompose(com_operad(), suspension(), keys::com(3), 2, 2, 2);
  LinComb pair(keys::com(2) + "|" + keys::com(2));
  CHECK(d1 == pair);
  CHECK(d2 == pair * Rat(-1));
}
