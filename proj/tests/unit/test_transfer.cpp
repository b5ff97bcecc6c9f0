#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "zrplab/transfer.hpp"

using namespace zrp;

namespace {

// brute force: every L-tuple of arrays with entries in [0, k_a]
std::size_t brute_sector_count(int L, const MultiIndex& k) {
  std::size_t n = k.size(), count = 0;
  std::vector<int> digits(static_cast<std::size_t>(L) * n, 0);
  while (true) {
    MultiIndex tot(n);
    for (std::size_t s = 0; s < static_cast<std::size_t>(L); ++s)
      for (std::size_t a = 0; a < n; ++a) tot[a] += digits[s * n + a];
    if (tot == k) ++count;
    std::size_t p = 0;
    while (p < digits.size() && digits[p] == k[p % n]) digits[p++] = 0;
    if (p == digits.size()) break;
    ++digits[p];
  }
  return count;
}

bool is_zero_op(const SparseOperator& a) { return a.mat.nnz() == 0; }

SparseOperator cyclic_shift(const BasisPtr& b) {
  SparseOperator C(b, b);
  for (std::size_t j = 0; j < b->size(); ++j) {
    const State& s = (*b)[j];
    State r;
    r.push_back(s.back());
    r.insert(r.end(), s.begin(), s.end() - 1);
    C.mat.set(b->at(r), j, 1);
  }
  return C;
}

}  // namespace

TEST_CASE("sector enumeration") {
  // two particles of distinct species on two unbounded sites
  CHECK(enumerate_sector(2, MultiIndex{1, 1}).size() == 4);
  CHECK(brute_sector_count(2, MultiIndex{1, 1}) == 4);
  for (int L = 1; L <= 3; ++L)
    for (auto k : {MultiIndex{0, 0}, MultiIndex{1, 1}, MultiIndex{2, 1}, MultiIndex{1, 0, 2}})
      CHECK(enumerate_sector(L, k).size() == brute_sector_count(L, k));
  auto vac = enumerate_sector(3, MultiIndex{0, 0});
  REQUIRE(vac.size() == 1);
  CHECK(total_content(vac[0]).is_zero());
  CHECK(enumerate_sector_V({1, 1}, MultiIndex{2, 1}).empty());
  CHECK(enumerate_sector_V({1, 2}, MultiIndex{2, 1}).size() == 2);
  CHECK(product_states({1, 2}, 1).size() == 6);
  CHECK(is_basic(MultiIndex{1, 2}));
  CHECK_FALSE(is_basic(MultiIndex{0, 2}));
}

TEST_CASE("single-site periodic T is a partial trace of one S") {
  Rational q(2, 7), z(3, 5), w(4, 9);
  for (int l = 1; l <= 2; ++l)
    for (int m = 1; m <= 3; ++m) {
      ChainV c{{m}, {w}, 2, q};
      SFamily S(l, m, q, 2);
      auto Sz = S.at(z / w);
      for (auto& k : enumerate_Bl(2, m)) {
        auto T = periodic_T(l, z, c, k);
        REQUIRE(T.dom->size() == 1);
        Rational expect = 0;
        for (auto& g : enumerate_Bl(2, l)) expect += Sz.entry({g, k}, {g, k});
        CHECK(T.mat.get(0, 0) == expect);
      }
    }
}

TEST_CASE("periodic T: Markov regime, commutativity, difference property") {
  Rational q(1, 3);
  ChainV c{{1, 2, 2}, {pow(q, 1), pow(q, 2), pow(q, 2)}, 2, q};
  MultiIndex k{2, 2, 1};
  auto T1 = periodic_T(1, pow(q, 1), c, k);
  auto rep = markov_gate(T1, GateKind::discrete);
  CHECK_MESSAGE(rep.pass, rep.witness);
  CHECK(rep.checked == T1.dom->size());

  // l = 2 exceeds min m_i: not stochastic at this point
  CHECK_FALSE(markov_gate(periodic_T(2, pow(q, 2), c, k), GateKind::discrete).pass);

  std::mt19937_64 rng(3);
  ChainV g{{1, 2, 1}, {}, 1, q};
  for (int t = 0; t < 3; ++t) g.w.push_back(random_rational(rng, Rational(1, 5), Rational(5)));
  MultiIndex kk{2, 2};
  Rational z1 = random_rational(rng, Rational(1, 5), Rational(5)), z2 = random_rational(rng, Rational(1, 5), Rational(5));
  CHECK(is_zero_op(commutator(periodic_T(1, z1, g, kk), periodic_T(2, z2, g, kk))));
  CHECK(is_zero_op(commutator(periodic_T(1, z1, g, kk), periodic_T(1, z2, g, kk))));

  Rational a = random_rational(rng, Rational(1, 5), Rational(5));
  ChainV ga = g;
  for (auto& w : ga.w) w *= a;
  CHECK(periodic_T(2, a * z1, ga, kk).mat == periodic_T(2, z1, g, kk).mat);
}

TEST_CASE("periodic T derivative matches interpolation in z") {
  Rational q(2, 5);
  ChainV c{{1, 2}, {Rational(1), Rational(3, 2)}, 1, q};
  MultiIndex k{1, 2};
  Rational z0(5, 7);
  auto D = periodic_T_derivative(1, z0, c, k);
  // independent of the product rule: central difference of the full row transfer
  Rational h(1, 1000000);
  auto plus = periodic_T(1, z0 + h, c, k), minus = periodic_T(1, z0 - h, c, k);
  for (std::size_t j = 0; j < D.dom->size(); ++j)
    for (std::size_t i = 0; i < D.cod->size(); ++i) {
      Rational fd = (plus.mat.get(i, j) - minus.mat.get(i, j)) / (2 * h);
      CHECK(abs(to_double(fd - D.mat.get(i, j))) < 1e-6);
    }
}

TEST_CASE("stochastic Yang system at L=2") {
  Rational q(1, 4);
  std::vector<int> m{1, 2};
  ChainV c{m, {pow(q, 1), pow(q, 2)}, 1, q};
  MultiIndex k{2, 1};
  auto T1 = periodic_T(1, pow(q, 1), c, k);
  auto T2 = periodic_T(2, pow(q, 2), c, k);
  auto rep = markov_gate(T1, GateKind::discrete);
  CHECK_MESSAGE(rep.pass, rep.witness);
  CHECK(is_zero_op(commutator(T1, T2)));
}

TEST_CASE("mixed T: Markov regime and commutativity") {
  Rational q(1, 3);
  ChainV c{{2, 1, 2}, {pow(q, 2), pow(q, 1), pow(q, 2)}, 1, q};
  for (int i = 1; i <= 2; ++i) {
    auto T = mixed_T(i, 1, pow(q, 1), c);
    auto rep = markov_gate(T, GateKind::discrete);
    CHECK_MESSAGE(rep.pass, rep.witness);
  }
  std::mt19937_64 rng(8);
  ChainV g{{1, 2}, {Rational(2, 3), Rational(5, 4)}, 1, q};
  for (int i = 1; i <= 2; ++i) {
    Rational z1 = random_rational(rng, Rational(1, 5), Rational(5)), z2 = random_rational(rng, Rational(1, 5), Rational(5));
    CHECK(is_zero_op(commutator(mixed_T(i, 1, z1, g), mixed_T(i, 2, z2, g))));
  }
  CHECK_THROWS(mixed_T(3, 1, q, g));
}

TEST_CASE("script T: identity, shift, regime, commutativity") {
  Rational q(1, 3), lam(1, 2);
  std::vector<Rational> mu{Rational(1, 5), Rational(1, 7), Rational(2, 7)};
  MultiIndex k{1, 2};
  auto I = periodic_scriptT(Rational(1), mu, q, k);
  CHECK(I.mat == SparseMatrix::identity(I.dom->size()));
  std::vector<Rational> hom(3, Rational(2, 9));
  auto C = periodic_scriptT(Rational(2, 9), hom, q, k);
  CHECK(C.mat == cyclic_shift(C.dom).mat);

  auto T = periodic_scriptT(lam, mu, q, k);
  auto rep = markov_gate(T, GateKind::discrete);
  CHECK_MESSAGE(rep.pass, rep.witness);
  // epsilon = -1 regime: 1 < lambda < mu_i, q > 1
  auto Tm = periodic_scriptT(Rational(2), {Rational(5), Rational(7), Rational(7, 2)}, Rational(3), k);
  rep = markov_gate(Tm, GateKind::discrete);
  CHECK_MESSAGE(rep.pass, rep.witness);
  // lambda below some mu_i leaves the regime
  CHECK_FALSE(markov_gate(periodic_scriptT(Rational(1, 6), mu, q, k), GateKind::discrete).pass);

  std::mt19937_64 rng(12);
  for (int t = 0; t < 2; ++t) {
    Rational l1 = random_rational(rng, Rational(1, 5), Rational(5)), l2 = random_rational(rng, Rational(1, 5), Rational(5));
    CHECK(is_zero_op(commutator(periodic_scriptT(l1, mu, q, k), periodic_scriptT(l2, mu, q, k))));
  }
}

TEST_CASE("mixed script T: vacuum, regime, commutativity") {
  Rational q(1, 3);
  std::vector<Rational> mu{Rational(1, 5), Rational(1, 7), Rational(2, 7)};
  MultiIndex bound{2, 1};
  auto T = mixed_scriptT(Rational(1, 2), mu, q, bound);
  State vac(3, MultiIndex(2));
  CHECK(T.entry(vac, vac) == 1);
  auto rep = markov_gate(T, GateKind::discrete);
  CHECK_MESSAGE(rep.pass, rep.witness);
  CHECK(mixed_scriptT(Rational(1), mu, q, bound).mat == SparseMatrix::identity(T.dom->size()));
  std::mt19937_64 rng(21);
  Rational l1 = random_rational(rng, Rational(1, 5), Rational(5)), l2 = random_rational(rng, Rational(1, 5), Rational(5));
  CHECK(is_zero_op(commutator(mixed_scriptT(l1, mu, q, bound), mixed_scriptT(l2, mu, q, bound))));
}

TEST_CASE("local Hamiltonian terms") {
  HamiltonianParams p{2, Rational(1, 3), Rational(1, 5), 1};
  std::vector<LocalTerm> out;
  h_local(HKind::r, p)(MultiIndex{0, 0}, MultiIndex{2, 1}, out);
  CHECK(out.empty());

  // mu = 0: single-particle jumps reduce to q-boson rates
  HamiltonianParams z{3, Rational(2, 5), Rational(0), 1};
  MultiIndex a{2, 1, 3};
  out.clear();
  h_local(HKind::r, z)(a, MultiIndex{0, 1, 0}, out);
  for (std::size_t s = 0; s < 3; ++s) {
    MultiIndex e = MultiIndex::unit(3, s);
    int below = 0;
    for (std::size_t t = 0; t < s; ++t) below += a[t];
    Rational expect = pow(z.q, below) * (1 - pow(z.q, a[s])) / (1 - z.q);
    bool found = false;
    for (auto& t : out)
      if (t.out1 == a - e && t.out2 == MultiIndex{0, 1, 0} + e) {
        CHECK(t.value == expect);
        found = true;
      }
    CHECK(found);
  }

  // mu = q = 0 in h_l: larger species leave first
  HamiltonianParams pr{3, Rational(0), Rational(0), 1};
  for (auto& b : bounded_states(1, MultiIndex{2, 1, 2})) {
    out.clear();
    h_local(HKind::l, pr)(MultiIndex{0, 0, 0}, b[0], out);
    for (auto& g : enumerate_dominated(b[0])) {
      if (g.is_zero()) continue;
      bool allowed = true;
      for (std::size_t s = 0; s < 3; ++s)
        if (g[s] > 0)
          for (std::size_t t = s + 1; t < 3; ++t)
            if (g[t] != b[0][t]) allowed = false;
      bool present = false;
      for (auto& t : out)
        if (t.out2 == b[0] - g) present = true;
      CHECK(present == allowed);
    }
  }

  // h~ is h_r without its dependence on the right neighbour
  std::vector<LocalTerm> r, t;
  h_local(HKind::r, p)(MultiIndex{2, 1}, MultiIndex{1, 1}, r);
  h_local(HKind::tilde, p)(MultiIndex{2, 1}, MultiIndex{}, t);
  REQUIRE(r.size() == t.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(r[i].out1 == t[i].out1);
    CHECK(r[i].value == t[i].value);
  }
  HamiltonianParams pole{1, Rational(1, 2), Rational(1), 1};
  out.clear();
  CHECK_THROWS_AS(h_local(HKind::r, pole)(MultiIndex{1}, MultiIndex{0}, out), PoleError);
}

TEST_CASE("assembled Hamiltonians: Markov, commuting, parity") {
  MultiIndex k{1, 2};
  auto basis = make_basis(enumerate_sector(3, k));
  for (int sign : {1, -1}) {
    HamiltonianParams p{2, sign == 1 ? Rational(1, 3) : Rational(3), sign == 1 ? Rational(1, 5) : Rational(5), sign};
    auto Hr = assemble_H(HKind::r, p, basis), Hl = assemble_H(HKind::l, p, basis);
    for (auto* H : {&Hr, &Hl}) {
      auto rep = markov_gate(*H, GateKind::continuous);
      CHECK_MESSAGE(rep.pass, rep.witness);
    }
    CHECK(is_zero_op(commutator(Hr, Hl)));
  }
  // parity: H(a,b,-eps,1/q,1/mu) = P H(mu b, mu a, eps, q, mu) P
  Rational q(2, 7), mu(3, 11), a(5, 3), b(2, 9);
  HamiltonianParams p{2, q, mu, 1}, pinv{2, 1 / q, 1 / mu, -1};
  auto P = parity(basis);
  auto lhs = superposed_H(a, b, pinv, basis);
  auto rhs = compose(P, compose(superposed_H(mu * b, mu * a, p, basis), P));
  CHECK(lhs.mat == rhs.mat);

  auto tb = make_basis(truncation_states(3, MultiIndex{2, 1}));
  auto Ht = assemble_H(HKind::tilde, HamiltonianParams{2, Rational(1, 3), Rational(1, 5), 1}, tb);
  auto rep = markov_gate(Ht, GateKind::continuous);
  CHECK_MESSAGE(rep.pass, rep.witness);
}

TEST_CASE("Hamiltonians equal logarithmic derivatives of transfer matrices") {
  struct Case {
    int L;
    MultiIndex k;
  };
  for (auto& cs : {Case{2, MultiIndex{2}}, Case{3, MultiIndex{2}}, Case{2, MultiIndex{1, 1}}, Case{3, MultiIndex{1, 1}}}) {
    int n = static_cast<int>(cs.k.size());
    for (int sign : {1, -1}) {
      HamiltonianParams p{n, sign == 1 ? Rational(1, 3) : Rational(3), sign == 1 ? Rational(2, 7) : Rational(7, 2), sign};
      auto basis = make_basis(enumerate_sector(cs.L, cs.k));
      CHECK(H_from_transfer(HKind::r, p, cs.L, cs.k).mat == assemble_H(HKind::r, p, basis).mat);
      CHECK(H_from_transfer(HKind::l, p, cs.L, cs.k).mat == assemble_H(HKind::l, p, basis).mat);
      auto tb = make_basis(truncation_states(cs.L, cs.k));
      CHECK(H_from_transfer(HKind::tilde, p, cs.L, cs.k).mat == assemble_H(HKind::tilde, p, tb).mat);
    }
  }
  auto id = make_basis(enumerate_sector(1, MultiIndex{1}));
  auto F = [&](const Rational& x) {
    SparseOperator o(id, id);
    o.mat.set(0, 0, pow(x, 5));
    return o;
  };
  CHECK_THROWS(interpolated_derivative(F, 0, 2, Rational(1)));
}

TEST_CASE("Hamiltonian from S(m,m)") {
  Rational q(1, 3);
  // m = 1: n-species ASEP with r_ij : r_ji = 1 : q^2 for i < j
  int n = 2;
  auto h = h_from_S(1, q, n, 1);
  for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i)
    for (std::size_t j = i + 1; j <= static_cast<std::size_t>(n); ++j) {
      MultiIndex ei = MultiIndex::unit(3, i), ej = MultiIndex::unit(3, j);
      Rational rij = h.entry({ej, ei}, {ei, ej}), rji = h.entry({ei, ej}, {ej, ei});
      CHECK(sgn(rij) > 0);
      CHECK(rji == q * q * rij);
    }
  MultiIndex k{1, 1, 1};
  auto H1 = assemble_H_S(1, q, n, 1, 3, k);
  auto rep = markov_gate(H1, GateKind::continuous);
  CHECK_MESSAGE(rep.pass, rep.witness);

  // m = 2: columns sum to zero but no global sign makes off-diagonals non-negative
  for (int sign : {1, -1}) {
    auto h2 = h_from_S(2, q, 1, sign);
    auto r2 = markov_gate(h2, GateKind::continuous);
    CHECK_FALSE(r2.pass);
    CHECK(r2.witness.find("negative") != std::string::npos);
    for (auto& s : h2.mat.column_sums()) CHECK(s == 0);
  }

  // Baxter: C^{-1} T'(1) = H(m) with T(m, z | m..m, 1..1)
  for (int m : {1, 2}) {
    ChainV c{{m, m, m}, {Rational(1), Rational(1), Rational(1)}, 1, q};
    MultiIndex kk{m + 1, 2 * m - 1};
    auto T = periodic_T(m, Rational(1), c, kk);
    CHECK(T.mat == cyclic_shift(T.dom).mat);
    auto D = periodic_T_derivative(m, Rational(1), c, kk);
    CHECK(T.mat.transpose() * D.mat == assemble_H_S(m, q, 1, 1, 3, kk).mat);
  }
}
