#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "zrplab/oracles.hpp"
#include "zrplab/mpf.hpp"
#include "zrplab/poly.hpp"
#include "zrplab/qkit.hpp"
#include "zrplab/stationary.hpp"
#include "zrplab/stoch.hpp"
#include "zrplab/transfer.hpp"

using namespace zrp;

namespace {

SparseMatrix mpow(const SparseMatrix& M, int e) {
  SparseMatrix r = SparseMatrix::identity(M.cols());
  for (int i = 0; i < e; ++i) r = r * M;
  return r;
}

// Terminating q-exponential series for (zA)_inf (sign = -1) or 1/(zA)_inf.
SparseMatrix poch_series(const SparseMatrix& A, const Rational& z, const Rational& q, bool inverse) {
  SparseMatrix sum = SparseMatrix::identity(A.cols()), P = sum;
  for (int j = 1; j <= static_cast<int>(A.cols()); ++j) {
    P = P * A;
    Rational c = pow(z, j) / qpoch(q, q, j);
    if (!inverse) c *= (j % 2 ? -1 : 1) * pow(q, j * (j - 1) / 2);
    sum = sum + P * c;
  }
  return sum;
}

SparseMatrix restrict_diag(const SparseMatrix& M, const std::vector<char>& keep) {
  SparseMatrix r(M.rows(), M.cols());
  for (std::size_t j = 0; j < M.cols(); ++j)
    if (keep[j])
      for (auto& [i, x] : M.column(j))
        if (keep[i]) r.set(i, j, x);
  return r;
}

bool ratio_constant(const std::map<State, Rational>& a, const std::map<State, Rational>& b) {
  if (a.size() != b.size()) return false;
  Rational ratio = 0;
  for (auto& [s, x] : a) {
    auto it = b.find(s);
    if (it == b.end()) return false;
    Rational r = x / it->second;
    if (is_zero(ratio)) ratio = r;
    if (r != ratio) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("q-boson relations on the truncation") {
  Rational q(2, 7);
  const int N = 6;
  auto b = qboson(QBoson::b, N, q), c = qboson(QBoson::c, N, q), k = qboson(QBoson::k, N, q);
  auto I = SparseMatrix::identity(N + 1);
  CHECK(b * c == I - k);
  SparseMatrix cb = c * b, rhs = I - k * q;
  for (int m = 0; m < N; ++m)
    for (int r = 0; r <= N; ++r) CHECK(cb.get(static_cast<std::size_t>(r), static_cast<std::size_t>(m)) ==
                                       rhs.get(static_cast<std::size_t>(r), static_cast<std::size_t>(m)));
  // the cutoff column is where truncation loses b
  CHECK(cb.get(N, N) == 0);
  CHECK(c.column(0).empty());
  CHECK((k * c) == (c * k) * (1 / q));
  CHECK_THROWS(qboson(QBoson::b, 0, q));
}

TEST_CASE("traces of q-boson monomials") {
  Rational q(1, 3);
  const int N = 7;
  auto b = qboson(QBoson::b, N, q), k = qboson(QBoson::k, N, q);
  for (int r = 1; r <= 3; ++r) {
    FockOperator kr{1, N, mpow(k, r)};
    CHECK(trace(kr) == (1 - pow(q, r * (N + 1))) / (1 - pow(q, r)));
  }
  CHECK(trace(FockOperator{1, N, b}) == 0);
  for (int s = 0; s <= 2; ++s)
    for (int r = 1; r <= 3; ++r) CHECK(trace(FockOperator{1, N, mpow(k, s) * mpow(b, r)}) == 0);
  // a single trace factor per Fock copy on a product space
  auto k3 = qboson(QBoson::k, 3, q);
  FockOperator kk = embed(k3, 0, 2, 3) * embed(k3, 1, 2, 3);
  CHECK_THROWS(embed(k, 0, 2, 3));
  CHECK(trace(kk) == pow((1 - pow(q, 4)) / (1 - q), 2));
}

TEST_CASE("K operators") {
  Rational q(3, 8);
  const int N = 5;
  CHECK(K_op(MultiIndex{0, 0, 0}, N, q).mat == SparseMatrix::identity(36));
  auto c = qboson(QBoson::c, N, q), k = qboson(QBoson::k, N, q);
  CHECK(K_op(MultiIndex{2, 1}, N, q).mat == k * mpow(c, 2));
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> d(0, 2);
  for (int t = 0; t < 6; ++t) {
    MultiIndex a{d(rng), d(rng), d(rng)}, bb{d(rng), d(rng), d(rng)};
    // k and c act exactly on the truncation, so this holds on every entry
    CHECK((K_op(a, N, q) * K_op(bb, N, q)).mat == (K_op(a + bb, N, q) * pow(q, phi_exp(a, bb))).mat);
  }
}

TEST_CASE("factor layout") {
  CHECK(factor_count(3) == 3);
  CHECK(factor_position(1, 1) == 0);
  CHECK(factor_position(1, 2) == 1);
  CHECK(factor_position(2, 2) == 2);
  CHECK(factor_position(1, 3) == 3);
  CHECK_THROWS(factor_position(3, 2));
  CHECK(occupations(1 * 16 + 2 * 4 + 3, 3, 3) == std::vector<int>{1, 2, 3});
}

TEST_CASE("two species operators in closed form") {
  Rational q(1, 4), z(5, 3);
  const int N = 6;
  auto b = qboson(QBoson::b, N, q), c = qboson(QBoson::c, N, q), k = qboson(QBoson::k, N, q);
  // sum_l (z)_l z^-l / (q)_l b^l
  SparseMatrix Z00(N + 1, N + 1);
  for (int l = 0; l <= N; ++l) Z00 = Z00 + mpow(b, l) * (qpoch(z, q, l) * pow(z, -l) / qpoch(q, q, l));
  CHECK(Z_closed(MultiIndex{0, 0}, z, N, q).mat == Z00);
  CHECK(Z_recursive(MultiIndex{0, 0}, z, N, q).mat == Z00);
  CHECK(Z00 == poch_series(b, Rational(1), q, false) * poch_series(b, 1 / z, q, true));
  for (auto& a : std::vector<MultiIndex>{{1, 0}, {0, 2}, {2, 1}}) {
    Rational g = pow(z, -a.weight()) * qpoch(z, q, a.weight()) / (qpoch(q, q, a[0]) * qpoch(q, q, a[1]));
    CHECK(X_op(a, z, N, q).mat == Z00 * mpow(k, a[1]) * mpow(c, a[0]) * g);
  }
  CHECK(Z_recursive(MultiIndex{4}, z, N, q).mat == SparseMatrix::identity(1));
}

TEST_CASE("three species vacuum operator in closed form") {
  Rational q(2, 5), z(3, 2);
  const int N = 3;
  auto b = qboson(QBoson::b, N, q), c = qboson(QBoson::c, N, q), k = qboson(QBoson::k, N, q);
  auto I = SparseMatrix::identity(N + 1);
  SparseMatrix cb1 = c.kron(b).kron(I), k1b = k.kron(I).kron(b);
  SparseMatrix Z00 = poch_series(b, Rational(1), q, false) * poch_series(b, 1 / z, q, true);
  // V_2(1) V_2(z)^{-1}, inverse taken factor by factor in reverse order
  SparseMatrix Y3 = poch_series(cb1, Rational(1), q, false) * poch_series(k1b, Rational(1), q, false) *
                    poch_series(k1b, 1 / z, q, true) * poch_series(cb1, 1 / z, q, true);
  SparseMatrix Z000 = Z00.kron(I).kron(I) * Y3;
  CHECK(Z_closed(MultiIndex{0, 0, 0}, z, N, q).mat == Z000);
  MultiIndex a{1, 2, 1};
  CHECK(Z_closed(a, z, N, q).mat == Z000 * I.kron(K_op(a, N, q).mat));
}

TEST_CASE("closed and recursive constructions agree") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 3; ++t) {
    Rational q = test::unit_rational(rng), z = 1 + test::unit_rational(rng);
    for (auto& a : std::vector<MultiIndex>{{0, 0}, {1, 2}, {3, 0}})
      CHECK(Z_closed(a, z, 5, q).mat == Z_recursive(a, z, 5, q).mat);
    for (auto& a : std::vector<MultiIndex>{{0, 0, 0}, {1, 0, 1}, {0, 2, 1}})
      CHECK(Z_closed(a, z, 3, q).mat == Z_recursive(a, z, 3, q).mat);
  }
  CHECK(Z_closed(MultiIndex{1, 1, 0, 1}, Rational(3), 1, Rational(1, 2)).mat ==
        Z_recursive(MultiIndex{1, 1, 0, 1}, Rational(3), 1, Rational(1, 2)).mat);
}

TEST_CASE("vacuum operators commute") {
  Rational q(1, 3), mu(4, 3), lam(7, 5);
  const int N = 6;
  auto A = Z_closed(MultiIndex{0, 0}, mu, N, q), B = Z_closed(MultiIndex{0, 0}, lam, N, q);
  CHECK((A * B).mat == (B * A).mat);
  ZFOptions o;
  o.n = 3;
  o.q = q;
  o.lambda = lam;
  o.mu = mu;
  o.N = 4;
  o.bound = 0;
  auto rep = zf_check(o);
  CHECK_MESSAGE(rep.pass, rep.witness);
  CHECK(rep.checked > 0);
}

TEST_CASE("ZF algebra on protected entries") {
  std::mt19937_64 rng(23);
  for (int n : {2, 3})
    for (int t = 0; t < 3; ++t) {
      ZFOptions o;
      o.n = n;
      o.q = test::unit_rational(rng);
      o.mu = random_rational(rng, Rational(1, 20), Rational(1, 3));
      o.lambda = random_rational(rng, Rational(1, 2), Rational(9, 10));
      o.bound = 2;
      o.N = 6;
      for (ZFForm f : {ZFForm::Z, ZFForm::X}) {
        o.form = f;
        auto rep = zf_check(o);
        INFO("n=", n, " t=", t, " ", rep.check);
        CHECK_MESSAGE(rep.pass, rep.witness);
        CHECK(rep.checked > 0);
      }
    }
  ZFOptions bad;
  bad.n = 3;
  bad.N = 3;
  bad.bound = 4;
  bad.q = Rational(1, 2);
  bad.mu = Rational(1, 5);
  bad.lambda = Rational(1, 2);
  CHECK_THROWS(zf_check(bad));
}

TEST_CASE("truncation loss is confined to unprotected entries") {
  // One exchange relation assembled by hand on the full truncated matrices.
  Rational q(1, 3), mu(1, 5), lam(3, 4);
  const int N = 5, bound = 1;
  MultiIndex a{1, 0}, b{0, 1};
  SparseMatrix lhs = (X_op(a, mu, N, q) * X_op(b, lam, N, q)).mat;
  SparseMatrix rhs(N + 1, N + 1);
  for (auto& g : enumerate_dominated(a)) {
    MultiIndex d = a + b - g;
    rhs = rhs + (X_op(g, lam, N, q) * X_op(d, mu, N, q)).mat * phi_weight(b, d, PhiParams{q, lam, mu});
  }
  int M = protected_level(2, N, bound);
  CHECK(M == N - bound);
  std::vector<char> keep(N + 1);
  for (int m = 0; m <= N; ++m) keep[static_cast<std::size_t>(m)] = m <= M;
  CHECK(restrict_diag(lhs, keep) == restrict_diag(rhs, keep));
  CHECK_FALSE(lhs == rhs);
}

TEST_CASE("hat relation") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 2; ++t) {
    Rational q = test::unit_rational(rng), mu = random_rational(rng, Rational(1, 20), Rational(1, 3));
    auto rep = hat_check(2, mu, q, 6, 2);
    CHECK_MESSAGE(rep.pass, rep.witness);
    CHECK(rep.checked > 0);
  }
  auto rep3 = hat_check(3, Rational(1, 4), Rational(1, 3), 4, 1);
  CHECK_MESSAGE(rep3.pass, rep3.witness);
}

TEST_CASE("generating function") {
  Rational q(2, 7), lam(3, 5), x(1, 3), y(2, 9);
  const int N = 5;
  for (int D : {0, 2, 3}) {
    auto A = gen_function_A(lam, {x, y}, q, N, D);
    auto C = gen_function_A_closed_n2(lam, x, y, q, N, D);
    CHECK(A.mat == C.mat);
  }
  CHECK(gen_function_A(lam, {Rational(0), Rational(0)}, q, N, 3).mat == X_op(MultiIndex{0, 0}, lam, N, q).mat);
  for (int n : {2, 3}) {
    auto rep = gen_function_commute(n, Rational(1, 5), lam, q, n == 2 ? 6 : 5, 2);
    CHECK_MESSAGE(rep.pass, rep.witness);
    CHECK(rep.checked > 0);
  }
}

TEST_CASE("matrix product traces match the null-space solution") {
  std::mt19937_64 rng(41);
  Rational q(1, 3);
  for (std::size_t L : {2u, 3u}) {
    Mu mu;
    for (std::size_t i = 0; i < L; ++i) mu.push_back(random_rational(rng, Rational(1, 20), Rational(1, 3)));
    auto v = stationary_scriptT(Rational(3, 5), mu, q, MultiIndex{1, 1});
    const int N = 24;
    std::vector<double> ratios;
    double worst = 0, worst_gap = 0;
    Rational ref_v = v.at(v.basis->states()[0]);
    MpfValue ref = stationary_mpf(v.basis->states()[0], mu, q, N);
    for (auto& s : v.basis->states()) {
      MpfValue m = stationary_mpf(s, mu, q, N);
      CHECK(m.warning.empty());
      worst_gap = std::max(worst_gap, m.rel_gap);
      double r_mpf = to_double(m.value / ref.value), r_ns = to_double(v.at(s) / ref_v);
      worst = std::max(worst, std::fabs(r_mpf / r_ns - 1));
    }
    INFO("L=", L);
    CHECK(worst < 1e-9);
    CHECK(worst_gap < 1e-10);
  }
}

TEST_CASE("exact two species traces") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 3; ++t) {
    Rational q = test::unit_rational(rng);
    Mu mu2{random_rational(rng, Rational(1, 20), Rational(1, 3)), random_rational(rng, Rational(1, 20), Rational(1, 3))};
    Mu mu3{mu2[0], mu2[1], random_rational(rng, Rational(1, 20), Rational(1, 3))};
    for (auto& [mu, oracle] : {std::pair{mu2, two_species_ring_weights(mu2, q)}, std::pair{mu3, two_species_ring_weights(mu3, q)}}) {
      std::map<State, Rational> tr;
      for (auto& [s, w] : oracle) tr[s] = stationary_mpf_exact_n2(s, mu, q);
      CHECK(ratio_constant(tr, oracle));
    }
  }
  // the truncated trace approaches the exact one geometrically
  Rational q(1, 2);
  Mu mu{Rational(1, 7), Rational(1, 5)};
  State s{MultiIndex{1, 0}, MultiIndex{0, 1}};
  Rational exact = stationary_mpf_exact_n2(s, mu, q);
  double prev = 1;
  for (int N : {4, 8, 16}) {
    double gap = std::fabs(to_double((stationary_mpf(s, mu, q, N).value - exact) / exact));
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-4);
  CHECK_THROWS_AS(stationary_mpf_exact_n2({MultiIndex{1, 0}, MultiIndex{0, 0}}, mu, q), PoleError);
}

TEST_CASE("normalization constants") {
  Rational q(2, 5), a(1, 6), b(1, 4), c(2, 9);
  MultiIndex k{1, 1};
  CHECK(G_k_exact_n2(k, {a, b}, q) == G_k_exact_n2(k, {b, a}, q));
  CHECK(G_k_exact_n2(k, {a, b, c}, q) == G_k_exact_n2(k, {c, a, b}, q));
  CHECK(G_k_exact_n2(k, {a, b, c}, q) == G_k_exact_n2(k, {b, a, c}, q));
  MultiIndex k2{2, 1};
  CHECK(G_k_exact_n2(k2, {a, b}, q) == G_k_exact_n2(k2, {b, a}, q));
  // polynomial in 1/mu_1: 9 nodes in t = 1/mu_1 fix it, two more confirm
  std::vector<Rational> ts, vals;
  for (int j = 0; j < 9; ++j) {
    ts.push_back(Rational(3 + j));
    vals.push_back(G_k_exact_n2(k, {1 / ts.back(), b, c}, q));
  }
  Poly p = interpolate(ts, vals);
  for (Rational t : {Rational(29, 2), Rational(40)}) CHECK(p(t) == G_k_exact_n2(k, {1 / t, b, c}, q));
  // truncated G_k agrees with the exact value and is symmetric to its gap
  MpfValue g = G_k(k, {a, b}, q, 20), gs = G_k(k, {b, a}, q, 20);
  CHECK(g.rel_gap < 1e-7);
  CHECK(std::fabs(to_double(g.value / G_k_exact_n2(k, {a, b}, q)) - 1) < 1e-7);
  CHECK(std::fabs(to_double(g.value / gs.value) - 1) < 1e-7);
}

TEST_CASE("trace certificates and warnings") {
  Rational q(1, 3);
  Mu mu{Rational(1, 5), Rational(1, 7)};
  State s{MultiIndex{1, 0}, MultiIndex{0, 1}};
  auto tc = trace_convergence(s, mu, q, 4, 3);
  CHECK(tc.cutoffs == std::vector<int>{4, 8, 16, 32});
  CHECK(tc.gaps.size() == 3);
  CHECK(tc.decreasing);
  auto nb = stationary_mpf({MultiIndex{0, 1}, MultiIndex{0, 0}}, mu, q, 8);
  CHECK_FALSE(nb.warning.empty());
  CHECK(stationary_mpf(s, mu, q, 8).warning.empty());
  // X1 X2 lowers at most once, so two extra b's leave nothing on the diagonal
  auto X1 = X_op(MultiIndex{1, 0}, mu[0], 10, q), X2 = X_op(MultiIndex{0, 1}, mu[1], 10, q);
  FockOperator bb{1, 10, mpow(qboson(QBoson::b, 10, q), 2)};
  CHECK(trace(X1 * X2 * bb) == 0);
  CHECK_FALSE(trace(X1 * X2) == 0);
  CHECK_THROWS(stationary_mpf(s, {mu[0]}, q, 8));
}
