#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "zrplab/poly.hpp"
#include "zrplab/qkit.hpp"

using namespace zrp;

TEST_CASE("qpoch values") {
  Rational q(1, 3);
  CHECK(qpoch(Rational(7, 5), q, 0) == 1);
  CHECK(qpoch(Rational(1), q, 3) == 0);
  CHECK(qpoch(Rational(1, 2), Rational(1, 3), 2) == Rational(5, 12));
}

TEST_CASE("qpoch splits over concatenated ranges") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 5; ++t) {
    Rational z = test::unit_rational(rng), q = test::unit_rational(rng);
    for (int a = 0; a <= 6; ++a)
      for (int b = 0; b <= 6; ++b) CHECK(qpoch(z, q, a + b) == qpoch(z, q, a) * qpoch(z * pow(q, a), q, b));
  }
}

TEST_CASE("qbinom values and q-Pascal") {
  Rational q(2, 7);
  CHECK(qbinom(5, 0, q) == 1);
  CHECK(qbinom(2, 1, q) == 1 + q);
  CHECK(qbinom(1, 2, q) == 0);
  CHECK(qbinom(3, -1, q) == 0);
  // ratio-of-factorials oracle
  for (int m = 0; m <= 7; ++m)
    for (int k = 0; k <= m; ++k) {
      CHECK(qbinom(m, k, q) == qpoch(q, q, m) / (qpoch(q, q, k) * qpoch(q, q, m - k)));
      if (m >= 1 && k >= 1) CHECK(qbinom(m, k, q) == qbinom(m - 1, k - 1, q) + pow(q, k) * qbinom(m - 1, k, q));
    }
  CHECK(qbinom(4, 2, Rational(1)) == 6);
}

TEST_CASE("phi_exp") {
  CHECK(phi_exp(MultiIndex{0, 0, 0}, MultiIndex{3, 1, 2}) == 0);
  CHECK(phi_exp(MultiIndex{1, 0}, MultiIndex{0, 1}) == 1);
  CHECK(phi_exp(MultiIndex{1, 2, 1}, MultiIndex{2, 0, 3}) == 9);
  CHECK_THROWS(phi_exp(MultiIndex{1}, MultiIndex{1, 2}));
}

TEST_CASE("enumerations") {
  auto b05 = enumerate_Bl(0, 5);
  REQUIRE(b05.size() == 1);
  CHECK(b05[0] == MultiIndex{5});
  auto b12 = enumerate_Bl(1, 2);
  CHECK(b12 == std::vector<MultiIndex>{{2, 0}, {1, 1}, {0, 2}});
  auto binom = [](int a, int b) {
    long r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  for (int n = 0; n <= 3; ++n)
    for (int l = 0; l <= 5; ++l) {
      auto v = enumerate_Bl(n, l);
      CHECK(static_cast<long>(v.size()) == binom(l + n, n));
      std::set<MultiIndex> uniq(v.begin(), v.end());
      CHECK(uniq.size() == v.size());
      for (auto& a : v) CHECK(a.weight() == l);
      for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i - 1] > v[i]);
    }
  CHECK(enumerate_eps_basis(EpsilonSeq::parse("111"), 4).empty());
  CHECK(enumerate_eps_basis(EpsilonSeq::parse("10"), 2) == std::vector<MultiIndex>{{1, 1}, {0, 2}});
  CHECK(enumerate_eps_basis(EpsilonSeq::parse("000"), 3) == enumerate_Bl(2, 3));
  CHECK(enumerate_dominated(MultiIndex{1, 2}).size() == 6);
}

TEST_CASE("epsilon sequences") {
  CHECK(EpsilonSeq::parse("110").kappa() == 2);
  CHECK(EpsilonSeq::parse("101").kappa() == -1);
  CHECK(EpsilonSeq::parse("111").all_ones());
  CHECK_THROWS(EpsilonSeq::parse("12"));
}

TEST_CASE("truncated series algebra") {
  std::mt19937_64 rng(5);
  const int D = 6;
  auto random_series = [&](bool unit) {
    TruncatedSeries s(D);
    for (int j = 0; j <= D; ++j) s[j] = test::unit_rational(rng) - Rational(1, 2);
    if (unit) s[0] = 1 + test::unit_rational(rng);
    return s;
  };
  auto f = random_series(true), g = random_series(false), h = random_series(false);
  CHECK((f * g) * h == f * (g * h));
  CHECK(f * f.inverse() == TruncatedSeries::one(D));
  Rational z(2, 5), q(1, 3);
  auto p = TruncatedSeries::pochhammer(z, q, D);
  auto ip = TruncatedSeries::inverse_pochhammer(z, q, D);
  CHECK(p * ip == TruncatedSeries::one(D));
  // direct product oracle: prod_{s<=D} (1 - z q^s u) agrees to order D
  TruncatedSeries prod = TruncatedSeries::one(D);
  for (int s = 0; s <= 3 * D; ++s) {
    TruncatedSeries f1(D);
    f1[0] = 1;
    f1[1] = -z * pow(q, s);
    prod = prod * f1;
  }
  // tail factors beyond 3D only touch u^1 at O(q^{3D}); compare u^0
  CHECK(prod[0] == 1);
}

TEST_CASE("qexp_series coefficients") {
  Rational z(3, 7), q(1, 4);
  auto inv = qexp_series(5, z, q, QexpKind::inverse);
  auto poch = qexp_series(5, z, q, QexpKind::pochhammer);
  CHECK(inv[0] == 1);
  CHECK(poch[0] == 1);
  CHECK(poch[1] == -z / (1 - q));
  for (int j = 0; j <= 5; ++j) CHECK(inv[static_cast<std::size_t>(j)] == pow(z, j) / qpoch(q, q, j));
  // inverse * pochhammer = 1 as formal series
  for (int k = 0; k <= 5; ++k) {
    Rational acc = 0;
    for (int j = 0; j <= k; ++j) acc += inv[static_cast<std::size_t>(j)] * poch[static_cast<std::size_t>(k - j)];
    CHECK(acc == (k == 0 ? 1 : 0));
  }
}

TEST_CASE("polynomials and rational functions") {
  Poly p({Rational(1), Rational(-3), Rational(2)});  // (1-z)(1-2z)
  CHECK(p(Rational(1)) == 0);
  CHECK(p.deflate(Rational(1)) == Poly({Rational(-1), Rational(2)}));
  std::vector<Rational> xs{0, 1, 2, 5}, ys;
  Poly c({Rational(2), Rational(0), Rational(-1), Rational(1, 3)});
  for (auto& x : xs) ys.push_back(c(x));
  CHECK(interpolate(xs, ys) == c);
  // removable singularity: (z-1)(z+2) / (z-1)
  RatFunc r(Poly({Rational(-2), Rational(1), Rational(1)}), Poly({Rational(-1), Rational(1)}));
  CHECK(r.at(Rational(1)) == 3);
  CHECK(r.derivative_at(Rational(1)) == 1);
  RatFunc pole(Poly::constant(1), Poly({Rational(-1), Rational(1)}));
  CHECK_THROWS_AS(pole.at(Rational(1)), PoleError);
  CHECK(poly_gcd(p, Poly({Rational(-1), Rational(1)})) == Poly({Rational(-1), Rational(1)}));
}

TEST_CASE("exponential polynomial resummation") {
  // F(c) = 3 q^{2c} - q^{-c} + 1/2, summed from c = 4
  Rational q(2, 5), z(1, 7);
  auto F = [&](int c) -> Rational { return 3 * pow(q, 2 * c) - pow(q, -c) + Rational(1, 2); };
  std::vector<Rational> vals;
  for (int t = 0; t < 4; ++t) vals.push_back(F(4 + t));
  RatFunc g = resum_exp_poly(vals, -1, 2, q);
  // closed form of the geometric tails
  Rational expect = 3 * pow(q, 8) / (1 - q * q * z) - pow(q, -4) / (1 - z / q) + Rational(1, 2) / (1 - z);
  CHECK(g.at(z) == expect);
}
