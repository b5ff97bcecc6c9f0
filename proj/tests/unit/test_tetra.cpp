#include <doctest.h>

#include <functional>

#include "helpers.hpp"
#include "zrplab/oracles.hpp"
#include "zrplab/tetra.hpp"

using namespace zrp;

namespace {

// Coefficient extraction done by an explicit four-fold sum over the
// expansions of the two products and the two inverse products.
Rational r3d_fourfold(int a, int b, int c, int i, int j, int k, const Rational& q) {
  if (a + b != i + j || b + c != j + k) return 0;
  Rational p = q * q;
  auto pp = [&](int n) -> Rational { return qpoch(p, p, n); };
  Rational s = 0;
  for (int j1 = 0; j1 <= b; ++j1)
    for (int j2 = 0; j1 + j2 <= b; ++j2)
      for (int j3 = 0; j1 + j2 + j3 <= b; ++j3) {
        int j4 = b - j1 - j2 - j3;
        Rational t = pow(p, j1 * (j1 - 1) / 2) * pow(q, (2 + a + c) * j1) / pp(j1);
        t *= pow(p, j2 * (j2 - 1) / 2) * pow(q, (-i - k) * j2) / pp(j2);
        t *= pow(q, (a - c) * j3) / pp(j3);
        t *= pow(q, (c - a) * j4) / pp(j4);
        if ((j3 + j4) % 2) t = -t;
        s += t;
      }
  return pow(q, i * k + b) * s;
}

using Col = TableColumn;

void check_column(const SparseOperator& R, const State& in, const Col& expected) {
  for (auto& [out, v] : expected) {
    INFO("in " << state_str(in) << " out " << state_str(out));
    CHECK(R.entry(out, in) == v);
  }
  // nothing else in the column
  std::size_t j = R.dom->at(in);
  for (auto& [i, v] : R.mat.column(j)) {
    bool listed = false;
    for (auto& e : expected) listed = listed || e.first == (*R.cod)[i];
    INFO("unexpected output " << state_str((*R.cod)[i]) << " from " << state_str(in));
    CHECK(listed);
  }
}

}  // namespace

TEST_CASE("3D R agrees with the four-fold sum") {
  for (Rational q : {Rational(1, 3), Rational(-2, 5), Rational(7, 4)}) {
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j)
        for (int k = 0; k <= 3; ++k)
          for (int b = 0; b <= i + j && b <= j + k; ++b) {
            int a = i + j - b, c = j + k - b;
            CHECK(r3d(a, b, c, i, j, k, q) == r3d_fourfold(a, b, c, i, j, k, q));
          }
  }
}

TEST_CASE("3D R selection rule and b = 0 values") {
  Rational q(2, 9);
  CHECK(r3d(1, 1, 1, 1, 1, 2, q) == 0);
  CHECK(r3d(2, 0, 1, 1, 1, 0, q) == 1);
  CHECK(r3d(3, 0, 3, 1, 2, 1, q) == q);
  CHECK(r3d(0, 0, 0, 0, 0, 0, q) == 1);
}

TEST_CASE("3D R is an involution") {
  Rational q(3, 7);
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j)
      for (int k = 0; k <= 2; ++k)
        for (int b = 0; b <= i + j && b <= j + k; ++b) {
          int a = i + j - b, c = j + k - b;
          Rational s = 0;
          for (int y = 0; y <= i + j && y <= j + k; ++y) {
            int x = i + j - y, z = j + k - y;
            s += r3d(a, b, c, x, y, z, q) * r3d(x, y, z, i, j, k, q);
          }
          CHECK(s == ((a == i && b == j && c == k) ? 1 : 0));
        }
}

TEST_CASE("3D L table") {
  Rational q(1, 2);
  CHECK(l3d(0, 0, 3, 0, 0, 3, q) == 1);
  CHECK(l3d(1, 1, 2, 1, 1, 2, q) == 1);
  CHECK(l3d(0, 1, 2, 0, 1, 2, q) == -Rational(1, 8));
  CHECK(l3d(1, 0, 2, 1, 0, 2, q) == Rational(1, 4));
  CHECK(l3d(0, 1, 1, 1, 0, 2, q) == Rational(15, 16));
  CHECK(l3d(1, 0, 3, 0, 1, 2, q) == 1);
  CHECK(l3d(1, 0, 2, 0, 1, 2, q) == 0);
  CHECK(l3d(0, 0, 1, 1, 1, 0, q) == 0);
  CHECK_THROWS(l3d(2, 0, 0, 0, 0, 0, q));
}

TEST_CASE("tetrahedron equation holds for both layer types") {
  for (int eps : {0, 1}) {
    auto rep = check_tetrahedron(eps, 3, Rational(2, 5));
    INFO(rep.witness);
    CHECK(rep.pass);
    CHECK(rep.inputs_checked > 0);
  }
}

TEST_CASE("tetrahedron checker detects a perturbed layer") {
  Rational q(2, 5);
  for (int eps : {0, 1}) {
    LayerFn bad = [q, eps](int a, int b, int c, int i, int j, int k) -> Rational {
      Rational v = eps == 0 ? r3d(a, b, c, i, j, k, q) : l3d(a, b, c, i, j, k, q);
      if (a == 1 && b == 0 && c == 1 && i == 0 && j == 1 && k == 0) v += 1;
      return v;
    };
    auto rep = check_tetrahedron(eps, 3, q, bad);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.witness.empty());
  }
}

TEST_CASE("R matrix normalization on the extremal vector") {
  Rational q(1, 3);
  std::mt19937_64 rng(5);
  for (auto bits : {"0", "00", "000", "10", "01", "110", "100", "0010"}) {
    auto eps = EpsilonSeq::parse(bits);
    std::size_t np1 = eps.size();
    for (int l = 0; l <= 3; ++l)
      for (int m = 0; m <= 3; ++m) {
        RMatrixFamily fam(eps, l, m, q);
        Rational z = test::unit_rational(rng) + 2;
        auto R = fam.at(z);
        for (std::size_t i = 0; i < np1; ++i) {
          if (eps[i]) continue;
          State s{MultiIndex::unit(np1, i), MultiIndex::unit(np1, i)};
          s[0][i] = l;
          s[1][i] = m;
          INFO(std::string(bits) << " l=" << l << " m=" << m);
          check_column(R, s, {{s, Rational(1)}});
        }
      }
  }
}

TEST_CASE("R matrix normalization for all-ones sequences") {
  Rational q(2, 7);
  for (auto bits : {"1", "11", "111"}) {
    auto eps = EpsilonSeq::parse(bits);
    int np1 = static_cast<int>(eps.size());
    auto top = [&](int l) {
      MultiIndex a(static_cast<std::size_t>(np1));
      for (int i = np1 - l; i < np1; ++i) a[static_cast<std::size_t>(i)] = 1;
      return a;
    };
    for (int l = 0; l <= np1; ++l)
      for (int m = 0; m <= np1; ++m) {
        auto R = build_R(eps, l, m, Rational(5, 3), q);
        State s{top(l), top(m)};
        INFO(std::string(bits) << " l=" << l << " m=" << m);
        check_column(R, s, {{s, Rational(1)}});
      }
    CHECK_THROWS(RMatrixFamily(eps, np1 + 1, 0, q));
  }
}

TEST_CASE("R^{m,m}(1) is the transposition") {
  Rational q(3, 5);
  for (auto bits : {"00", "000", "10", "110", "011", "11", "111"}) {
    auto eps = EpsilonSeq::parse(bits);
    int top = eps.all_ones() ? static_cast<int>(eps.size()) : 3;
    for (int m = 0; m <= top; ++m) {
      auto R = build_R(eps, m, m, Rational(1), q);
      for (std::size_t j = 0; j < R.dom->size(); ++j) {
        const State& in = (*R.dom)[j];
        INFO(std::string(bits) << " m=" << m);
        check_column(R, in, {{State{in[1], in[0]}, Rational(1)}});
      }
    }
  }
}

TEST_CASE("R matrix of U_A(1,1,0) matches the tabulated elements") {
  auto eps = EpsilonSeq::parse("110");
  for (Rational q : {Rational(1, 3), Rational(-3, 4)}) {
    for (auto [l, m] : {std::pair{2, 2}, {2, 3}, {3, 3}, {3, 2}}) {
      RMatrixFamily fam(eps, l, m, q);
      for (Rational z : {Rational(5, 7), Rational(-2), Rational(11, 3)}) {
        auto R = fam.at(z);
        auto g = tabulated_R_110(l, m, q, z);
        CHECK(g.size() == R.dom->size());
        for (auto& [in, col] : g) {
          INFO("l=" << l << " m=" << m << " z=" << to_string(z));
          check_column(R, in, col);
        }
      }
    }
  }
}

TEST_CASE("R matrix of U_A(1,0)") {
  auto eps = EpsilonSeq::parse("10");
  Rational q(2, 5);
  for (int l = 1; l <= 3; ++l)
    for (int m = 1; m <= 3; ++m) {
      Rational z(7, 3);
      auto R = build_R(eps, l, m, z, q);
      auto Q = [&](int e) -> Rational { return pow(q, e); };
      Rational d = z - Q(l + m);
      MultiIndex a0{0, l}, a1{1, l - 1}, b0{0, m}, b1{1, m - 1};
      check_column(R, {a0, b0}, {{{a0, b0}, 1}});
      check_column(R, {a1, b0}, {{{a0, b1}, (1 - Q(2 * m)) / d}, {{a1, b0}, (Q(m) * z - Q(l)) / d}});
      check_column(R, {a0, b1}, {{{a0, b1}, (Q(l) * z - Q(m)) / d}, {{a1, b0}, (1 - Q(2 * l)) * z / d}});
      check_column(R, {a1, b1}, {{{a1, b1}, (1 - Q(l + m) * z) / d}});
    }
}

TEST_CASE("R matrix derivative matches a finite difference of rational functions") {
  RMatrixFamily fam(EpsilonSeq::parse("100"), 2, 1, Rational(1, 2));
  Rational z(3, 2);
  auto D = fam.derivative_at(z);
  for (std::size_t j = 0; j < fam.basis()->size(); ++j)
    for (auto& [i, f] : fam.column(j)) {
      Poly n = f.num(), d = f.den();
      Rational expect = (n.derivative()(z) * d(z) - n(z) * d.derivative()(z)) / (d(z) * d(z));
      CHECK(D.mat.get(i, j) == expect);
    }
}

TEST_CASE("build_R rejects degenerate q") {
  auto eps = EpsilonSeq::parse("00");
  CHECK_THROWS(RMatrixFamily(eps, 1, 1, Rational(1)));
  CHECK_THROWS(RMatrixFamily(eps, 1, 1, Rational(-1)));
  CHECK_THROWS(RMatrixFamily(eps, 1, 1, Rational(0)));
}
