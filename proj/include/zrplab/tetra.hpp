#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "zrplab/poly.hpp"
#include "zrplab/qkit.hpp"
#include "zrplab/sparse.hpp"

namespace zrp {

// 3D R element R^{abc}_{ijk}: coefficient extraction from the u-series.
Rational r3d(int a, int b, int c, int i, int j, int k, const Rational& q);
// 3D L element L^{abc}_{ijk}; a, b, i, j must lie in {0, 1}.
Rational l3d(int a, int b, int c, int i, int j, int k, const Rational& q);

// Memoized r3d for a fixed q.  Not shared between threads.
class R3DCache {
 public:
  explicit R3DCache(Rational q) : q_(std::move(q)) {}
  const Rational& operator()(int a, int b, int c, int i, int j, int k) const;
  const Rational& q() const { return q_; }

 private:
  Rational q_;
  mutable std::map<std::array<int, 6>, Rational> memo_;
};

struct TetraReport {
  bool pass = true;
  std::size_t inputs_checked = 0;
  std::string witness;
};

// Element function for the layer operator M^{(eps)}: (a,b,c,i,j,k) -> value.
using LayerFn = std::function<Rational(int, int, int, int, int, int)>;

// M_124 M_135 M_236 R_456 = R_456 M_236 M_135 M_124 on every input whose
// conserved weights n1+n2+n3, n2+n3+n4+n5, n3+n5+n6 are all <= cutoff.
// `layer` replaces the M^{(eps)} elements (used to test the checker).
TetraReport check_tetrahedron(int eps_bit, int cutoff, const Rational& q, LayerFn layer = {});

// Trace-built R^{l,m}(z) on V_l (x) V_m as exact rational functions of z.
class RMatrixFamily {
 public:
  RMatrixFamily(EpsilonSeq eps, int l, int m, Rational q);

  const EpsilonSeq& eps() const { return eps_; }
  int l() const { return l_; }
  int m() const { return m_; }
  const Rational& q() const { return q_; }
  const BasisPtr& basis() const { return basis_; }

  SparseOperator at(const Rational& z) const;
  SparseOperator derivative_at(const Rational& z) const;
  // entries of column `in`: (row index, rational function)
  const std::vector<std::pair<std::size_t, RatFunc>>& column(std::size_t in) const { return cols_[in]; }
  RatFunc entry(const State& out, const State& in) const;
  RatFunc normalization() const;  // rho(z)

 private:
  RatFunc trace_entry(const MultiIndex& g, const MultiIndex& d, const MultiIndex& a, const MultiIndex& b,
                      const R3DCache& r) const;
  EpsilonSeq eps_;
  int l_, m_;
  Rational q_;
  BasisPtr basis_;
  std::vector<std::vector<std::pair<std::size_t, RatFunc>>> cols_;
};

SparseOperator build_R(const EpsilonSeq& eps, int l, int m, const Rational& z, const Rational& q);

// States (alpha, beta) spanning V_l (x) V_m for eps.
std::vector<State> pair_states(const EpsilonSeq& eps, int l, int m);

}  // namespace zrp
