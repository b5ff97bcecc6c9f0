#pragma once

#include <string>
#include <vector>

#include "zrplab/poly.hpp"
#include "zrplab/sparse.hpp"

namespace zrp {

// Basis of ker(A) by fraction-free elimination.  Rows are scaled to
// integers first; the pivot in each column is the candidate with the
// largest bit length.
std::vector<std::vector<Rational>> null_space(const SparseMatrix& A);

struct StationaryVector {
  BasisPtr basis;
  std::vector<Rational> p;  // sums to 1

  Rational at(const State& s) const { return p[basis->at(s)]; }
};

// Unique fixed vector of a column-stochastic sector block, normalized to sum 1.
// Throws std::runtime_error if ker(T - 1) is not one-dimensional.
StationaryVector solve_stationary(const SparseOperator& T);

// Stationary vector of script-T(lambda | mu) on the sector k.
StationaryVector stationary_scriptT(const Rational& lambda, const std::vector<Rational>& mu, const Rational& q,
                                    const MultiIndex& k);

// ---- positivity probe ---------------------------------------------------

struct PositivitySample {
  int L = 2;
  MultiIndex k;  // n components
};

struct PositivityEvidence {
  int L = 0;
  MultiIndex k;
  std::vector<std::string> labels;  // multiset labels, basis order
  std::vector<MPoly> polys;         // variables (q, mu_1..mu_L), primitive over Z
  std::vector<int> degrees;         // per-variable degree bound used on the grid
  std::size_t negative_coefficients = 0;  // coefficients of the wrong sign in (q, -mu_i)
  std::size_t total_coefficients = 0;
  bool consistent = false;  // no wrong-sign coefficient found
  bool validated = false;   // off-grid check point reproduced
  std::string grid;         // description of the sample design
};

// Reconstructs the stationary vector as polynomials in (q, mu_1..mu_L):
// along lines through a fixed base point the sum-one vector is recovered as
// rational functions (Thiele), the lcm of their denominators fixes the
// polynomial gauge, and the values are interpolated on a tensor grid whose
// per-variable degrees come from axis-parallel lines.  A random check point
// off the grid validates the result.  Only evidence is reported.
PositivityEvidence probe_positivity(const PositivitySample& s, unsigned seed = 7);

std::vector<PositivityEvidence> probe_positivity_conjecture(const std::vector<PositivitySample>& samples,
                                                            unsigned seed = 7);

}  // namespace zrp
