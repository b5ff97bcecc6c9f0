#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "zrplab/multi_index.hpp"
#include "zrplab/rational.hpp"

namespace zrp {

// (z; q)_m
Rational qpoch(const Rational& z, const Rational& q, int m);

// q-binomial, zero outside 0 <= k <= m.
Rational qbinom(int m, int k, const Rational& q);

// sum_{i<j} a_i b_j
int phi_exp(const MultiIndex& a, const MultiIndex& b);

// Bit sequence (eps_1, ..., eps_{n+1}); bit 1 marks a two-dimensional factor.
class EpsilonSeq {
 public:
  EpsilonSeq() = default;
  explicit EpsilonSeq(std::vector<int> bits);
  static EpsilonSeq parse(const std::string& bits);  // "110"
  static EpsilonSeq zeros(std::size_t len) { return EpsilonSeq(std::vector<int>(len, 0)); }

  std::size_t size() const { return bits_.size(); }
  int operator[](std::size_t i) const { return bits_[i]; }
  bool all_ones() const;
  bool all_zeros() const;
  // number of leading ones when the sequence is (1^kappa, 0^rest); -1 otherwise
  int kappa() const;
  std::string str() const;

 private:
  std::vector<int> bits_;
};

// Compositions of `total` with `len` parts, lexicographically descending.
std::vector<MultiIndex> enumerate_compositions(std::size_t len, int total);

// B_l: compositions of l of length n+1, lexicographically descending.
std::vector<MultiIndex> enumerate_Bl(int n, int l);

// Compositions of l compatible with eps (entries in {0,1} where eps_i = 1).
std::vector<MultiIndex> enumerate_eps_basis(const EpsilonSeq& eps, int l);

// All gamma with 0 <= gamma <= bound componentwise, lexicographically descending.
std::vector<MultiIndex> enumerate_dominated(const MultiIndex& bound);

// Coefficients of a power series truncated at order D (u^0 .. u^D).
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order) : c_(static_cast<std::size_t>(order) + 1) {}
  TruncatedSeries(int order, std::vector<Rational> coeffs);

  static TruncatedSeries one(int order);
  // (x u; p)_infinity and its reciprocal, truncated.
  static TruncatedSeries pochhammer(const Rational& x, const Rational& p, int order);
  static TruncatedSeries inverse_pochhammer(const Rational& x, const Rational& p, int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& operator[](int j) const { return c_[static_cast<std::size_t>(j)]; }
  Rational& operator[](int j) { return c_[static_cast<std::size_t>(j)]; }

  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;
  // requires a unit constant term
  TruncatedSeries inverse() const;
  bool operator==(const TruncatedSeries& o) const { return c_ == o.c_; }

 private:
  std::vector<Rational> c_;
};

enum class QexpKind { pochhammer, inverse };

// c_0..c_{order} with (zA; q)_inf = sum_j c_j A^j (pochhammer) or
// 1/(zA; q)_inf = sum_j c_j A^j (inverse).  For a nilpotent A with A^{N+1} = 0
// pass order = N.
std::vector<Rational> qexp_series(int order, const Rational& z, const Rational& q, QexpKind kind);

}  // namespace zrp
