#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zrplab/rational.hpp"

namespace zrp {

// Dense univariate polynomial, coefficients low to high.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
  static Poly constant(const Rational& a) { return Poly({a}); }
  static Poly monomial(int deg, const Rational& a = 1);
  // (1 - a z)
  static Poly one_minus(const Rational& a) { return Poly({Rational(1), Rational(-a)}); }
  // (z - a)
  static Poly linear_root(const Rational& a) { return Poly({Rational(-a), Rational(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  Rational coeff(int i) const;
  const std::vector<Rational>& coeffs() const { return c_; }

  Rational operator()(const Rational& z) const;
  Poly derivative() const;
  // quotient by (z - root); requires root to be a zero
  Poly deflate(const Rational& root) const;
  Poly truncated(int order) const;  // mod z^order

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& a) const;
  bool operator==(const Poly& o) const { return c_ == o.c_; }

 private:
  void trim();
  std::vector<Rational> c_;
};

// Lagrange interpolation through (xs[i], ys[i]).
Poly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

// Univariate polynomial gcd over Q, made monic.
Poly poly_gcd(Poly a, Poly b);
// exact division; throws if not divisible
Poly poly_divexact(const Poly& a, const Poly& b);

// num(z) / den(z); evaluation cancels common (z - z0) factors before
// declaring a pole.
class RatFunc {
 public:
  RatFunc() : num_(), den_(Poly::constant(1)) {}
  RatFunc(Poly num, Poly den);
  static RatFunc constant(const Rational& a) { return RatFunc(Poly::constant(a), Poly::constant(1)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  Rational at(const Rational& z) const;
  Rational derivative_at(const Rational& z) const;

  RatFunc operator*(const RatFunc& o) const { return RatFunc(num_ * o.num_, den_ * o.den_); }
  RatFunc operator*(const Rational& a) const { return RatFunc(num_ * a, den_); }
  RatFunc operator+(const RatFunc& o) const;

 private:
  // strip common (z - z0) factors
  void reduced_at(const Rational& z, Poly& n, Poly& d) const;
  Poly num_, den_;
};

// F: c -> F(c) on c >= c0 is an exponential polynomial sum_s A_s q^{s c} with
// s in [lo, hi].  Given F(c0), ..., F(c0 + hi - lo) returns
// sum_{t >= 0} F(c0 + t) z^t as a rational function (the analytic
// continuation of the geometric tails).
RatFunc resum_exp_poly(const std::vector<Rational>& values, int lo, int hi, const Rational& q);

// Thiele continued-fraction reconstruction of a univariate rational function
// sampled at t = start, start+1, ...; `f` may return nullopt to skip a sample.
// Stops once the convergent predicts `confirm` fresh samples; throws if
// more than `max_points` samples are consumed.  Result is reduced with a
// monic denominator.
RatFunc reconstruct_rational(const std::function<std::optional<Rational>(const Rational&)>& f, int max_points,
                             int confirm = 2, const Rational& start = 1);

// Sparse multivariate polynomial over Q.
struct MPoly {
  std::map<std::vector<int>, Rational> terms;  // exponent vector -> coefficient

  Rational operator()(const std::vector<Rational>& x) const;
  // "3*x0^2*x1 - x2"; names default to x0, x1, ...
  std::string str(const std::vector<std::string>& names = {}) const;
  bool operator==(const MPoly& o) const { return terms == o.terms; }
};

// Coefficients of the polynomials through tensor-grid samples: `values[g]`
// is the vector of outputs at grid point g (last axis fastest).
std::vector<MPoly> interpolate_grid(const std::vector<std::vector<Rational>>& axes,
                                    const std::vector<std::vector<Rational>>& values);

}  // namespace zrp
