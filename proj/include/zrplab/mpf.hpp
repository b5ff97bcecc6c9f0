#pragma once

#include <map>
#include <string>
#include <vector>

#include "zrplab/report.hpp"
#include "zrplab/sparse.hpp"

namespace zrp {

// Operator on F^{(x)F} truncated at occupation N per factor.  Basis index
// sum_f m_f (N+1)^{F-1-f}, factor 0 most significant.  Factor (i,j),
// 1 <= i <= j < n, sits at position j(j-1)/2 + i - 1.
struct FockOperator {
  int factors = 0;
  int N = 0;
  SparseMatrix mat;

  std::size_t dim() const { return mat.cols(); }
  FockOperator operator*(const FockOperator& o) const;
  FockOperator operator+(const FockOperator& o) const;
  FockOperator operator-(const FockOperator& o) const;
  FockOperator operator*(const Rational& a) const;
};

enum class QBoson { b, c, k };

// Single factor: b|m> = |m+1> (0 at m = N), c|m> = (1-q^m)|m-1>, k|m> = q^m|m>.
SparseMatrix qboson(QBoson op, int N, const Rational& q);
FockOperator fock_identity(int factors, int N);
// The single-factor operator `op` placed at `factor`.
FockOperator embed(const SparseMatrix& op, int factor, int factors, int N);
int factor_position(int i, int j);
inline int factor_count(int n) { return n * (n - 1) / 2; }
std::vector<int> occupations(std::size_t index, int factors, int N);

// Plain matrix trace over the truncation: with c|m> = (1-q^m)|m-1> the
// (q)_m pairing weights cancel against the dual basis.
Rational trace(const FockOperator& X);

// g_alpha(zeta) = zeta^{-|alpha|} (zeta)_{|alpha|} / prod (q)_{alpha_i}
Rational g_weight(const MultiIndex& alpha, const Rational& zeta, const Rational& q);

// K_alpha on n-1 factors.
FockOperator K_op(const MultiIndex& alpha, int N, const Rational& q);
// Z_alpha(zeta) from the rank recursion, on n(n-1)/2 factors.
FockOperator Z_recursive(const MultiIndex& alpha, const Rational& zeta, int N, const Rational& q);
// Z_alpha(zeta) from the product of operator q-Pochhammers Y_2 ... Y_n.
FockOperator Z_closed(const MultiIndex& alpha, const Rational& zeta, int N, const Rational& q);
// X_alpha = g_alpha Z_alpha (closed construction).
FockOperator X_op(const MultiIndex& alpha, const Rational& zeta, int N, const Rational& q);

// ---- ZF algebra checks on protected matrix elements ----------------------
//
// Products are only trusted on entries whose row and column occupations are
// all <= M with (n-1) M + bound <= N; intermediate states beyond the
// matching per-factor bound provably cannot reach such an entry.

enum class ZFForm { Z, X };
struct ZFOptions {
  int n = 2;
  Rational lambda, mu, q;
  int N = 8;
  int bound = 2;  // max |alpha|, |beta|
  ZFForm form = ZFForm::Z;
};
CheckReport zf_check(const ZFOptions& o);
// d/dlambda of the ZF relation at lambda = mu (hat relation), X form.
CheckReport hat_check(int n, const Rational& mu, const Rational& q, int N, int bound);
// Largest protected occupation for a given cutoff.
int protected_level(int n, int N, int bound);

// ---- generating function --------------------------------------------------

// sum over |alpha| <= degree of X_alpha(lambda) w^alpha.
FockOperator gen_function_A(const Rational& lambda, const std::vector<Rational>& w, const Rational& q, int N,
                            int degree);
// n = 2 product form Z_00(lambda) Gamma(x/lambda, y/lambda)^{-1} Gamma(x, y),
// expanded in (x, y) and cut at total degree `degree`.
FockOperator gen_function_A_closed_n2(const Rational& lambda, const Rational& x, const Rational& y, const Rational& q,
                                      int N, int degree);
// [A(mu|w), A(lambda|w)] = 0 coefficientwise in w up to `degree`, protected entries.
CheckReport gen_function_commute(int n, const Rational& mu, const Rational& lambda, const Rational& q, int N,
                                 int degree);

// ---- traces ---------------------------------------------------------------

struct MpfValue {
  Rational value;     // at cutoff N
  Rational value_2N;  // at cutoff 2N
  int N = 0;
  double rel_gap = 0;  // |value_2N - value| / |value_2N|
  std::string warning;  // set for non-basic sectors
};

// Tr(X_{s_1}(mu_1) ... X_{s_L}(mu_L)) at cutoff N and 2N.
MpfValue stationary_mpf(const State& sigma, const std::vector<Rational>& mu, const Rational& q, int N);
// Relative gaps between successive doublings N0, 2N0, ..., and whether they shrink.
struct ConvergenceTrace {
  std::vector<int> cutoffs;
  std::vector<Rational> values;
  std::vector<double> gaps;
  bool decreasing = true;
};
ConvergenceTrace trace_convergence(const State& sigma, const std::vector<Rational>& mu, const Rational& q, int N0,
                                   int doublings);
// Exact trace for n = 2: the diagonal <m|...|m> is an exponential polynomial
// in m, so the infinite sum is resummed from finitely many exact terms.
// Throws PoleError when it diverges (k_2 = 0).
Rational stationary_mpf_exact_n2(const State& sigma, const std::vector<Rational>& mu, const Rational& q);

// Normalization constant: sum of stationary_mpf over the sector.
MpfValue G_k(const MultiIndex& k, const std::vector<Rational>& mu, const Rational& q, int N);
Rational G_k_exact_n2(const MultiIndex& k, const std::vector<Rational>& mu, const Rational& q);

}  // namespace zrp
