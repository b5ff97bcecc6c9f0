#pragma once

#include <random>
#include <vector>

#include "zrplab/report.hpp"
#include "zrplab/sparse.hpp"
#include "zrplab/tetra.hpp"

namespace zrp {

struct PhiParams {
  Rational q, lambda, mu;
};

// Phi_q(gamma | beta; lambda, mu); zero unless gamma <= beta.
Rational phi_weight(const MultiIndex& gamma, const MultiIndex& beta, const PhiParams& p);

// eta = sum_{i<j} (delta_i gamma_j - alpha_i beta_j)
int gauge_exponent(const MultiIndex& g, const MultiIndex& d, const MultiIndex& a, const MultiIndex& b);

// S^{l,m}(z) = q^eta R^{l,m}(z) with eps = (0, ..., 0) of length n+1.
class SFamily {
 public:
  SFamily(int l, int m, Rational q, int n);
  const BasisPtr& basis() const { return R_.basis(); }
  SparseOperator at(const Rational& z) const;
  SparseOperator derivative_at(const Rational& z) const;
  const RMatrixFamily& quantum() const { return R_; }

 private:
  SparseOperator gauge(SparseOperator op) const;
  RMatrixFamily R_;
};

SparseOperator s_gauge(int l, int m, const Rational& z, const Rational& q, int n);

// Right-hand side of the factorization at z = q^{l-m}, l <= m.
SparseOperator factorized_S(int l, int m, const Rational& q, int n);

// Column (alpha, beta) of Script-S: outputs gamma <= beta, delta = alpha + beta - gamma.
// `eps` (length n, possibly empty for no restriction) drops outputs outside B(eps).
Kernel2 script_S_kernel(const PhiParams& p, const EpsilonSeq& eps = {});

// Block of Script-S on { (gamma, delta) : gamma + delta = weight }.
SparseOperator script_S(const Rational& lambda, const Rational& mu, const Rational& q, int n,
                        const MultiIndex& weight);
SparseOperator script_S_eps(const EpsilonSeq& eps, const Rational& lambda, const Rational& mu, const Rational& q,
                            const MultiIndex& weight);

// psi exponent of the special-point formula
int psi_exponent(const MultiIndex& a, const MultiIndex& b, const MultiIndex& g);

// Closed form of R^{l,m}(q^{l-m}) for eps = (1^kappa, 0^{n+1-kappa}), l <= m.
SparseOperator factorized_R_eps(const EpsilonSeq& eps, int l, int m, const Rational& q);

// Every column sums to exactly one.
CheckReport verify_stu(const SparseOperator& op);

// Entrywise a == b on the union of supports.
CheckReport compare_operators(const SparseOperator& a, const SparseOperator& b, const std::string& name);

// X_12 X_13 X_23 = X_23 X_13 X_12 on three-site product states.
CheckReport verify_triple(const Kernel2& x12, const Kernel2& x13, const Kernel2& x23,
                          const std::vector<State>& inputs, const std::string& name);

struct YbeOptions {
  int trials = 3;
  std::uint64_t seed = 1;
  Rational q = Rational(1, 3);
};

// Script-S (optionally eps-restricted) on three sites of n-component states
// whose total content is <= max_weight componentwise; random nu_1..nu_3 per trial.
CheckReport verify_ybe_script_S(int n, int max_weight, const YbeOptions& opt, const EpsilonSeq& eps = {});
// S^{k,l}, S^{k,m}, S^{l,m} for all k,l,m <= max_size; random z_1..z_3 per trial.
CheckReport verify_ybe_S(int n, int max_size, const YbeOptions& opt);
// R_ab(x) R_ac(xy) R_bc(y) = R_bc(y) R_ac(xy) R_ab(x) for trace-built R of any eps.
CheckReport verify_ybe_R(const EpsilonSeq& eps, int max_size, const YbeOptions& opt);

// Exploratory: P S(mu,lambda) P S(lambda,mu) = id on one block.
CheckReport explore_inversion(const Rational& lambda, const Rational& mu, const Rational& q, int n,
                              const MultiIndex& weight);

// Random rational in (lo, hi) with denominator <= den.
Rational random_rational(std::mt19937_64& rng, const Rational& lo, const Rational& hi, int den = 17);

// States of `sites` sites, each an n-component array, total content <= bound componentwise.
std::vector<State> bounded_states(int sites, const MultiIndex& bound, const EpsilonSeq& eps = {});

bool eps_valid(const MultiIndex& a, const EpsilonSeq& eps);

}  // namespace zrp
