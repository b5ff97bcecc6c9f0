#pragma once

#include <functional>
#include <vector>

#include "zrplab/report.hpp"
#include "zrplab/sparse.hpp"
#include "zrplab/stoch.hpp"

namespace zrp {

// ---- state spaces ------------------------------------------------------

// Sector of W^{(x)L}: L-tuples of n-component arrays with total content k.
std::vector<State> enumerate_sector(int L, const MultiIndex& k);
// Sector of V_{m_1} (x) ... (x) V_{m_L}: (n+1)-component arrays, alpha_i in B_{m_i}, total k.
std::vector<State> enumerate_sector_V(const std::vector<int>& m, const MultiIndex& k);
// Full B_{m_1} x ... x B_{m_L}.
std::vector<State> product_states(const std::vector<int>& m, int n);
// L-tuples of n-component arrays whose total content is <= bound componentwise.
std::vector<State> truncation_states(int L, const MultiIndex& bound);
bool is_basic(const MultiIndex& k);

// ---- row transfer matrices ---------------------------------------------

// Vertex i maps |gamma_{i-1}> (x) |beta_i> to sum |gamma_i> (x) |alpha_i>.
// `aux_start(beta)` lists the left boundary states.  With `trace`, only
// gamma_L = gamma_0 survives; otherwise gamma_L is summed over.
SparseOperator row_transfer(const std::vector<Kernel2>& vertex, const BasisPtr& basis,
                            const std::function<std::vector<MultiIndex>(const State&)>& aux_start, bool trace);

struct ChainV {
  std::vector<int> m;                 // capacities m_1..m_L
  std::vector<Rational> w;            // inhomogeneities w_1..w_L
  int n = 1;
  Rational q;
};

// T(l, z | m, w) on the sector k (n+1 components).
SparseOperator periodic_T(int l, const Rational& z, const ChainV& c, const MultiIndex& k);
// d/dz T(l, z | m, w), exact, by the product rule over vertices.
SparseOperator periodic_T_derivative(int l, const Rational& z, const ChainV& c, const MultiIndex& k);
// T~(i, l, z | m, w) on all of B_{m_1} x ... x B_{m_L}; species i in 1..n+1.
SparseOperator mixed_T(int i, int l, const Rational& z, const ChainV& c);

// Script-T(lambda | mu) on the sector k (n components).
SparseOperator periodic_scriptT(const Rational& lambda, const std::vector<Rational>& mu, const Rational& q,
                                const MultiIndex& k);
// Script-T~(lambda | mu) on the truncation {total content <= bound}, which it preserves.
SparseOperator mixed_scriptT(const Rational& lambda, const std::vector<Rational>& mu, const Rational& q,
                             const MultiIndex& bound);

// ---- Markov checks -----------------------------------------------------

enum class GateKind { discrete, continuous };
// discrete: entries >= 0, columns sum to 1.  continuous: off-diagonal >= 0, columns sum to 0.
CheckReport markov_gate(const SparseOperator& op, GateKind kind);

// ---- Hamiltonians ------------------------------------------------------

struct HamiltonianParams {
  int n = 1;
  Rational q, mu;
  int sign = 1;  // epsilon = +-1
};

enum class HKind { r, l, tilde };

// Local rate terms: rightward, leftward and open-chain exit.  For `tilde` the second argument is ignored and
// out2 is left empty.
Kernel2 h_local(HKind kind, const HamiltonianParams& p);

// H_r / H_l on a periodic sector, H~ on a truncation (any basis closed under the moves).
SparseOperator assemble_H(HKind kind, const HamiltonianParams& p, const BasisPtr& basis);
// a H_r + b H_l
SparseOperator superposed_H(const Rational& a, const Rational& b, const HamiltonianParams& p, const BasisPtr& basis);
// |a_1..a_L> -> |a_L..a_1>
SparseOperator parity(const BasisPtr& basis);

// d/d lambda of a family F(lambda) whose entries times lambda^shift are
// polynomials of degree <= degree; exact Lagrange interpolation with one
// extra verification point (throws on inconsistency).
SparseOperator interpolated_derivative(const std::function<SparseOperator(const Rational&)>& F, int shift, int degree,
                                       const Rational& at);

// H_r, H_l, H~ from the logarithmic derivative of the transfer matrices.
SparseOperator H_from_transfer(HKind kind, const HamiltonianParams& p, int L, const MultiIndex& k_or_bound);

// Local h(m) = sign * P * dS^{m,m}/dz at z = 1 on V_m (x) V_m.
SparseOperator h_from_S(int m, const Rational& q, int n, int sign);
// Sum of h(m) over the periodic chain on the sector k of V_m^{(x)L}.
SparseOperator assemble_H_S(int m, const Rational& q, int n, int sign, int L, const MultiIndex& k);

}  // namespace zrp
