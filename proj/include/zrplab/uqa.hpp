#pragma once

#include <vector>

#include "zrplab/qkit.hpp"
#include "zrplab/report.hpp"
#include "zrplab/sparse.hpp"

namespace zrp {

enum class Gen { e, f, k, k_inv };

// Representation pi^l_x of U_A(eps) on V_l.  Node indices i live in Z_{n+1};
// component index 0 is identified with n+1.
class RepContext {
 public:
  RepContext(EpsilonSeq eps, int l, Rational x, Rational q);

  const EpsilonSeq& eps() const { return eps_; }
  int n() const { return static_cast<int>(eps_.size()) - 1; }
  int l() const { return l_; }
  const Rational& x() const { return x_; }
  const Rational& q() const { return q_; }
  const BasisPtr& basis() const { return basis_; }

  int eps_at(int i) const;  // eps_i with i mod n+1, eps_0 = eps_{n+1}
  Rational qi(int i) const;
  Rational D(int i, int j) const;
  Rational bracket(int u) const;  // [u]

  SparseMatrix gen(Gen g, int i) const;
  SparseVec apply(Gen g, int i, const SparseVec& v) const;

  // replace q_i (i in 0..n) to exercise the checkers
  void override_qi(std::vector<Rational> table) { qi_override_ = std::move(table); }

 private:
  int mod(int i) const;
  std::size_t pos(int i) const;  // array position of component i
  EpsilonSeq eps_;
  int l_;
  Rational x_, q_;
  BasisPtr basis_;
  std::vector<Rational> qi_override_;
};

// Which nodes the Serre-type relations (e_i^2 = 0, distant commutation,
// cubic, quartic) are imposed on.  `affine`: every i in Z_{n+1}.  `finite`:
// only when every node involved lies in 1..n.  k-relations and [e_i, f_j]
// are always checked on all of Z_{n+1}.
enum class SerreScope { affine, finite };

// Defining relations checked on matrices of V_l.  Serre-type relations are
// only imposed for n >= 2.  With n = 2 and the affine scope, the quartic
// relation fails in this representation (i-1 and i+1 are adjacent).
CheckReport check_relations(const RepContext& ctx, SerreScope scope = SerreScope::affine);

// (pi_x (x) pi_y) Delta^op(g) R = R (pi_x (x) pi_y) Delta(g) for g in {e_i, f_i, k_i}.
CheckReport check_intertwiner(const SparseMatrix& R, const RepContext& cl, const RepContext& cm);

}  // namespace zrp
