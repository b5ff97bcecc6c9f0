#include "zrplab/uqa.hpp"

#include <sstream>
#include <stdexcept>

namespace zrp {

RepContext::RepContext(EpsilonSeq eps, int l, Rational x, Rational q)
    : eps_(std::move(eps)), l_(l), x_(std::move(x)), q_(std::move(q)) {
  if (eps_.size() < 2) throw std::invalid_argument("RepContext: need n >= 1");
  if (l < 0 || (eps_.all_ones() && l > static_cast<int>(eps_.size())))
    throw std::invalid_argument("RepContext: l outside the legal range");
  if (is_zero(q_) || q_ == 1 || q_ == -1) throw std::invalid_argument("RepContext: q must avoid 0 and +-1");
  if (is_zero(x_)) throw std::invalid_argument("RepContext: x must be nonzero");
  std::vector<State> states;
  for (auto& a : enumerate_eps_basis(eps_, l)) states.push_back({a});
  basis_ = make_basis(std::move(states));
}

int RepContext::mod(int i) const {
  int np1 = n() + 1;
  return ((i % np1) + np1) % np1;
}

std::size_t RepContext::pos(int i) const {
  int r = mod(i);
  return r == 0 ? static_cast<std::size_t>(n()) : static_cast<std::size_t>(r - 1);
}

int RepContext::eps_at(int i) const { return eps_[pos(i)]; }

Rational RepContext::qi(int i) const {
  if (!qi_override_.empty()) return qi_override_[static_cast<std::size_t>(mod(i))];
  return eps_at(i) ? Rational(-1 / q_) : q_;
}

Rational RepContext::D(int i, int j) const {
  i = mod(i);
  j = mod(j);
  if (i == j) return qi(i) * qi(i + 1);
  if (n() == 1) return 1 / (qi(i) * qi(i + 1));  // i-1 and i+1 coincide
  if (j == mod(i - 1)) return 1 / qi(i);
  if (j == mod(i + 1)) return 1 / qi(i + 1);
  return 1;
}

Rational RepContext::bracket(int u) const { return (pow(q_, u) - pow(q_, -u)) / (q_ - 1 / q_); }

SparseMatrix RepContext::gen(Gen g, int i) const {
  std::size_t d = basis_->size();
  SparseMatrix M(d, d);
  std::size_t pi = pos(i), pn = pos(i + 1);
  bool affine = mod(i) == 0;
  for (std::size_t c = 0; c < d; ++c) {
    const MultiIndex& a = (*basis_)[c][0];
    switch (g) {
      case Gen::k:
      case Gen::k_inv: {
        Rational v = pow(qi(i), -a[pi]) * pow(qi(i + 1), a[pn]);
        M.set(c, c, g == Gen::k ? v : Rational(1 / v));
        break;
      }
      case Gen::e:
      case Gen::f: {
        MultiIndex b = a;
        int coeff_index;
        if (g == Gen::e) {
          coeff_index = a[pi];
          b[pi] -= 1;
          b[pn] += 1;
        } else {
          coeff_index = a[pn];
          b[pi] += 1;
          b[pn] -= 1;
        }
        auto r = basis_->find({b});
        if (!r) break;  // leaves the allowed range
        Rational v = bracket(coeff_index);
        if (affine) v *= g == Gen::e ? x_ : Rational(1 / x_);
        M.set(*r, c, v);
        break;
      }
    }
  }
  return M;
}

SparseVec RepContext::apply(Gen g, int i, const SparseVec& v) const {
  SparseMatrix M = gen(g, i);
  SparseVec out;
  for (auto& [s, x] : v) {
    std::size_t c = basis_->at(s);
    for (auto& [r, y] : M.column(c)) add_to(out, (*basis_)[r], x * y);
  }
  return out;
}

namespace {

void expect_zero(CheckReport& rep, const SparseMatrix& M, const std::string& what) {
  ++rep.checked;
  if (M.nnz() != 0) rep.fail(what);
}

}  // namespace

CheckReport check_relations(const RepContext& ctx, SerreScope scope) {
  CheckReport rep("U_A relations eps=" + ctx.eps().str() + " l=" + std::to_string(ctx.l()));
  int np1 = ctx.n() + 1;
  std::size_t d = ctx.basis()->size();
  SparseMatrix I = SparseMatrix::identity(d);
  std::vector<SparseMatrix> E, F, K, Ki;
  for (int i = 0; i < np1; ++i) {
    E.push_back(ctx.gen(Gen::e, i));
    F.push_back(ctx.gen(Gen::f, i));
    K.push_back(ctx.gen(Gen::k, i));
    Ki.push_back(ctx.gen(Gen::k_inv, i));
  }
  auto idx = [&](int i) { return static_cast<std::size_t>(((i % np1) + np1) % np1); };
  Rational qq = ctx.q() - 1 / ctx.q();
  for (int i = 0; i < np1; ++i) {
    std::string si = std::to_string(i);
    expect_zero(rep, K[idx(i)] * Ki[idx(i)] - I, "k_i k_i^-1 != 1 at i=" + si);
    for (int j = 0; j < np1; ++j) {
      std::string sij = " at i=" + si + " j=" + std::to_string(j);
      auto &ki = K[idx(i)], &kii = Ki[idx(i)];
      expect_zero(rep, ki * K[idx(j)] - K[idx(j)] * ki, "k_i k_j != k_j k_i" + sij);
      expect_zero(rep, ki * E[idx(j)] * kii - E[idx(j)] * ctx.D(i, j), "k e k^-1 != D e" + sij);
      expect_zero(rep, ki * F[idx(j)] * kii - F[idx(j)] * Rational(1 / ctx.D(i, j)), "k f k^-1 != D^-1 f" + sij);
      SparseMatrix comm = E[idx(i)] * F[idx(j)] - F[idx(j)] * E[idx(i)];
      if (i == j) comm = comm - (ki - kii) * Rational(1 / qq);
      expect_zero(rep, comm, "[e_i, f_j] relation" + sij);
    }
    if (ctx.n() < 2) continue;
    auto finite = [&](int j) { return scope == SerreScope::affine || idx(j) != 0; };
    if (!finite(i)) continue;
    int ei = ctx.eps_at(i), en = ctx.eps_at(i + 1);
    Rational sgn2 = (ei ? -1 : 1) * ctx.bracket(2);
    for (auto* X : {&E, &F}) {
      auto& G = *X;
      std::string nm = X == &E ? "e" : "f";
      const SparseMatrix &gi = G[idx(i)], &gm = G[idx(i - 1)], &gp = G[idx(i + 1)];
      for (int j = 0; j < np1; ++j) {
        int dj = ((j - i) % np1 + np1) % np1;
        if (dj != 0 && dj != 1 && dj != np1 - 1 && finite(j))
          expect_zero(rep, gi * G[idx(j)] - G[idx(j)] * gi, "distant " + nm + " commutation at i=" + si);
      }
      if (ei != en) {
        expect_zero(rep, gi * gi, nm + "_i^2 != 0 at i=" + si);
        if (!finite(i - 1) || !finite(i + 1)) continue;
        SparseMatrix quart = gi * gm * gi * gp + gi * gm * gp * gi * sgn2 - gi * gp * gi * gm - gm * gi * gp * gi +
                             gp * gi * gm * gi;
        expect_zero(rep, quart, "quartic " + nm + " relation at i=" + si);
      } else {
        for (int j : {i - 1, i + 1}) {
          if (!finite(j)) continue;
          const SparseMatrix& gj = G[idx(j)];
          expect_zero(rep, gi * gi * gj - gi * gj * gi * sgn2 + gj * gi * gi, "cubic " + nm + " Serre at i=" + si);
        }
      }
    }
  }
  return rep;
}

CheckReport check_intertwiner(const SparseMatrix& R, const RepContext& cl, const RepContext& cm) {
  CheckReport rep("intertwiner");
  std::size_t dl = cl.basis()->size(), dm = cm.basis()->size();
  if (R.rows() != dl * dm || R.cols() != dl * dm) throw std::invalid_argument("check_intertwiner: dimension mismatch");
  SparseMatrix Il = SparseMatrix::identity(dl), Im = SparseMatrix::identity(dm);
  int np1 = cl.n() + 1;
  for (int i = 0; i < np1; ++i) {
    SparseMatrix el = cl.gen(Gen::e, i), em = cm.gen(Gen::e, i), fl = cl.gen(Gen::f, i), fm = cm.gen(Gen::f, i);
    SparseMatrix kl = cl.gen(Gen::k, i), km = cm.gen(Gen::k, i), kil = cl.gen(Gen::k_inv, i),
                 kim = cm.gen(Gen::k_inv, i);
    struct G {
      const char* name;
      SparseMatrix d, dop;
    };
    G gens[] = {
        {"e", Il.kron(em) + el.kron(km), el.kron(Im) + kl.kron(em)},
        {"f", fl.kron(Im) + kil.kron(fm), Il.kron(fm) + fl.kron(kim)},
        {"k", kl.kron(km), kl.kron(km)},
    };
    for (auto& g : gens) {
      ++rep.checked;
      SparseMatrix diff = g.dop * R - R * g.d;
      if (diff.nnz() != 0) {
        std::ostringstream os;
        os << g.name << "_" << i << " fails to intertwine";
        rep.fail(os.str());
      }
    }
  }
  return rep;
}

}  // namespace zrp
