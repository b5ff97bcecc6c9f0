#include "zrplab/transfer.hpp"

#include <set>
#include <stdexcept>

namespace zrp {

namespace {

void tuples_rec(const std::vector<std::vector<MultiIndex>>& choices, State& cur, std::vector<State>& out,
                const std::function<bool(const State&)>& keep) {
  if (cur.size() == choices.size()) {
    if (keep(cur)) out.push_back(cur);
    return;
  }
  for (auto& a : choices[cur.size()]) {
    cur.push_back(a);
    tuples_rec(choices, cur, out, keep);
    cur.pop_back();
  }
}

}  // namespace

std::vector<State> enumerate_sector(int L, const MultiIndex& k) {
  if (L < 1) throw std::invalid_argument("enumerate_sector: L must be >= 1");
  std::vector<State> out;
  for (auto& s : bounded_states(L, k))
    if (total_content(s) == k) out.push_back(s);
  return out;
}

std::vector<State> enumerate_sector_V(const std::vector<int>& m, const MultiIndex& k) {
  int n = static_cast<int>(k.size()) - 1;
  std::vector<std::vector<MultiIndex>> choices;
  for (int mi : m) choices.push_back(enumerate_Bl(n, mi));
  std::vector<State> out;
  State cur;
  tuples_rec(choices, cur, out, [&](const State& s) { return total_content(s) == k; });
  return out;
}

std::vector<State> product_states(const std::vector<int>& m, int n) {
  std::vector<std::vector<MultiIndex>> choices;
  for (int mi : m) choices.push_back(enumerate_Bl(n, mi));
  std::vector<State> out;
  State cur;
  tuples_rec(choices, cur, out, [](const State&) { return true; });
  return out;
}

std::vector<State> truncation_states(int L, const MultiIndex& bound) { return bounded_states(L, bound); }

bool is_basic(const MultiIndex& k) {
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k[i] < 1) return false;
  return k.size() > 0;
}

SparseOperator row_transfer(const std::vector<Kernel2>& vertex, const BasisPtr& basis,
                            const std::function<std::vector<MultiIndex>(const State&)>& aux_start, bool trace) {
  std::size_t L = vertex.size();
  SparseOperator op(basis, basis);
  for (std::size_t j = 0; j < basis->size(); ++j) {
    const State& beta = (*basis)[j];
    if (beta.size() != L) throw std::invalid_argument("row_transfer: state length differs from vertex count");
    for (auto& g0 : aux_start(beta)) {
      State s;
      s.push_back(g0);
      s.insert(s.end(), beta.begin(), beta.end());
      if (trace) s.push_back(g0);
      SparseVec v{{s, Rational(1)}};
      for (std::size_t i = 0; i < L; ++i) v = apply_kernel(vertex[i], 0, i + 1, v);
      for (auto& [st, x] : v) {
        if (trace && st[0] != st[L + 1]) continue;
        State out(st.begin() + 1, st.begin() + 1 + static_cast<std::ptrdiff_t>(L));
        auto r = basis->find(out);
        if (!r) throw std::logic_error("row_transfer: output " + state_str(out) + " outside the basis");
        op.mat.add(*r, j, x);
      }
    }
  }
  return op;
}

namespace {

void check_chain(const ChainV& c) {
  if (c.m.empty() || c.m.size() != c.w.size()) throw std::invalid_argument("chain: m and w must have equal length >= 1");
}

std::vector<Kernel2> s_vertices(int l, const Rational& z, const ChainV& c, int deriv_site) {
  std::vector<Kernel2> v;
  for (std::size_t i = 0; i < c.m.size(); ++i) {
    SFamily S(l, c.m[i], c.q, c.n);
    Rational arg = z / c.w[i];
    if (static_cast<int>(i) == deriv_site) {
      SparseOperator d = S.derivative_at(arg);
      d.mat = d.mat * Rational(1 / c.w[i]);
      v.push_back(kernel_of(std::make_shared<const SparseOperator>(std::move(d))));
    } else {
      v.push_back(kernel_of(std::make_shared<const SparseOperator>(S.at(arg))));
    }
  }
  return v;
}

}  // namespace

SparseOperator periodic_T(int l, const Rational& z, const ChainV& c, const MultiIndex& k) {
  check_chain(c);
  auto basis = make_basis(enumerate_sector_V(c.m, k));
  auto bl = enumerate_Bl(c.n, l);
  return row_transfer(s_vertices(l, z, c, -1), basis, [&](const State&) { return bl; }, true);
}

SparseOperator periodic_T_derivative(int l, const Rational& z, const ChainV& c, const MultiIndex& k) {
  check_chain(c);
  auto basis = make_basis(enumerate_sector_V(c.m, k));
  auto bl = enumerate_Bl(c.n, l);
  SparseOperator acc(basis, basis);
  for (std::size_t i = 0; i < c.m.size(); ++i)
    acc.mat = acc.mat + row_transfer(s_vertices(l, z, c, static_cast<int>(i)), basis, [&](const State&) { return bl; }, true).mat;
  return acc;
}

SparseOperator mixed_T(int i, int l, const Rational& z, const ChainV& c) {
  check_chain(c);
  if (i < 1 || i > c.n + 1) throw std::invalid_argument("mixed_T: species index must be in 1..n+1");
  auto basis = make_basis(product_states(c.m, c.n));
  MultiIndex g0(static_cast<std::size_t>(c.n) + 1);
  g0[static_cast<std::size_t>(i - 1)] = l;
  std::vector<MultiIndex> start{g0};
  return row_transfer(s_vertices(l, z, c, -1), basis, [&](const State&) { return start; }, false);
}

namespace {

std::vector<Kernel2> script_vertices(const Rational& lambda, const std::vector<Rational>& mu, const Rational& q) {
  std::vector<Kernel2> v;
  for (auto& m : mu) v.push_back(script_S_kernel({q, lambda, m}));
  return v;
}

}  // namespace

SparseOperator periodic_scriptT(const Rational& lambda, const std::vector<Rational>& mu, const Rational& q,
                                const MultiIndex& k) {
  auto basis = make_basis(enumerate_sector(static_cast<int>(mu.size()), k));
  return row_transfer(script_vertices(lambda, mu, q), basis,
                      [](const State& beta) { return enumerate_dominated(beta.back()); }, true);
}

SparseOperator mixed_scriptT(const Rational& lambda, const std::vector<Rational>& mu, const Rational& q,
                             const MultiIndex& bound) {
  auto basis = make_basis(truncation_states(static_cast<int>(mu.size()), bound));
  std::vector<MultiIndex> start{MultiIndex(bound.size())};
  return row_transfer(script_vertices(lambda, mu, q), basis, [&](const State&) { return start; }, false);
}

CheckReport markov_gate(const SparseOperator& op, GateKind kind) {
  CheckReport rep(kind == GateKind::discrete ? "markov gate (discrete)" : "markov gate (continuous)");
  Rational target = kind == GateKind::discrete ? 1 : 0;
  for (std::size_t j = 0; j < op.mat.cols(); ++j) {
    ++rep.checked;
    Rational s = 0;
    for (auto& [i, v] : op.mat.column(j)) {
      s += v;
      bool diag = i == j && op.dom == op.cod;
      if (sgn(v) < 0 && (kind == GateKind::discrete || !diag))
        rep.fail("negative entry " + to_string(v) + " at out " + state_str((*op.cod)[i]) + " in " +
                 state_str((*op.dom)[j]));
    }
    if (s != target) rep.fail("column " + state_str((*op.dom)[j]) + " sums to " + to_string(s));
  }
  return rep;
}

namespace {

Rational safe_qpoch(const Rational& z, const Rational& q, int m) {
  Rational d = qpoch(z, q, m);
  if (is_zero(d)) throw PoleError("Hamiltonian: mu q^i = 1");
  return d;
}

Rational diag_r(const MultiIndex& a, const HamiltonianParams& p) {
  Rational s = 0;
  for (int i = 0; i < a.weight(); ++i) {
    Rational d = 1 - p.mu * pow(p.q, i);
    if (is_zero(d)) throw PoleError("Hamiltonian: mu q^i = 1");
    s += pow(p.q, i) / d;
  }
  return -p.sign * s;
}

// rate of gamma leaving a site with content a (right movers)
Rational rate_r(const MultiIndex& a, const MultiIndex& g, const HamiltonianParams& p) {
  int G = g.weight();
  Rational v = p.sign * pow(p.q, phi_exp(a - g, g)) * pow(p.mu, G - 1) * qpoch(p.q, p.q, G - 1) /
               safe_qpoch(p.mu * pow(p.q, a.weight() - G), p.q, G);
  for (std::size_t i = 0; i < a.size(); ++i) v *= qbinom(a[i], g[i], p.q);
  return v;
}

}  // namespace

Kernel2 h_local(HKind kind, const HamiltonianParams& p) {
  if (p.sign != 1 && p.sign != -1) throw std::invalid_argument("h_local: sign must be +-1");
  switch (kind) {
    case HKind::r:
      return [p](const MultiIndex& a, const MultiIndex& b, std::vector<LocalTerm>& out) {
        for (auto& g : enumerate_dominated(a)) {
          if (g.is_zero()) continue;
          Rational v = rate_r(a, g, p);
          if (!is_zero(v)) out.push_back({a - g, b + g, v});
        }
        Rational d = diag_r(a, p);
        if (!is_zero(d)) out.push_back({a, b, d});
      };
    case HKind::tilde:
      return [p](const MultiIndex& a, const MultiIndex&, std::vector<LocalTerm>& out) {
        for (auto& g : enumerate_dominated(a)) {
          if (g.is_zero()) continue;
          Rational v = rate_r(a, g, p);
          if (!is_zero(v)) out.push_back({a - g, MultiIndex(), v});
        }
        Rational d = diag_r(a, p);
        if (!is_zero(d)) out.push_back({a, MultiIndex(), d});
      };
    case HKind::l:
      return [p](const MultiIndex& a, const MultiIndex& b, std::vector<LocalTerm>& out) {
        for (auto& g : enumerate_dominated(b)) {
          if (g.is_zero()) continue;
          int G = g.weight();
          Rational v = p.sign * pow(p.q, phi_exp(g, b - g)) * qpoch(p.q, p.q, G - 1) /
                       safe_qpoch(p.mu * pow(p.q, b.weight() - G), p.q, G);
          for (std::size_t i = 0; i < b.size(); ++i) v *= qbinom(b[i], g[i], p.q);
          if (!is_zero(v)) out.push_back({a + g, b - g, v});
        }
        Rational s = 0;
        for (int i = 0; i < b.weight(); ++i) {
          Rational d = 1 - p.mu * pow(p.q, i);
          if (is_zero(d)) throw PoleError("Hamiltonian: mu q^i = 1");
          s += 1 / d;
        }
        if (!is_zero(s)) out.push_back({a, b, Rational(-p.sign * s)});
      };
  }
  throw std::logic_error("h_local: unknown kind");
}

SparseOperator assemble_H(HKind kind, const HamiltonianParams& p, const BasisPtr& basis) {
  SparseOperator H(basis, basis);
  if (basis->size() == 0) return H;
  std::size_t L = (*basis)[0].size();
  if (kind != HKind::tilde && L < 2) throw std::invalid_argument("assemble_H: periodic chains need L >= 2");
  Kernel2 h = h_local(kind, p);
  Kernel2 hr = h_local(HKind::r, p);
  std::vector<LocalTerm> terms;
  for (std::size_t j = 0; j < basis->size(); ++j) {
    const State& s = (*basis)[j];
    if (kind == HKind::tilde) {
      for (std::size_t i = 0; i + 1 < L; ++i) {
        terms.clear();
        hr(s[i], s[i + 1], terms);
        for (auto& t : terms) {
          State o = s;
          o[i] = t.out1;
          o[i + 1] = t.out2;
          H.mat.add(basis->at(o), j, t.value);
        }
      }
      terms.clear();
      h(s[L - 1], MultiIndex(), terms);
      for (auto& t : terms) {
        State o = s;
        o[L - 1] = t.out1;
        H.mat.add(basis->at(o), j, t.value);
      }
    } else {
      for (std::size_t i = 0; i < L; ++i) {
        std::size_t k = (i + 1) % L;
        terms.clear();
        h(s[i], s[k], terms);
        for (auto& t : terms) {
          State o = s;
          o[i] = t.out1;
          o[k] = t.out2;
          H.mat.add(basis->at(o), j, t.value);
        }
      }
    }
  }
  return H;
}

SparseOperator superposed_H(const Rational& a, const Rational& b, const HamiltonianParams& p, const BasisPtr& basis) {
  SparseOperator H(basis, basis);
  H.mat = assemble_H(HKind::r, p, basis).mat * a + assemble_H(HKind::l, p, basis).mat * b;
  return H;
}

SparseOperator parity(const BasisPtr& basis) {
  SparseOperator P(basis, basis);
  for (std::size_t j = 0; j < basis->size(); ++j) {
    State r((*basis)[j].rbegin(), (*basis)[j].rend());
    P.mat.set(basis->at(r), j, 1);
  }
  return P;
}

SparseOperator interpolated_derivative(const std::function<SparseOperator(const Rational&)>& F, int shift, int degree,
                                       const Rational& at) {
  BasisPtr dom, cod;
  SparseMatrix d = interpolated_derivative(
      [&](const Rational& x) {
        SparseOperator o = F(x);
        dom = o.dom;
        cod = o.cod;
        return o.mat;
      },
      shift, degree, at);
  SparseOperator D(dom, cod);
  D.mat = std::move(d);
  return D;
}

SparseOperator H_from_transfer(HKind kind, const HamiltonianParams& p, int L, const MultiIndex& k) {
  std::vector<Rational> mu(static_cast<std::size_t>(L), p.mu);
  int w = k.weight();
  if (kind == HKind::tilde) {
    auto D = interpolated_derivative([&](const Rational& x) { return mixed_scriptT(x, mu, p.q, k); }, w, w, Rational(1));
    D.mat = D.mat * Rational(-p.sign / p.mu);
    return D;
  }
  auto F = [&](const Rational& x) { return periodic_scriptT(x, mu, p.q, k); };
  if (kind == HKind::r) {
    auto D = interpolated_derivative(F, w, w, Rational(1));
    D.mat = D.mat * Rational(-p.sign / p.mu);
    return D;
  }
  auto D = interpolated_derivative(F, w, w, p.mu);
  auto C = F(p.mu);  // cyclic shift, a permutation
  SparseOperator H(D.dom, D.cod);
  H.mat = C.mat.transpose() * D.mat * Rational(p.sign * p.mu);
  return H;
}

SparseOperator h_from_S(int m, const Rational& q, int n, int sign) {
  SFamily S(m, m, q, n);
  SparseOperator d = S.derivative_at(Rational(1));
  SparseOperator h(d.dom, d.cod);
  for (std::size_t j = 0; j < d.mat.cols(); ++j)
    for (auto& [i, v] : d.mat.column(j)) {
      const State& o = (*d.cod)[i];
      h.mat.set(d.cod->at({o[1], o[0]}), j, v * sign);
    }
  return h;
}

SparseOperator assemble_H_S(int m, const Rational& q, int n, int sign, int L, const MultiIndex& k) {
  if (L < 2) throw std::invalid_argument("assemble_H_S: L must be >= 2");
  auto local = std::make_shared<const SparseOperator>(h_from_S(m, q, n, sign));
  Kernel2 h = kernel_of(local);
  auto basis = make_basis(enumerate_sector_V(std::vector<int>(static_cast<std::size_t>(L), m), k));
  SparseOperator H(basis, basis);
  std::vector<LocalTerm> terms;
  for (std::size_t j = 0; j < basis->size(); ++j) {
    const State& s = (*basis)[j];
    for (std::size_t i = 0; i < static_cast<std::size_t>(L); ++i) {
      std::size_t r = (i + 1) % static_cast<std::size_t>(L);
      terms.clear();
      h(s[i], s[r], terms);
      for (auto& t : terms) {
        State o = s;
        o[i] = t.out1;
        o[r] = t.out2;
        H.mat.add(basis->at(o), j, t.value);
      }
    }
  }
  return H;
}

}  // namespace zrp
