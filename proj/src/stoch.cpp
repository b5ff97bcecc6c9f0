#include "zrplab/stoch.hpp"

#include <sstream>
#include <stdexcept>

namespace zrp {

Rational phi_weight(const MultiIndex& gamma, const MultiIndex& beta, const PhiParams& p) {
  if (gamma.size() != beta.size()) throw std::invalid_argument("phi_weight: length mismatch");
  if (!gamma.nonnegative() || !gamma.le(beta)) return 0;
  int g = gamma.weight(), b = beta.weight();
  Rational den = qpoch(p.mu, p.q, b);
  if (is_zero(den)) throw PoleError("phi_weight: (mu; q)_|beta| vanishes");
  if (is_zero(p.lambda)) throw PoleError("phi_weight: lambda = 0");
  Rational r = p.mu / p.lambda;
  Rational v = pow(p.q, phi_exp(beta - gamma, gamma)) * pow(r, g) * qpoch(p.lambda, p.q, g) * qpoch(r, p.q, b - g) / den;
  for (std::size_t i = 0; i < beta.size() && !is_zero(v); ++i) v *= qbinom(beta[i], gamma[i], p.q);
  return v;
}

int gauge_exponent(const MultiIndex& g, const MultiIndex& d, const MultiIndex& a, const MultiIndex& b) {
  return phi_exp(d, g) - phi_exp(a, b);
}

namespace {

SparseOperator apply_gauge(SparseOperator op, const Rational& q) {
  SparseOperator out(op.dom, op.cod);
  for (std::size_t j = 0; j < op.mat.cols(); ++j) {
    const State& in = (*op.dom)[j];
    for (auto& [i, v] : op.mat.column(j)) {
      const State& o = (*op.cod)[i];
      out.mat.set(i, j, v * pow(q, gauge_exponent(o[0], o[1], in[0], in[1])));
    }
  }
  return out;
}

}  // namespace

SFamily::SFamily(int l, int m, Rational q, int n) : R_(EpsilonSeq::zeros(static_cast<std::size_t>(n) + 1), l, m, std::move(q)) {
  if (n < 1) throw std::invalid_argument("SFamily: n must be >= 1");
}

SparseOperator SFamily::at(const Rational& z) const { return apply_gauge(R_.at(z), R_.q()); }
SparseOperator SFamily::derivative_at(const Rational& z) const { return apply_gauge(R_.derivative_at(z), R_.q()); }

SparseOperator s_gauge(int l, int m, const Rational& z, const Rational& q, int n) { return SFamily(l, m, q, n).at(z); }

namespace {

MultiIndex drop_last(const MultiIndex& a) {
  std::vector<int> v(a.data().begin(), a.data().end() - 1);
  return MultiIndex(std::move(v));
}

}  // namespace

SparseOperator factorized_S(int l, int m, const Rational& q, int n) {
  if (l > m) throw std::invalid_argument("factorized_S: requires l <= m");
  auto basis = make_basis(pair_states(EpsilonSeq::zeros(static_cast<std::size_t>(n) + 1), l, m));
  SparseOperator op(basis, basis);
  Rational q2 = q * q;
  PhiParams p{q2, pow(q, -2 * l), pow(q, -2 * m)};
  for (std::size_t j = 0; j < basis->size(); ++j) {
    const State& in = (*basis)[j];
    MultiIndex tot = in[0] + in[1];
    for (auto& g : enumerate_Bl(n, l)) {
      MultiIndex d = tot - g;
      if (!d.nonnegative()) continue;
      Rational v = phi_weight(drop_last(g), drop_last(in[1]), p);
      if (!is_zero(v)) op.mat.set(basis->at({g, d}), j, v);
    }
  }
  return op;
}

bool eps_valid(const MultiIndex& a, const EpsilonSeq& eps) {
  if (eps.size() == 0) return true;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (eps[i] && a[i] > 1) return false;
  return true;
}

Kernel2 script_S_kernel(const PhiParams& p, const EpsilonSeq& eps) {
  return [p, eps](const MultiIndex& a, const MultiIndex& b, std::vector<LocalTerm>& out) {
    MultiIndex tot = a + b;
    for (auto& g : enumerate_dominated(b)) {
      MultiIndex d = tot - g;
      if (!eps_valid(g, eps) || !eps_valid(d, eps)) continue;
      Rational v = phi_weight(g, b, p);
      if (!is_zero(v)) out.push_back({g, d, v});
    }
  };
}

namespace {

SparseOperator block_operator(const Kernel2& k, const MultiIndex& weight, const EpsilonSeq& eps) {
  std::vector<State> states;
  for (auto& a : enumerate_dominated(weight)) {
    MultiIndex b = weight - a;
    if (eps_valid(a, eps) && eps_valid(b, eps)) states.push_back({a, b});
  }
  auto basis = make_basis(std::move(states));
  SparseOperator op(basis, basis);
  std::vector<LocalTerm> terms;
  for (std::size_t j = 0; j < basis->size(); ++j) {
    terms.clear();
    k((*basis)[j][0], (*basis)[j][1], terms);
    for (auto& t : terms) op.mat.add(basis->at({t.out1, t.out2}), j, t.value);
  }
  return op;
}

}  // namespace

SparseOperator script_S(const Rational& lambda, const Rational& mu, const Rational& q, int n, const MultiIndex& weight) {
  if (static_cast<int>(weight.size()) != n) throw std::invalid_argument("script_S: weight must have n components");
  return block_operator(script_S_kernel({q, lambda, mu}), weight, {});
}

SparseOperator script_S_eps(const EpsilonSeq& eps, const Rational& lambda, const Rational& mu, const Rational& q,
                            const MultiIndex& weight) {
  if (weight.size() != eps.size()) throw std::invalid_argument("script_S_eps: weight and eps lengths differ");
  return block_operator(script_S_kernel({q, lambda, mu}, eps), weight, eps);
}

int psi_exponent(const MultiIndex& a, const MultiIndex& b, const MultiIndex& g) {
  return phi_exp(a, b - g) + phi_exp(b - g, g);
}

SparseOperator factorized_R_eps(const EpsilonSeq& eps, int l, int m, const Rational& q) {
  if (l > m) throw std::invalid_argument("factorized_R_eps: requires l <= m");
  int kappa = eps.kappa();
  if (kappa < 0) throw std::invalid_argument("factorized_R_eps: eps must have the shape (1^kappa, 0^rest)");
  int np1 = static_cast<int>(eps.size());
  bool full = kappa == np1;
  if (full && m > np1) throw std::invalid_argument("factorized_R_eps: m exceeds n+1 for the all-ones sequence");
  auto basis = make_basis(pair_states(eps, l, m));
  SparseOperator op(basis, basis);
  Rational q2 = q * q;
  Rational pre = full ? Rational(1) : Rational(1 / qbinom(m, l, q2));
  for (std::size_t j = 0; j < basis->size(); ++j) {
    const State& in = (*basis)[j];
    MultiIndex tot = in[0] + in[1];
    for (auto& g : enumerate_eps_basis(eps, l)) {
      MultiIndex d = tot - g;
      if (!d.nonnegative() || !basis->find({g, d})) continue;
      Rational v = pre * pow(q, psi_exponent(in[0], in[1], g) + (full ? l * (l - m) : 0));
      for (std::size_t i = 0; i < g.size() && !is_zero(v); ++i) v *= qbinom(in[1][i], g[i], q2);
      if (!is_zero(v)) op.mat.set(basis->at({g, d}), j, v);
    }
  }
  return op;
}

CheckReport verify_stu(const SparseOperator& op) {
  CheckReport rep{"sum-to-unity"};
  auto sums = op.mat.column_sums();
  for (std::size_t j = 0; j < sums.size(); ++j) {
    ++rep.checked;
    if (sums[j] != 1) rep.fail("column " + state_str((*op.dom)[j]) + " sums to " + to_string(sums[j]));
  }
  return rep;
}

CheckReport compare_operators(const SparseOperator& a, const SparseOperator& b, const std::string& name) {
  CheckReport rep{name};
  if (!same_shape(a, b)) {
    rep.fail("operators act on different bases");
    return rep;
  }
  for (std::size_t j = 0; j < a.mat.cols(); ++j) {
    ++rep.checked;
    if (a.mat.column(j) == b.mat.column(j)) continue;
    for (std::size_t i = 0; i < a.mat.rows(); ++i) {
      Rational x = a.mat.get(i, j), y = b.mat.get(i, j);
      if (x != y) {
        rep.fail("entry out " + state_str((*a.cod)[i]) + " in " + state_str((*a.dom)[j]) + ": " + to_string(x) +
                 " vs " + to_string(y));
        break;
      }
    }
  }
  return rep;
}

CheckReport verify_triple(const Kernel2& x12, const Kernel2& x13, const Kernel2& x23, const std::vector<State>& inputs,
                          const std::string& name) {
  CheckReport rep{name};
  for (auto& s : inputs) {
    SparseVec v{{s, Rational(1)}};
    SparseVec lhs = apply_kernel(x12, 0, 1, apply_kernel(x13, 0, 2, apply_kernel(x23, 1, 2, v)));
    SparseVec rhs = apply_kernel(x23, 1, 2, apply_kernel(x13, 0, 2, apply_kernel(x12, 0, 1, v)));
    ++rep.checked;
    std::string d = first_difference(lhs, rhs);
    if (!d.empty()) {
      rep.fail("input " + state_str(s) + ": " + d);
      break;
    }
  }
  return rep;
}

Rational random_rational(std::mt19937_64& rng, const Rational& lo, const Rational& hi, int den) {
  if (!(lo < hi)) throw std::invalid_argument("random_rational: empty interval");
  std::uniform_int_distribution<int> dd(2, den);
  for (;;) {
    int d = dd(rng);
    Rational a = lo * d, b = hi * d;
    mpz_class first;
    mpz_fdiv_q(first.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    first += 1;
    mpz_class last;
    mpz_cdiv_q(last.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    last -= 1;
    if (first > last) continue;
    mpz_class span = last - first + 1;
    unsigned long s = span.fits_ulong_p() ? span.get_ui() : 1000000UL;
    std::uniform_int_distribution<unsigned long> pick(0, s - 1);
    Rational r(mpz_class(first + pick(rng)), d);
    r.canonicalize();
    return r;
  }
}

namespace {

void bounded_rec(int sites, const MultiIndex& left, const EpsilonSeq& eps, State& cur, std::vector<State>& out) {
  if (static_cast<int>(cur.size()) == sites) {
    out.push_back(cur);
    return;
  }
  for (auto& a : enumerate_dominated(left)) {
    if (!eps_valid(a, eps)) continue;
    cur.push_back(a);
    bounded_rec(sites, left - a, eps, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<State> bounded_states(int sites, const MultiIndex& bound, const EpsilonSeq& eps) {
  std::vector<State> out;
  State cur;
  bounded_rec(sites, bound, eps, cur, out);
  return out;
}

CheckReport verify_ybe_script_S(int n, int max_weight, const YbeOptions& opt, const EpsilonSeq& eps) {
  std::string name = eps.size() ? "ybe script-S eps=" + eps.str() : "ybe script-S";
  if (eps.size() && static_cast<int>(eps.size()) != n) throw std::invalid_argument("verify_ybe_script_S: eps length must be n");
  std::mt19937_64 rng(opt.seed);
  MultiIndex bound(std::vector<int>(static_cast<std::size_t>(n), max_weight));
  auto inputs = bounded_states(3, bound, eps);
  CheckReport total{name};
  for (int t = 0; t < opt.trials; ++t) {
    Rational q = t == 0 ? opt.q : random_rational(rng, Rational(1, 10), Rational(9, 10));
    Rational nu[3];
    for (auto& x : nu) x = random_rational(rng, Rational(-3), Rational(3), 23);
    std::ostringstream os;
    os << "q=" << to_string(q) << " nu=(" << to_string(nu[0]) << "," << to_string(nu[1]) << "," << to_string(nu[2]) << ")";
    CheckReport r;
    try {
      r = verify_triple(script_S_kernel({q, nu[0], nu[1]}, eps), script_S_kernel({q, nu[0], nu[2]}, eps),
                        script_S_kernel({q, nu[1], nu[2]}, eps), inputs, name);
    } catch (const PoleError&) {
      --t;  // resample away from the pole
      continue;
    }
    total.checked += r.checked;
    if (!r.pass) total.fail(os.str() + " " + r.witness);
  }
  return total;
}

namespace {

template <class Family>
CheckReport ybe_over_sizes(const std::string& name, int max_size, const YbeOptions& opt,
                           const std::function<Family(int, int, const Rational&)>& make,
                           const std::function<std::vector<MultiIndex>(int)>& local) {
  std::mt19937_64 rng(opt.seed);
  CheckReport total{name};
  for (int t = 0; t < opt.trials; ++t) {
    Rational q = t == 0 ? opt.q : random_rational(rng, Rational(1, 10), Rational(9, 10));
    Rational z[3];
    for (auto& x : z) x = random_rational(rng, Rational(1, 5), Rational(5), 19);
    try {
      for (int k = 1; k <= max_size; ++k)
        for (int l = 1; l <= max_size; ++l)
          for (int m = 1; m <= max_size; ++m) {
            auto x12 = std::make_shared<const SparseOperator>(make(k, l, q).at(z[0] / z[1]));
            auto x13 = std::make_shared<const SparseOperator>(make(k, m, q).at(z[0] / z[2]));
            auto x23 = std::make_shared<const SparseOperator>(make(l, m, q).at(z[1] / z[2]));
            std::vector<State> inputs;
            for (auto& a : local(k))
              for (auto& b : local(l))
                for (auto& c : local(m)) inputs.push_back({a, b, c});
            auto r = verify_triple(kernel_of(x12), kernel_of(x13), kernel_of(x23), inputs, name);
            total.checked += r.checked;
            if (!r.pass) {
              std::ostringstream os;
              os << "q=" << to_string(q) << " z=(" << to_string(z[0]) << "," << to_string(z[1]) << ","
                 << to_string(z[2]) << ") k,l,m=" << k << "," << l << "," << m << " " << r.witness;
              total.fail(os.str());
            }
          }
    } catch (const PoleError&) {
      --t;
    }
  }
  return total;
}

}  // namespace

CheckReport verify_ybe_S(int n, int max_size, const YbeOptions& opt) {
  return ybe_over_sizes<SFamily>(
      "ybe S", max_size, opt, [n](int a, int b, const Rational& q) { return SFamily(a, b, q, n); },
      [n](int l) { return enumerate_Bl(n, l); });
}

CheckReport verify_ybe_R(const EpsilonSeq& eps, int max_size, const YbeOptions& opt) {
  int cap = eps.all_ones() ? std::min(max_size, static_cast<int>(eps.size())) : max_size;
  return ybe_over_sizes<RMatrixFamily>(
      "ybe R eps=" + eps.str(), cap, opt, [eps](int a, int b, const Rational& q) { return RMatrixFamily(eps, a, b, q); },
      [eps](int l) { return enumerate_eps_basis(eps, l); });
}

CheckReport explore_inversion(const Rational& lambda, const Rational& mu, const Rational& q, int n,
                              const MultiIndex& weight) {
  auto a = script_S(lambda, mu, q, n, weight);
  auto b = script_S(mu, lambda, q, n, weight);
  // P: |alpha, beta> -> |beta, alpha>, which maps the block to itself
  SparseOperator P(a.dom, a.dom);
  for (std::size_t j = 0; j < a.dom->size(); ++j) {
    const State& s = (*a.dom)[j];
    P.mat.set(a.dom->at({s[1], s[0]}), j, 1);
  }
  auto prod = compose(compose(P, b), compose(P, a));
  SparseOperator id(a.dom, a.dom);
  id.mat = SparseMatrix::identity(a.dom->size());
  auto rep = compare_operators(prod, id, "inversion (exploratory)");
  return rep;
}

}  // namespace zrp
