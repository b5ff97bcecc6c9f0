#include "zrplab/tetra.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace zrp {

Rational r3d(int a, int b, int c, int i, int j, int k, const Rational& q) {
  if (a < 0 || b < 0 || c < 0 || i < 0 || j < 0 || k < 0) return 0;
  if (a + b != i + j || b + c != j + k) return 0;
  Rational p = q * q;
  auto s = TruncatedSeries::pochhammer(-pow(q, 2 + a + c), p, b) * TruncatedSeries::pochhammer(-pow(q, -i - k), p, b) *
           TruncatedSeries::inverse_pochhammer(-pow(q, a - c), p, b) *
           TruncatedSeries::inverse_pochhammer(-pow(q, c - a), p, b);
  return pow(q, static_cast<long>(i) * k + b) * s[b];
}

Rational l3d(int a, int b, int c, int i, int j, int k, const Rational& q) {
  for (int x : {a, b, i, j})
    if (x != 0 && x != 1) throw std::invalid_argument("l3d: two-dimensional index outside {0,1}");
  if (c < 0 || k < 0) return 0;
  if (a == i && b == j) {
    if (c != k) return 0;
    if (a == b) return 1;
    if (a == 0) return -pow(q, k + 1);  // (01|01)
    return pow(q, k);                   // (10|10)
  }
  if (a == 0 && b == 1 && i == 1 && j == 0) return c == k - 1 ? Rational(1 - pow(q, 2 * k)) : Rational(0);
  if (a == 1 && b == 0 && i == 0 && j == 1) return c == k + 1 ? Rational(1) : Rational(0);
  return 0;
}

const Rational& R3DCache::operator()(int a, int b, int c, int i, int j, int k) const {
  std::array<int, 6> key{a, b, c, i, j, k};
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  return memo_.emplace(key, r3d(a, b, c, i, j, k, q_)).first->second;
}

namespace {

using Tuple6 = std::array<int, 6>;
using Vec6 = std::map<Tuple6, Rational>;

Vec6 apply_layer(const LayerFn& f, bool two_dim, int x, int y, int w, const Vec6& v) {
  Vec6 out;
  for (auto& [s, val] : v) {
    int i = s[x], j = s[y], k = s[w];
    for (int b = 0; b <= i + j; ++b) {
      int a = i + j - b, c = j + k - b;
      if (c < 0) continue;
      if (two_dim && (a > 1 || b > 1)) continue;
      Rational e = f(a, b, c, i, j, k);
      if (is_zero(e)) continue;
      Tuple6 t = s;
      t[x] = a;
      t[y] = b;
      t[w] = c;
      auto [it, fresh] = out.emplace(t, e * val);
      if (!fresh) it->second += e * val;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

std::string tuple_str(const Tuple6& t) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < 6; ++i) os << (i ? "," : "") << t[i];
  os << ')';
  return os.str();
}

}  // namespace

TetraReport check_tetrahedron(int eps_bit, int cutoff, const Rational& q, LayerFn layer) {
  if (cutoff < 1) throw std::invalid_argument("check_tetrahedron: cutoff must be >= 1");
  if (eps_bit != 0 && eps_bit != 1) throw std::invalid_argument("check_tetrahedron: eps must be 0 or 1");
  auto cache = std::make_shared<R3DCache>(q);
  LayerFn rr = [cache](int a, int b, int c, int i, int j, int k) { return (*cache)(a, b, c, i, j, k); };
  if (!layer) {
    if (eps_bit == 0)
      layer = rr;
    else
      layer = [q](int a, int b, int c, int i, int j, int k) { return l3d(a, b, c, i, j, k, q); };
  }
  bool two = eps_bit == 1;
  int top = two ? 1 : cutoff;
  TetraReport rep;
  for (int n1 = 0; n1 <= top; ++n1)
    for (int n2 = 0; n2 <= top; ++n2)
      for (int n3 = 0; n3 <= top; ++n3) {
        if (n1 + n2 + n3 > cutoff) continue;
        for (int n4 = 0; n2 + n3 + n4 <= cutoff; ++n4)
          for (int n5 = 0; n2 + n3 + n4 + n5 <= cutoff; ++n5)
            for (int n6 = 0; n3 + n5 + n6 <= cutoff; ++n6) {
              Tuple6 in{n1, n2, n3, n4, n5, n6};
              Vec6 v{{in, Rational(1)}};
              // positions are 0-based: 1..6 -> 0..5
              Vec6 lhs = apply_layer(rr, false, 3, 4, 5, v);
              lhs = apply_layer(layer, two, 1, 2, 5, lhs);
              lhs = apply_layer(layer, two, 0, 2, 4, lhs);
              lhs = apply_layer(layer, two, 0, 1, 3, lhs);
              Vec6 rhs = apply_layer(layer, two, 0, 1, 3, v);
              rhs = apply_layer(layer, two, 0, 2, 4, rhs);
              rhs = apply_layer(layer, two, 1, 2, 5, rhs);
              rhs = apply_layer(rr, false, 3, 4, 5, rhs);
              ++rep.inputs_checked;
              if (lhs != rhs && rep.pass) {
                rep.pass = false;
                std::ostringstream os;
                os << "input " << tuple_str(in);
                for (auto& [t, x] : lhs) {
                  auto it = rhs.find(t);
                  Rational y = it == rhs.end() ? Rational(0) : it->second;
                  if (x != y) {
                    os << " output " << tuple_str(t) << ": " << to_string(x) << " vs " << to_string(y);
                    break;
                  }
                }
                rep.witness = os.str();
              }
            }
      }
  return rep;
}

std::vector<State> pair_states(const EpsilonSeq& eps, int l, int m) {
  std::vector<State> out;
  auto bl = enumerate_eps_basis(eps, l);
  auto bm = enumerate_eps_basis(eps, m);
  for (auto& a : bl)
    for (auto& b : bm) out.push_back({a, b});
  return out;
}

RMatrixFamily::RMatrixFamily(EpsilonSeq eps, int l, int m, Rational q)
    : eps_(std::move(eps)), l_(l), m_(m), q_(std::move(q)) {
  if (l < 0 || m < 0) throw std::invalid_argument("build_R: l and m must be nonnegative");
  int np1 = static_cast<int>(eps_.size());
  if (eps_.all_ones() && (l > np1 || m > np1))
    throw std::invalid_argument("build_R: for an all-ones sequence l and m must be <= n+1");
  if (is_zero(q_) || q_ == 1 || q_ == -1) throw std::invalid_argument("build_R: q must avoid 0 and +-1");
  basis_ = make_basis(pair_states(eps_, l, m));
  cols_.resize(basis_->size());
  R3DCache cache(q_);
  RatFunc rho = normalization();
  for (std::size_t j = 0; j < basis_->size(); ++j) {
    const auto& in = (*basis_)[j];
    for (std::size_t i = 0; i < basis_->size(); ++i) {
      const auto& out = (*basis_)[i];
      if (out[0] + out[1] != in[0] + in[1]) continue;
      RatFunc f = trace_entry(out[0], out[1], in[0], in[1], cache);
      if (f.is_zero()) continue;
      cols_[j].emplace_back(i, f * rho);
    }
  }
}

RatFunc RMatrixFamily::normalization() const {
  if (eps_.all_ones()) {
    Rational pre = pow(Rational(-q_), -std::max(m_ - l_, 0));
    return RatFunc(Poly::one_minus(pow(q_, std::abs(l_ - m_))) * pre, Poly::constant(1));
  }
  Poly num = Poly::constant(1), den = Poly::constant(1);
  for (int t = 0; t <= m_; ++t) num = num * Poly::one_minus(pow(q_, l_ - m_ + 2 * t));
  for (int t = 0; t < m_; ++t) den = den * Poly::linear_root(pow(q_, l_ - m_ + 2 + 2 * t));
  return RatFunc(num, den);
}

RatFunc RMatrixFamily::trace_entry(const MultiIndex& g, const MultiIndex& d, const MultiIndex& a,
                                   const MultiIndex& b, const R3DCache& r) const {
  std::size_t L = eps_.size();
  // auxiliary offsets: c_i = c_0 + off[i]
  std::vector<int> off(L + 1, 0);
  for (std::size_t i = 1; i <= L; ++i) off[i] = off[i - 1] + d[i - 1] - b[i - 1];
  if (off[L] != 0) return RatFunc();
  int cstar = 0;
  for (int o : off) cstar = std::max(cstar, -o);
  // exponent range of F(c0) as an exponential polynomial in q^{c0}
  int lo = 0, hi = 0;
  for (std::size_t i = 0; i < L; ++i) {
    if (eps_[i] == 0) {
      lo += a[i] - d[i];
      hi += a[i] + d[i];
    } else {
      int gi = g[i], di = d[i], ai = a[i], bi = b[i];
      if ((gi == 0 && di == 1 && ai == 0 && bi == 1) || (gi == 1 && di == 0 && ai == 1 && bi == 0)) {
        lo += 1;
        hi += 1;
      } else if (gi == 0 && di == 1 && ai == 1 && bi == 0) {
        hi += 2;
      }
    }
  }
  int K = hi - lo + 1;
  std::vector<Rational> vals;
  vals.reserve(static_cast<std::size_t>(K));
  bool any = false;
  for (int t = 0; t < K; ++t) {
    int c0 = cstar + t;
    Rational f = 1;
    for (std::size_t i = 0; i < L && !is_zero(f); ++i) {
      int cu = c0 + off[i], cl = c0 + off[i + 1];
      if (eps_[i] == 0)
        f *= r(g[i], d[i], cu, a[i], b[i], cl);
      else
        f *= l3d(g[i], d[i], cu, a[i], b[i], cl, q_);
    }
    if (!is_zero(f)) any = true;
    vals.push_back(f);
  }
  if (!any) return RatFunc();
  RatFunc s = resum_exp_poly(vals, lo, hi, q_);
  return RatFunc(s.num() * Poly::monomial(cstar), s.den());
}

SparseOperator RMatrixFamily::at(const Rational& z) const {
  SparseOperator op(basis_, basis_);
  for (std::size_t j = 0; j < cols_.size(); ++j)
    for (auto& [i, f] : cols_[j]) op.mat.set(i, j, f.at(z));
  return op;
}

SparseOperator RMatrixFamily::derivative_at(const Rational& z) const {
  SparseOperator op(basis_, basis_);
  for (std::size_t j = 0; j < cols_.size(); ++j)
    for (auto& [i, f] : cols_[j]) op.mat.set(i, j, f.derivative_at(z));
  return op;
}

RatFunc RMatrixFamily::entry(const State& out, const State& in) const {
  auto i = basis_->find(out);
  auto j = basis_->find(in);
  if (!i || !j) return RatFunc();
  for (auto& [r, f] : cols_[*j])
    if (r == *i) return f;
  return RatFunc();
}

SparseOperator build_R(const EpsilonSeq& eps, int l, int m, const Rational& z, const Rational& q) {
  return RMatrixFamily(eps, l, m, q).at(z);
}

}  // namespace zrp
