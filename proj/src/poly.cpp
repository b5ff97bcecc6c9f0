#include "zrplab/poly.hpp"

#include <stdexcept>

namespace zrp {

Poly Poly::monomial(int deg, const Rational& a) {
  std::vector<Rational> c(static_cast<std::size_t>(deg) + 1);
  c.back() = a;
  return Poly(std::move(c));
}

void Poly::trim() {
  while (!c_.empty() && zrp::is_zero(c_.back())) c_.pop_back();
}

Rational Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[static_cast<std::size_t>(i)];
}

Rational Poly::operator()(const Rational& z) const {
  Rational r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = r * z + c_[i];
  return r;
}

Poly Poly::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
  return Poly(std::move(d));
}

Poly Poly::deflate(const Rational& root) const {
  if (c_.empty()) return {};
  std::vector<Rational> q(c_.size() - 1);
  Rational carry = 0;
  for (std::size_t i = c_.size(); i-- > 1;) {
    carry = carry * root + c_[i];
    q[i - 1] = carry;
  }
  if (!zrp::is_zero(carry * root + c_[0])) throw std::logic_error("deflate: not a root");
  return Poly(std::move(q));
}

Poly Poly::truncated(int order) const {
  std::vector<Rational> c(c_.begin(), c_.begin() + std::min<std::ptrdiff_t>(order, static_cast<std::ptrdiff_t>(c_.size())));
  return Poly(std::move(c));
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Rational> c(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
  return Poly(std::move(c));
}

Poly Poly::operator-(const Poly& o) const { return *this + o * Rational(-1); }

Poly Poly::operator*(const Poly& o) const {
  if (c_.empty() || o.c_.empty()) return {};
  std::vector<Rational> c(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (zrp::is_zero(c_[i])) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  }
  return Poly(std::move(c));
}

Poly Poly::operator*(const Rational& a) const {
  std::vector<Rational> c(c_);
  for (auto& x : c) x *= a;
  return Poly(std::move(c));
}

Poly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("interpolate: size mismatch");
  // Newton divided differences
  std::size_t n = xs.size();
  std::vector<Rational> dd(ys);
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = n - 1; i >= k; --i) {
      Rational den = xs[i] - xs[i - k];
      if (zrp::is_zero(den)) throw std::invalid_argument("interpolate: repeated node");
      dd[i] = (dd[i] - dd[i - 1]) / den;
      if (i == k) break;
    }
  Poly p;
  for (std::size_t i = n; i-- > 0;) p = p * Poly::linear_root(xs[i]) + Poly::constant(dd[i]);
  return p;
}

namespace {

void divmod(const Poly& a, const Poly& b, Poly& quo, Poly& rem) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> r(a.coeffs());
  int db = b.degree();
  std::vector<Rational> q(std::max(0, a.degree() - db + 1));
  Rational lead = b.coeff(db);
  for (int i = a.degree(); i >= db; --i) {
    Rational f = r[static_cast<std::size_t>(i)] / lead;
    q[static_cast<std::size_t>(i - db)] = f;
    if (zrp::is_zero(f)) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= f * b.coeff(j);
  }
  quo = Poly(std::move(q));
  rem = Poly(std::move(r));
}

}  // namespace

Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a * (Rational(1) / a.coeff(a.degree()));
}

Poly poly_divexact(const Poly& a, const Poly& b) {
  Poly q, r;
  divmod(a, b, q, r);
  if (!r.is_zero()) throw std::logic_error("poly_divexact: nonzero remainder");
  return q;
}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

void RatFunc::reduced_at(const Rational& z, Poly& n, Poly& d) const {
  n = num_;
  d = den_;
  while (zrp::is_zero(d(z))) {
    if (!zrp::is_zero(n(z))) throw PoleError("pole at z = " + to_string(z));
    n = n.deflate(z);
    d = d.deflate(z);
  }
}

Rational RatFunc::at(const Rational& z) const {
  if (num_.is_zero()) return 0;
  Poly n, d;
  reduced_at(z, n, d);
  return n(z) / d(z);
}

Rational RatFunc::derivative_at(const Rational& z) const {
  if (num_.is_zero()) return 0;
  Poly n, d;
  reduced_at(z, n, d);
  Rational dv = d(z);
  return (n.derivative()(z) * dv - n(z) * d.derivative()(z)) / (dv * dv);
}

RatFunc resum_exp_poly(const std::vector<Rational>& values, int lo, int hi, const Rational& q) {
  int K = hi - lo + 1;
  if (K <= 0) return RatFunc();
  if (static_cast<int>(values.size()) < K) throw std::invalid_argument("resum_exp_poly: too few samples");
  Poly D = Poly::constant(1);
  for (int s = lo; s <= hi; ++s) D = D * Poly::one_minus(pow(q, s));
  std::vector<Rational> g(values.begin(), values.begin() + K);
  Poly P = (D * Poly(std::move(g))).truncated(K);
  return RatFunc(P, D);
}

}  // namespace zrp

namespace zrp {

RatFunc reconstruct_rational(const std::function<std::optional<Rational>(const Rational&)>& f, int max_points,
                             int confirm, const Rational& start) {
  std::vector<Rational> xs, a;
  auto convergent = [&](const Rational& t) -> std::optional<Rational> {
    Rational v = a.back();
    for (std::size_t j = a.size() - 1; j-- > 0;) {
      if (zrp::is_zero(v)) return std::nullopt;
      v = a[j] + (t - xs[j]) / v;
    }
    return v;
  };
  int used = 0, streak = 0;
  for (Rational t = start; used < max_points; t += 1) {
    auto y = f(t);
    if (!y) continue;
    ++used;
    if (!a.empty()) {
      auto c = convergent(t);
      if (c && *c == *y) {
        if (++streak >= confirm) break;
        continue;
      }
    }
    streak = 0;
    // inverse differences of the new point against the stored nodes
    Rational phi = *y;
    bool ok = true;
    for (std::size_t j = 0; j < a.size(); ++j) {
      Rational d = phi - a[j];
      if (zrp::is_zero(d)) {
        ok = false;
        break;
      }
      phi = (t - xs[j]) / d;
    }
    if (!ok) continue;
    xs.push_back(t);
    a.push_back(phi);
  }
  if (streak < confirm) throw std::runtime_error("reconstruct_rational: no convergence within the sample budget");
  Poly N = Poly::constant(a.back()), D = Poly::constant(1);
  for (std::size_t j = a.size() - 1; j-- > 0;) {
    Poly n2 = N * a[j] + Poly::linear_root(xs[j]) * D;
    D = std::move(N);
    N = std::move(n2);
  }
  Poly g = poly_gcd(N, D);
  if (!g.is_zero() && g.degree() > 0) {
    N = poly_divexact(N, g);
    D = poly_divexact(D, g);
  }
  Rational lead = D.coeff(D.degree());
  return RatFunc(N * (1 / lead), D * (1 / lead));
}

Rational MPoly::operator()(const std::vector<Rational>& x) const {
  Rational s = 0;
  for (auto& [e, c] : terms) {
    Rational m = c;
    for (std::size_t i = 0; i < e.size(); ++i) m *= pow(x[i], e[i]);
    s += m;
  }
  return s;
}

std::string MPoly::str(const std::vector<std::string>& names) const {
  if (terms.empty()) return "0";
  std::string out;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    auto& [e, c] = *it;
    Rational mag = abs(c);
    out += out.empty() ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + ");
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += i < names.size() ? names[i] : "x" + std::to_string(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) out += to_string(mag);
    else if (mag == 1) out += mono;
    else out += to_string(mag) + "*" + mono;
  }
  return out;
}

std::vector<MPoly> interpolate_grid(const std::vector<std::vector<Rational>>& axes,
                                    const std::vector<std::vector<Rational>>& values) {
  std::size_t V = axes.size(), total = 1;
  for (auto& ax : axes) total *= ax.size();
  if (values.size() != total) throw std::invalid_argument("interpolate_grid: value count does not match the grid");
  if (total == 0) return {};
  std::size_t outs = values[0].size();
  std::vector<std::size_t> stride(V, 1);
  for (std::size_t v = V; v-- > 1;) stride[v - 1] = stride[v] * axes[v].size();
  std::vector<MPoly> res(outs);
  for (std::size_t o = 0; o < outs; ++o) {
    std::vector<Rational> arr(total);
    for (std::size_t g = 0; g < total; ++g) arr[g] = values[g][o];
    // values -> monomial coefficients, one axis at a time
    for (std::size_t v = 0; v < V; ++v) {
      std::size_t n = axes[v].size();
      for (std::size_t base = 0; base < total; ++base) {
        if ((base / stride[v]) % n != 0) continue;
        std::vector<Rational> ys(n);
        for (std::size_t i = 0; i < n; ++i) ys[i] = arr[base + i * stride[v]];
        Poly p = interpolate(axes[v], ys);
        for (std::size_t i = 0; i < n; ++i) arr[base + i * stride[v]] = p.coeff(static_cast<int>(i));
      }
    }
    for (std::size_t g = 0; g < total; ++g) {
      if (zrp::is_zero(arr[g])) continue;
      std::vector<int> e(V);
      for (std::size_t v = 0; v < V; ++v) e[v] = static_cast<int>((g / stride[v]) % axes[v].size());
      res[o].terms[e] = arr[g];
    }
  }
  return res;
}

}  // namespace zrp
