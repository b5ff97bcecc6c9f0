#include "zrplab/qkit.hpp"

#include <stdexcept>

namespace zrp {

Rational qpoch(const Rational& z, const Rational& q, int m) {
  Rational r = 1, t = z;
  for (int j = 0; j < m; ++j) {
    r *= 1 - t;
    t *= q;
  }
  return r;
}

Rational qbinom(int m, int k, const Rational& q) {
  if (k < 0 || k > m) return 0;
  // q-Pascal keeps everything polynomial, so q = 1 (or a root of unity)
  // needs no special care.
  std::vector<Rational> row(static_cast<std::size_t>(k) + 1);
  row[0] = 1;
  for (int i = 1; i <= m; ++i) {
    int top = std::min(i, k);
    for (int j = top; j >= 1; --j) {
      // C(i,j) = C(i-1,j-1) + q^j C(i-1,j)
      row[static_cast<std::size_t>(j)] =
          row[static_cast<std::size_t>(j) - 1] + pow(q, j) * row[static_cast<std::size_t>(j)];
    }
  }
  return row[static_cast<std::size_t>(k)];
}

int phi_exp(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("phi_exp: length mismatch");
  int r = 0, tail = 0;
  for (std::size_t j = a.size(); j-- > 0;) {
    r += a[j] * tail;
    tail += b[j];
  }
  return r;
}

EpsilonSeq::EpsilonSeq(std::vector<int> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("epsilon sequence must be nonempty");
  for (int b : bits_)
    if (b != 0 && b != 1) throw std::invalid_argument("epsilon bits must be 0 or 1");
}

EpsilonSeq EpsilonSeq::parse(const std::string& s) {
  std::vector<int> bits;
  for (char c : s) {
    if (c == ',' || c == ' ') continue;
    if (c != '0' && c != '1') throw std::invalid_argument("eps: expected a string of 0/1, got '" + s + "'");
    bits.push_back(c - '0');
  }
  return EpsilonSeq(bits);
}

bool EpsilonSeq::all_ones() const {
  for (int b : bits_)
    if (!b) return false;
  return true;
}

bool EpsilonSeq::all_zeros() const {
  for (int b : bits_)
    if (b) return false;
  return true;
}

int EpsilonSeq::kappa() const {
  std::size_t k = 0;
  while (k < bits_.size() && bits_[k] == 1) ++k;
  for (std::size_t i = k; i < bits_.size(); ++i)
    if (bits_[i] == 1) return -1;
  return static_cast<int>(k);
}

std::string EpsilonSeq::str() const {
  std::string s;
  for (int b : bits_) s += static_cast<char>('0' + b);
  return s;
}

namespace {

void compositions_rec(std::size_t pos, int left, std::vector<int>& cur, std::vector<MultiIndex>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = left;
    out.emplace_back(cur);
    return;
  }
  for (int x = left; x >= 0; --x) {
    cur[pos] = x;
    compositions_rec(pos + 1, left - x, cur, out);
  }
}

void dominated_rec(std::size_t pos, const MultiIndex& bound, std::vector<int>& cur,
                   std::vector<MultiIndex>& out) {
  if (pos == cur.size()) {
    out.emplace_back(cur);
    return;
  }
  for (int x = bound[pos]; x >= 0; --x) {
    cur[pos] = x;
    dominated_rec(pos + 1, bound, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_compositions(std::size_t len, int total) {
  std::vector<MultiIndex> out;
  if (len == 0) {
    if (total == 0) out.emplace_back();
    return out;
  }
  if (total < 0) return out;
  std::vector<int> cur(len, 0);
  compositions_rec(0, total, cur, out);
  return out;
}

std::vector<MultiIndex> enumerate_Bl(int n, int l) {
  if (n < 0) throw std::invalid_argument("enumerate_Bl: n < 0");
  return enumerate_compositions(static_cast<std::size_t>(n) + 1, l);
}

std::vector<MultiIndex> enumerate_eps_basis(const EpsilonSeq& eps, int l) {
  std::vector<MultiIndex> out;
  for (auto& a : enumerate_compositions(eps.size(), l)) {
    bool ok = true;
    for (std::size_t i = 0; i < eps.size(); ++i)
      if (eps[i] == 1 && a[i] > 1) ok = false;
    if (ok) out.push_back(std::move(a));
  }
  return out;
}

std::vector<MultiIndex> enumerate_dominated(const MultiIndex& bound) {
  std::vector<MultiIndex> out;
  std::vector<int> cur(bound.size(), 0);
  dominated_rec(0, bound, cur, out);
  return out;
}

TruncatedSeries::TruncatedSeries(int order, std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  c_.resize(static_cast<std::size_t>(order) + 1);
}

TruncatedSeries TruncatedSeries::one(int order) {
  TruncatedSeries s(order);
  s.c_[0] = 1;
  return s;
}

TruncatedSeries TruncatedSeries::pochhammer(const Rational& x, const Rational& p, int order) {
  // (xu;p)_inf = sum_j (-1)^j p^{j(j-1)/2} x^j u^j / (p;p)_j
  TruncatedSeries s(order);
  Rational term = 1;
  s.c_[0] = 1;
  for (int j = 1; j <= order; ++j) {
    term *= -x * pow(p, j - 1) / (1 - pow(p, j));
    s.c_[static_cast<std::size_t>(j)] = term;
  }
  return s;
}

TruncatedSeries TruncatedSeries::inverse_pochhammer(const Rational& x, const Rational& p, int order) {
  // 1/(xu;p)_inf = sum_j x^j u^j / (p;p)_j
  TruncatedSeries s(order);
  Rational term = 1;
  s.c_[0] = 1;
  for (int j = 1; j <= order; ++j) {
    term *= x / (1 - pow(p, j));
    s.c_[static_cast<std::size_t>(j)] = term;
  }
  return s;
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  if (o.order() != order()) throw std::invalid_argument("series order mismatch");
  TruncatedSeries r(order());
  for (std::size_t j = 0; j < c_.size(); ++j) r.c_[j] = c_[j] + o.c_[j];
  return r;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  if (o.order() != order()) throw std::invalid_argument("series order mismatch");
  TruncatedSeries r(order());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (is_zero(c_[i])) continue;
    for (std::size_t j = 0; i + j < c_.size(); ++j) r.c_[i + j] += c_[i] * o.c_[j];
  }
  return r;
}

TruncatedSeries TruncatedSeries::inverse() const {
  if (is_zero(c_[0])) throw std::domain_error("series inverse needs a nonzero constant term");
  TruncatedSeries r(order());
  r.c_[0] = 1 / c_[0];
  for (std::size_t k = 1; k < c_.size(); ++k) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
    r.c_[k] = -acc / c_[0];
  }
  return r;
}

std::vector<Rational> qexp_series(int order, const Rational& z, const Rational& q, QexpKind kind) {
  auto s = kind == QexpKind::pochhammer ? TruncatedSeries::pochhammer(z, q, order)
                                        : TruncatedSeries::inverse_pochhammer(z, q, order);
  std::vector<Rational> c;
  for (int j = 0; j <= order; ++j) c.push_back(s[j]);
  return c;
}

}  // namespace zrp
