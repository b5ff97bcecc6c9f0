#include "zrplab/mpf.hpp"

#include <cmath>
#include <stdexcept>

#include "zrplab/poly.hpp"
#include "zrplab/qkit.hpp"
#include "zrplab/stoch.hpp"
#include "zrplab/transfer.hpp"

namespace zrp {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

SparseMatrix mpow(const SparseMatrix& M, int e) {
  SparseMatrix r = SparseMatrix::identity(M.cols());
  for (int i = 0; i < e; ++i) r = r * M;
  return r;
}

void same_space(const FockOperator& a, const FockOperator& b) {
  if (a.factors != b.factors || a.N != b.N) throw std::invalid_argument("FockOperator: mismatched spaces");
}

}  // namespace

FockOperator FockOperator::operator*(const FockOperator& o) const {
  same_space(*this, o);
  return {factors, N, mat * o.mat};
}
FockOperator FockOperator::operator+(const FockOperator& o) const {
  same_space(*this, o);
  return {factors, N, mat + o.mat};
}
FockOperator FockOperator::operator-(const FockOperator& o) const {
  same_space(*this, o);
  return {factors, N, mat - o.mat};
}
FockOperator FockOperator::operator*(const Rational& a) const { return {factors, N, mat * a}; }

SparseMatrix qboson(QBoson op, int N, const Rational& q) {
  if (N < 1) throw std::invalid_argument("qboson: cutoff must be >= 1");
  std::size_t d = static_cast<std::size_t>(N) + 1;
  SparseMatrix M(d, d);
  for (int m = 0; m <= N; ++m) {
    auto um = static_cast<std::size_t>(m);
    switch (op) {
      case QBoson::b:
        if (m < N) M.set(um + 1, um, 1);
        break;
      case QBoson::c:
        if (m > 0) M.set(um - 1, um, 1 - pow(q, m));
        break;
      case QBoson::k:
        M.set(um, um, pow(q, m));
        break;
    }
  }
  return M;
}

FockOperator fock_identity(int factors, int N) {
  return {factors, N, SparseMatrix::identity(ipow(static_cast<std::size_t>(N) + 1, factors))};
}

FockOperator embed(const SparseMatrix& op, int factor, int factors, int N) {
  if (factor < 0 || factor >= factors) throw std::invalid_argument("embed: factor out of range");
  std::size_t d = static_cast<std::size_t>(N) + 1;
  if (op.rows() != d || op.cols() != d) throw std::invalid_argument("embed: operator cutoff does not match");
  SparseMatrix left = SparseMatrix::identity(ipow(d, factor));
  SparseMatrix right = SparseMatrix::identity(ipow(d, factors - 1 - factor));
  return {factors, N, left.kron(op).kron(right)};
}

int factor_position(int i, int j) {
  if (i < 1 || i > j) throw std::invalid_argument("factor_position: need 1 <= i <= j");
  return j * (j - 1) / 2 + i - 1;
}

std::vector<int> occupations(std::size_t index, int factors, int N) {
  std::vector<int> occ(static_cast<std::size_t>(factors));
  std::size_t d = static_cast<std::size_t>(N) + 1;
  for (int f = factors; f-- > 0;) {
    occ[static_cast<std::size_t>(f)] = static_cast<int>(index % d);
    index /= d;
  }
  return occ;
}

Rational trace(const FockOperator& X) {
  Rational s = 0;
  for (std::size_t j = 0; j < X.dim(); ++j) s += X.mat.get(j, j);
  return s;
}

Rational g_weight(const MultiIndex& alpha, const Rational& zeta, const Rational& q) {
  int w = alpha.weight();
  Rational v = pow(zeta, -w) * qpoch(zeta, q, w);
  for (std::size_t i = 0; i < alpha.size(); ++i) v /= qpoch(q, q, alpha[i]);
  return v;
}

namespace {

// k^{alpha_i^+} c^{alpha_i} for i = 0..n-2 as single-factor matrices
std::vector<SparseMatrix> K_factors(const MultiIndex& alpha, int N, const Rational& q) {
  std::vector<SparseMatrix> out;
  SparseMatrix k = qboson(QBoson::k, N, q), c = qboson(QBoson::c, N, q);
  for (std::size_t i = 0; i + 1 < alpha.size(); ++i) {
    int plus = 0;
    for (std::size_t t = i + 1; t < alpha.size(); ++t) plus += alpha[t];
    out.push_back(mpow(k, plus) * mpow(c, alpha[i]));
  }
  return out;
}

SparseMatrix kron_all(const std::vector<SparseMatrix>& parts) {
  SparseMatrix r = SparseMatrix::identity(1);
  for (auto& p : parts) r = r.kron(p);
  return r;
}

// K_alpha placed on the top factors (i, n-1) of n(n-1)/2
FockOperator K_tail(const MultiIndex& alpha, int N, const Rational& q) {
  int n = static_cast<int>(alpha.size());
  int F = factor_count(n);
  if (n < 2) return fock_identity(F, N);
  SparseMatrix lower = SparseMatrix::identity(ipow(static_cast<std::size_t>(N) + 1, factor_count(n - 1)));
  return {F, N, lower.kron(kron_all(K_factors(alpha, N, q)))};
}

// (zA)_inf or 1/(zA)_inf for nilpotent A
FockOperator op_poch(const FockOperator& A, const Rational& z, const Rational& q, bool inverse) {
  FockOperator sum = fock_identity(A.factors, A.N);
  FockOperator P = sum;
  for (int j = 1;; ++j) {
    P = P * A;
    if (P.mat.nnz() == 0) break;
    if (j > static_cast<int>(A.dim()) + 1) throw std::logic_error("op_poch: operator is not nilpotent");
    Rational coef = pow(z, j) / qpoch(q, q, j);
    if (!inverse) coef *= (j % 2 ? -1 : 1) * pow(q, j * (j - 1) / 2);
    sum = sum + P * coef;
  }
  return sum;
}

}  // namespace

FockOperator K_op(const MultiIndex& alpha, int N, const Rational& q) {
  if (alpha.size() == 0) throw std::invalid_argument("K_op: empty index");
  return {static_cast<int>(alpha.size()) - 1, N, kron_all(K_factors(alpha, N, q))};
}

FockOperator Z_recursive(const MultiIndex& alpha, const Rational& zeta, int N, const Rational& q) {
  int n = static_cast<int>(alpha.size());
  if (n == 0) throw std::invalid_argument("Z_recursive: empty index");
  if (n == 1) return fock_identity(0, N);
  int F = factor_count(n);
  std::size_t d = static_cast<std::size_t>(N) + 1;
  FockOperator out{F, N, SparseMatrix(ipow(d, F), ipow(d, F))};
  auto tailK = K_factors(alpha, N, q);
  SparseMatrix b = qboson(QBoson::b, N, q);
  std::vector<SparseMatrix> bpow;
  for (int l = 0; l <= N; ++l) bpow.push_back(mpow(b, l));
  MultiIndex l(static_cast<std::size_t>(n - 1));
  while (true) {
    Rational g = g_weight(l, zeta, q);
    if (!is_zero(g)) {
      FockOperator Xl = Z_recursive(l, zeta, N, q) * g;
      std::vector<SparseMatrix> tail;
      for (std::size_t i = 0; i < l.size(); ++i) tail.push_back(bpow[static_cast<std::size_t>(l[i])] * tailK[i]);
      out.mat = out.mat + Xl.mat.kron(kron_all(tail));
    }
    std::size_t p = 0;
    while (p < l.size() && l[p] == N) l[p++] = 0;
    if (p == l.size()) break;
    ++l[p];
  }
  return out;
}

namespace {

FockOperator Z0_closed(int n, const Rational& zeta, int N, const Rational& q) {
  int F = factor_count(n);
  FockOperator Z = fock_identity(F, N);
  if (n < 2) return Z;
  SparseMatrix b = qboson(QBoson::b, N, q), c = qboson(QBoson::c, N, q), k = qboson(QBoson::k, N, q);
  auto A = [&](int i, int j) {
    FockOperator a = embed(b, factor_position(i, j), F, N);
    if (j > 1) {
      for (int t = 1; t < i; ++t) a = a * embed(k, factor_position(t, j - 1), F, N);
      if (i < j) a = a * embed(c, factor_position(i, j - 1), F, N);
    }
    return a;
  };
  for (int j = 2; j <= n; ++j) {
    int m = j - 1;
    FockOperator Y = fock_identity(F, N);
    for (int i = 1; i <= m; ++i) Y = Y * op_poch(A(i, m), Rational(1), q, false);
    for (int i = m; i >= 1; --i) Y = Y * op_poch(A(i, m), 1 / zeta, q, true);
    Z = Z * Y;
  }
  return Z;
}

}  // namespace

FockOperator Z_closed(const MultiIndex& alpha, const Rational& zeta, int N, const Rational& q) {
  int n = static_cast<int>(alpha.size());
  if (n == 0) throw std::invalid_argument("Z_closed: empty index");
  return Z0_closed(n, zeta, N, q) * K_tail(alpha, N, q);
}

FockOperator X_op(const MultiIndex& alpha, const Rational& zeta, int N, const Rational& q) {
  return Z_closed(alpha, zeta, N, q) * g_weight(alpha, zeta, q);
}

// ---- protected products --------------------------------------------------

int protected_level(int n, int N, int bound) {
  if (N < bound) return -1;
  if (n < 2) return N;
  return (N - bound) / (n - 1);
}

namespace {

using Col = SparseMatrix::Column;

struct Boxes {
  std::vector<char> out_ok, inter_ok;
  std::vector<std::size_t> protected_cols;
};

Boxes make_boxes(int n, int N, int bound) {
  int F = factor_count(n);
  int M = protected_level(n, N, bound);
  if (M < 0) throw std::invalid_argument("protected region is empty: raise the cutoff");
  std::vector<int> level(static_cast<std::size_t>(F));
  for (int j = 1; j < n; ++j)
    for (int i = 1; i <= j; ++i) level[static_cast<std::size_t>(factor_position(i, j))] = (n - j) * M + bound;
  Boxes B;
  std::size_t dim = ipow(static_cast<std::size_t>(N) + 1, F);
  B.out_ok.resize(dim);
  B.inter_ok.resize(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    auto occ = occupations(s, F, N);
    bool o = true, in = true;
    for (std::size_t f = 0; f < occ.size(); ++f) {
      if (occ[f] > M) o = false;
      if (occ[f] > level[f]) in = false;
    }
    B.out_ok[s] = o;
    B.inter_ok[s] = in;
    if (o) B.protected_cols.push_back(s);
  }
  return B;
}

Col apply_pruned(const SparseMatrix& A, const Col& v, const std::vector<char>& keep) {
  Col r;
  for (auto& [j, x] : v)
    for (auto& [i, a] : A.column(j))
      if (keep[i]) r[i] += a * x;
  for (auto it = r.begin(); it != r.end();) it = is_zero(it->second) ? r.erase(it) : std::next(it);
  return r;
}

// (left * right) e_col restricted to the protected outputs
Col protected_product(const SparseMatrix& left, const SparseMatrix& right, std::size_t col, const Boxes& B) {
  Col e{{col, Rational(1)}};
  return apply_pruned(left, apply_pruned(right, e, B.inter_ok), B.out_ok);
}

void axpy(Col& acc, const Col& v, const Rational& a) {
  for (auto& [i, x] : v) {
    acc[i] += a * x;
    if (is_zero(acc[i])) acc.erase(i);
  }
}

std::vector<MultiIndex> indices_up_to(int n, int bound) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= bound; ++d)
    for (auto& a : enumerate_Bl(n - 1, d)) out.push_back(a);
  return out;
}

std::string col_diff(const Col& a, const Col& b, int F, int N) {
  for (auto& [i, x] : a) {
    auto it = b.find(i);
    Rational y = it == b.end() ? Rational(0) : it->second;
    if (x != y) {
      std::string s;
      for (int o : occupations(i, F, N)) s += std::to_string(o) + " ";
      return "row occ " + s + ": " + to_string(x) + " vs " + to_string(y);
    }
  }
  for (auto& [i, y] : b)
    if (!a.count(i)) {
      std::string s;
      for (int o : occupations(i, F, N)) s += std::to_string(o) + " ";
      return "row occ " + s + ": 0 vs " + to_string(y);
    }
  return "";
}

class OpCache {
 public:
  OpCache(int n, int N, const Rational& q) : n_(n), N_(N), q_(q) {}
  const SparseMatrix& Z(const MultiIndex& a, const Rational& zeta) {
    auto key = std::make_pair(a, zeta);
    auto it = z_.find(key);
    if (it != z_.end()) return it->second;
    return z_.emplace(key, (Z0(zeta) * K_tail(a, N_, q_)).mat).first->second;
  }
  const FockOperator& Z0(const Rational& zeta) {
    auto it = z0_.find(zeta);
    if (it != z0_.end()) return it->second;
    return z0_.emplace(zeta, Z0_closed(n_, zeta, N_, q_)).first->second;
  }

 private:
  int n_, N_;
  Rational q_;
  std::map<std::pair<MultiIndex, Rational>, SparseMatrix> z_;
  std::map<Rational, FockOperator> z0_;
};

}  // namespace

CheckReport zf_check(const ZFOptions& o) {
  CheckReport rep(o.form == ZFForm::Z ? "ZF algebra (Z normalization)" : "ZF algebra (X normalization)");
  int F = factor_count(o.n);
  Boxes B = make_boxes(o.n, o.N, o.bound);
  OpCache cache(o.n, o.N, o.q);
  PhiParams pp{o.q, o.lambda, o.mu};
  auto norm = [&](const MultiIndex& a, const Rational& z) -> Rational {
    return o.form == ZFForm::X ? g_weight(a, z, o.q) : Rational(1);
  };
  auto idx = indices_up_to(o.n, o.bound);
  for (auto& a : idx)
    for (auto& b : idx) {
      std::vector<std::pair<MultiIndex, Rational>> terms;  // gamma, coefficient
      for (auto& g : enumerate_dominated(a)) {
        MultiIndex d = a + b - g;
        Rational coef = o.form == ZFForm::Z ? pow(o.q, phi_exp(a - g, b - g)) * phi_weight(g, a, pp)
                                            : phi_weight(b, d, pp);
        if (!is_zero(coef)) terms.push_back({g, coef});
      }
      Rational lhs_norm = norm(a, o.mu) * norm(b, o.lambda);
      for (std::size_t col : B.protected_cols) {
        ++rep.checked;
        Col lhs = protected_product(cache.Z(a, o.mu), cache.Z(b, o.lambda), col, B);
        for (auto& [i, x] : lhs) x *= lhs_norm;
        Col rhs;
        for (auto& [g, coef] : terms) {
          MultiIndex d = a + b - g;
          Col t = protected_product(cache.Z(g, o.lambda), cache.Z(d, o.mu), col, B);
          axpy(rhs, t, coef * norm(g, o.lambda) * norm(d, o.mu));
        }
        std::string w = col_diff(lhs, rhs, F, o.N);
        if (!w.empty()) rep.fail("alpha=" + a.str() + " beta=" + b.str() + " col " + std::to_string(col) + ": " + w);
      }
    }
  return rep;
}

namespace {

Rational scalar_derivative(const std::function<Rational(const Rational&)>& f, int shift, int degree,
                           const Rational& at) {
  SparseMatrix d = interpolated_derivative(
      [&](const Rational& x) {
        SparseMatrix m(1, 1);
        m.set(0, 0, f(x));
        return m;
      },
      shift, degree, at);
  return d.get(0, 0);
}

}  // namespace

CheckReport hat_check(int n, const Rational& mu, const Rational& q, int N, int bound) {
  CheckReport rep("hat relation");
  int F = factor_count(n);
  Boxes B = make_boxes(n, N, bound);
  OpCache cache(n, N, q);
  // Z_0'(mu): zeta^{F N} Z_0(zeta) is polynomial of degree <= F N
  SparseMatrix dZ0 = interpolated_derivative(
      [&](const Rational& z) { return Z0_closed(n, z, N, q).mat; }, F * N, F * N, mu);
  auto X = [&](const MultiIndex& a) -> SparseMatrix { return cache.Z(a, mu) * g_weight(a, mu, q); };
  auto Xp = [&](const MultiIndex& a) -> SparseMatrix {
    int w = a.weight();
    Rational dg = scalar_derivative([&](const Rational& z) { return g_weight(a, z, q); }, w, w, mu);
    FockOperator Kt = K_tail(a, N, q);
    return cache.Z(a, mu) * dg + (dZ0 * Kt.mat) * g_weight(a, mu, q);
  };
  auto idx = indices_up_to(n, bound);
  for (auto& a : idx)
    for (auto& b : idx) {
      SparseMatrix Xa = X(a), Xb = X(b), Xpa = Xp(a), Xpb = Xp(b);
      std::vector<std::pair<MultiIndex, Rational>> terms;
      for (auto& g : enumerate_dominated(a)) {
        MultiIndex d = a + b - g;
        Rational h = scalar_derivative(
            [&](const Rational& lam) { return phi_weight(b, d, PhiParams{q, lam, mu}); }, d.weight(), d.weight(), mu);
        if (!is_zero(h)) terms.push_back({g, h});
      }
      for (std::size_t col : B.protected_cols) {
        ++rep.checked;
        Col rhs = protected_product(Xa, Xpb, col, B);
        axpy(rhs, protected_product(Xpa, Xb, col, B), Rational(-1));
        Col lhs;
        for (auto& [g, h] : terms) axpy(lhs, protected_product(X(g), X(a + b - g), col, B), h);
        std::string w = col_diff(lhs, rhs, F, N);
        if (!w.empty()) rep.fail("alpha=" + a.str() + " beta=" + b.str() + ": " + w);
      }
    }
  return rep;
}

// ---- generating function ------------------------------------------------

FockOperator gen_function_A(const Rational& lambda, const std::vector<Rational>& w, const Rational& q, int N,
                            int degree) {
  int n = static_cast<int>(w.size());
  OpCache cache(n, N, q);
  FockOperator A{factor_count(n), N, SparseMatrix(cache.Z0(lambda).dim(), cache.Z0(lambda).dim())};
  for (auto& a : indices_up_to(n, degree)) {
    Rational c = g_weight(a, lambda, q);
    for (std::size_t i = 0; i < a.size(); ++i) c *= pow(w[i], a[i]);
    if (!is_zero(c)) A.mat = A.mat + cache.Z(a, lambda) * c;
  }
  return A;
}

FockOperator gen_function_A_closed_n2(const Rational& lambda, const Rational& x, const Rational& y, const Rational& q,
                                      int N, int degree) {
  using Series = std::map<std::pair<int, int>, SparseMatrix>;  // (deg x, deg y) -> coefficient
  SparseMatrix c = qboson(QBoson::c, N, q), k = qboson(QBoson::k, N, q);
  auto single = [&](const SparseMatrix& A, const Rational& scale, bool in_x, bool inverse) {
    Series s;
    SparseMatrix P = SparseMatrix::identity(A.cols());
    for (int j = 0; j <= degree; ++j) {
      Rational coef = pow(scale, j) / qpoch(q, q, j);
      if (!inverse) coef *= (j % 2 ? -1 : 1) * pow(q, j * (j - 1) / 2);
      s[in_x ? std::make_pair(j, 0) : std::make_pair(0, j)] = P * coef;
      P = P * A;
    }
    return s;
  };
  auto mul = [&](const Series& a, const Series& b) {
    Series r;
    for (auto& [ea, ma] : a)
      for (auto& [eb, mb] : b) {
        std::pair<int, int> e{ea.first + eb.first, ea.second + eb.second};
        if (e.first + e.second > degree) continue;
        auto it = r.find(e);
        if (it == r.end()) r.emplace(e, ma * mb);
        else it->second = it->second + ma * mb;
      }
    return r;
  };
  Series s{{{0, 0}, Z0_closed(2, lambda, N, q).mat}};
  s = mul(s, single(k, 1 / lambda, false, true));
  s = mul(s, single(c, 1 / lambda, true, true));
  s = mul(s, single(c, Rational(1), true, false));
  s = mul(s, single(k, Rational(1), false, false));
  FockOperator A{1, N, SparseMatrix(c.rows(), c.cols())};
  for (auto& [e, m] : s) A.mat = A.mat + m * (pow(x, e.first) * pow(y, e.second));
  return A;
}

CheckReport gen_function_commute(int n, const Rational& mu, const Rational& lambda, const Rational& q, int N,
                                 int degree) {
  CheckReport rep("generating function commutativity");
  int F = factor_count(n);
  Boxes B = make_boxes(n, N, degree);
  OpCache cache(n, N, q);
  auto X = [&](const MultiIndex& a, const Rational& z) -> SparseMatrix { return cache.Z(a, z) * g_weight(a, z, q); };
  for (auto& k : indices_up_to(n, degree)) {
    auto splits = enumerate_dominated(k);
    for (std::size_t col : B.protected_cols) {
      ++rep.checked;
      Col acc;
      for (auto& a : splits) {
        MultiIndex b = k - a;
        axpy(acc, protected_product(X(a, mu), X(b, lambda), col, B), Rational(1));
        axpy(acc, protected_product(X(a, lambda), X(b, mu), col, B), Rational(-1));
      }
      if (!acc.empty()) rep.fail("degree " + k.str() + ": " + col_diff(acc, Col{}, F, N));
    }
  }
  return rep;
}

// ---- traces --------------------------------------------------------------

namespace {

void check_sigma(const State& sigma, const std::vector<Rational>& mu) {
  if (sigma.empty() || sigma.size() != mu.size()) throw std::invalid_argument("trace: need one mu per site");
  for (auto& s : sigma)
    if (s.size() != sigma[0].size()) throw std::invalid_argument("trace: inconsistent species count");
}

std::vector<SparseMatrix> site_ops(const State& sigma, const std::vector<Rational>& mu, const Rational& q, int N) {
  OpCache cache(static_cast<int>(sigma[0].size()), N, q);
  std::vector<SparseMatrix> ops;
  for (std::size_t i = 0; i < sigma.size(); ++i) ops.push_back(cache.Z(sigma[i], mu[i]) * g_weight(sigma[i], mu[i], q));
  return ops;
}

Rational diag_entry(const std::vector<SparseMatrix>& ops, std::size_t m) {
  Col v{{m, Rational(1)}};
  for (std::size_t i = ops.size(); i-- > 0;) v = ops[i].apply(v);
  auto it = v.find(m);
  return it == v.end() ? Rational(0) : it->second;
}

Rational trace_at(const State& sigma, const std::vector<Rational>& mu, const Rational& q, int N) {
  auto ops = site_ops(sigma, mu, q, N);
  Rational s = 0;
  for (std::size_t m = 0; m < ops[0].cols(); ++m) s += diag_entry(ops, m);
  return s;
}

double rel_gap(const Rational& a, const Rational& b) {
  if (is_zero(b)) return is_zero(a) ? 0.0 : INFINITY;
  return std::fabs(to_double((b - a) / b));
}

}  // namespace

MpfValue stationary_mpf(const State& sigma, const std::vector<Rational>& mu, const Rational& q, int N) {
  check_sigma(sigma, mu);
  MpfValue v;
  v.N = N;
  v.value = trace_at(sigma, mu, q, N);
  v.value_2N = trace_at(sigma, mu, q, 2 * N);
  v.rel_gap = rel_gap(v.value, v.value_2N);
  if (!is_basic(total_content(sigma)))
    v.warning = "content " + total_content(sigma).str() + " is not a basic sector; convergence is not guaranteed";
  return v;
}

ConvergenceTrace trace_convergence(const State& sigma, const std::vector<Rational>& mu, const Rational& q, int N0,
                                   int doublings) {
  check_sigma(sigma, mu);
  ConvergenceTrace t;
  for (int i = 0, N = N0; i <= doublings; ++i, N *= 2) {
    t.cutoffs.push_back(N);
    t.values.push_back(trace_at(sigma, mu, q, N));
    if (i > 0) {
      t.gaps.push_back(rel_gap(t.values[t.values.size() - 2], t.values.back()));
      if (t.gaps.size() > 1 && t.gaps.back() > 0 && t.gaps.back() >= t.gaps[t.gaps.size() - 2]) t.decreasing = false;
    }
  }
  return t;
}

Rational stationary_mpf_exact_n2(const State& sigma, const std::vector<Rational>& mu, const Rational& q) {
  check_sigma(sigma, mu);
  if (sigma[0].size() != 2) throw std::invalid_argument("stationary_mpf_exact_n2: two species only");
  MultiIndex k = total_content(sigma);
  if (k[1] == 0) throw PoleError("trace diverges for k_2 = 0");
  int k1 = k[0];
  // <m|...|m> = sum_{s=k2}^{k2+k1} A_s q^{s m}; intermediate states stay <= m + k1
  auto ops = site_ops(sigma, mu, q, 2 * k1 + 2);
  std::vector<Rational> vals;
  for (int m = 0; m <= k1; ++m) vals.push_back(diag_entry(ops, static_cast<std::size_t>(m)));
  return resum_exp_poly(vals, k[1], k[1] + k1, q).at(Rational(1));
}

MpfValue G_k(const MultiIndex& k, const std::vector<Rational>& mu, const Rational& q, int N) {
  MpfValue g;
  g.N = N;
  for (auto& s : enumerate_sector(static_cast<int>(mu.size()), k)) {
    MpfValue v = stationary_mpf(s, mu, q, N);
    g.value += v.value;
    g.value_2N += v.value_2N;
    if (g.warning.empty()) g.warning = v.warning;
  }
  g.rel_gap = rel_gap(g.value, g.value_2N);
  return g;
}

Rational G_k_exact_n2(const MultiIndex& k, const std::vector<Rational>& mu, const Rational& q) {
  Rational s = 0;
  for (auto& st : enumerate_sector(static_cast<int>(mu.size()), k)) s += stationary_mpf_exact_n2(st, mu, q);
  return s;
}

}  // namespace zrp
