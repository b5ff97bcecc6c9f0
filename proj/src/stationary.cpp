#include "zrplab/stationary.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "zrplab/transfer.hpp"

namespace zrp {

std::vector<std::vector<Rational>> null_space(const SparseMatrix& A) {
  std::size_t R = A.rows(), C = A.cols();
  std::vector<std::vector<mpz_class>> M(R, std::vector<mpz_class>(C, 0));
  {
    std::vector<std::vector<Rational>> dense(R, std::vector<Rational>(C, 0));
    for (std::size_t j = 0; j < C; ++j)
      for (auto& [i, v] : A.column(j)) dense[i][j] = v;
    for (std::size_t i = 0; i < R; ++i) {
      mpz_class l = 1;
      for (auto& v : dense[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
      for (std::size_t j = 0; j < C; ++j) M[i][j] = dense[i][j].get_num() * (l / dense[i][j].get_den());
    }
  }
  mpz_class prev = 1;
  std::vector<std::size_t> pivcols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t best = R, bits = 0;
    for (std::size_t i = r; i < R; ++i) {
      if (M[i][c] == 0) continue;
      std::size_t b = mpz_sizeinbase(M[i][c].get_mpz_t(), 2);
      if (best == R || b > bits) best = i, bits = b;
    }
    if (best == R) continue;
    std::swap(M[r], M[best]);
    for (std::size_t i = r + 1; i < R; ++i) {
      for (std::size_t j = c + 1; j < C; ++j) {
        mpz_class t = M[r][c] * M[i][j] - M[i][c] * M[r][j];
        mpz_divexact(M[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      M[i][c] = 0;
    }
    prev = M[r][c];
    pivcols.push_back(c);
    ++r;
  }
  std::vector<bool> is_piv(C, false);
  for (auto c : pivcols) is_piv[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < C; ++f) {
    if (is_piv[f]) continue;
    std::vector<Rational> x(C, 0);
    x[f] = 1;
    for (std::size_t t = pivcols.size(); t-- > 0;) {
      std::size_t c = pivcols[t];
      Rational s = 0;
      for (std::size_t j = c + 1; j < C; ++j)
        if (!is_zero(x[j]) && M[t][j] != 0) s += Rational(M[t][j]) * x[j];
      x[c] = -s / Rational(M[t][c]);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

StationaryVector solve_stationary(const SparseOperator& T) {
  if (!(*T.dom == *T.cod)) throw std::invalid_argument("solve_stationary: operator must be square on one basis");
  std::size_t N = T.dom->size();
  SparseMatrix A = T.mat - SparseMatrix::identity(N);
  auto ker = null_space(A);
  if (ker.size() != 1)
    throw std::runtime_error("solve_stationary: ker(T - 1) has dimension " + std::to_string(ker.size()) +
                             " on a sector of size " + std::to_string(N));
  Rational s = 0;
  for (auto& x : ker[0]) s += x;
  if (is_zero(s)) throw std::runtime_error("solve_stationary: fixed vector has zero sum");
  StationaryVector v{T.dom, {}};
  for (auto& x : ker[0]) v.p.push_back(x / s);
  SparseMatrix::Column col;
  for (std::size_t i = 0; i < N; ++i)
    if (!is_zero(v.p[i])) col[i] = v.p[i];
  for (auto& [i, x] : A.apply(col))
    if (!is_zero(x)) throw std::logic_error("solve_stationary: residual after normalization");
  return v;
}

StationaryVector stationary_scriptT(const Rational& lambda, const std::vector<Rational>& mu, const Rational& q,
                                    const MultiIndex& k) {
  return solve_stationary(periodic_scriptT(lambda, mu, q, k));
}

namespace {

const Rational kProbeLambda(3, 7);

struct Prober {
  int L;
  MultiIndex k;
  std::vector<Rational> x0;
  std::size_t dim = 0;

  std::optional<std::vector<Rational>> sample(const std::vector<Rational>& x) const {
    std::vector<Rational> mu(x.begin() + 1, x.end());
    try {
      return stationary_scriptT(kProbeLambda, mu, x[0], k).p;
    } catch (const PoleError&) {
      return std::nullopt;
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
  }

  // p(x0 + t b) / S(x0) as polynomials in t, one per basis state
  std::vector<Poly> along(const std::vector<Rational>& b) const {
    std::map<Rational, std::optional<std::vector<Rational>>> cache;
    auto at = [&](const Rational& t) -> const std::optional<std::vector<Rational>>& {
      auto it = cache.find(t);
      if (it != cache.end()) return it->second;
      std::vector<Rational> x(x0.size());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = x0[i] + t * b[i];
      return cache.emplace(t, sample(x)).first->second;
    };
    std::vector<RatFunc> parts;
    Poly S = Poly::constant(1);
    for (std::size_t s = 0; s < dim; ++s) {
      parts.push_back(reconstruct_rational(
          [&](const Rational& t) -> std::optional<Rational> {
            auto& v = at(t);
            if (!v) return std::nullopt;
            return (*v)[s];
          },
          80, 2, Rational(2)));
      const Poly& D = parts.back().den();
      S = poly_divexact(S * D, poly_gcd(S, D));
    }
    Rational s0 = S(Rational(0));
    if (is_zero(s0)) throw std::runtime_error("probe_positivity: base point is a zero of the partition sum");
    std::vector<Poly> out;
    for (auto& f : parts) out.push_back(f.num() * poly_divexact(S, f.den()) * (1 / s0));
    return out;
  }

  std::vector<Rational> value_at(const std::vector<Rational>& x) const {
    std::vector<Rational> b(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) b[i] = x[i] - x0[i];
    std::vector<Rational> v;
    for (auto& p : along(b)) v.push_back(p(Rational(1)));
    return v;
  }
};

}  // namespace

PositivityEvidence probe_positivity(const PositivitySample& s, unsigned seed) {
  if (s.L < 1 || s.k.size() == 0) throw std::invalid_argument("probe_positivity: need L >= 1 and n >= 1");
  std::mt19937_64 rng(seed);
  Prober pr{s.L, s.k, {}, 0};
  std::size_t V = static_cast<std::size_t>(s.L) + 1;
  for (std::size_t i = 0; i < V; ++i) pr.x0.push_back(random_rational(rng, Rational(1, 10), Rational(9, 10), 97));
  auto first = pr.sample(pr.x0);
  if (!first) throw std::runtime_error("probe_positivity: base point is singular");
  pr.dim = first->size();

  PositivityEvidence ev;
  ev.L = s.L;
  ev.k = s.k;
  auto basis = make_basis(enumerate_sector(s.L, s.k));
  for (auto& st : basis->states()) ev.labels.push_back(multiset_label(st));

  // per-variable degrees from axis-parallel lines through x0
  for (std::size_t v = 0; v < V; ++v) {
    std::vector<Rational> b(V, 0);
    b[v] = 1;
    int d = 0;
    for (auto& p : pr.along(b)) d = std::max(d, p.degree());
    ev.degrees.push_back(d);
  }

  std::vector<std::vector<Rational>> axes(V);
  for (std::size_t v = 0; v < V; ++v)
    for (int j = 0; j <= ev.degrees[v]; ++j) axes[v].push_back(Rational(j + 1, 2 * (ev.degrees[v] + 2)) + Rational(1, 101));
  std::vector<std::vector<Rational>> values;
  std::vector<std::size_t> idx(V, 0);
  while (true) {
    std::vector<Rational> x(V);
    for (std::size_t v = 0; v < V; ++v) x[v] = axes[v][idx[v]];
    values.push_back(pr.value_at(x));
    std::size_t v = V;
    while (v > 0 && ++idx[v - 1] == axes[v - 1].size()) idx[--v] = 0;
    if (v == 0) break;
  }
  auto polys = interpolate_grid(axes, values);

  std::vector<Rational> xc;
  for (std::size_t i = 0; i < V; ++i) xc.push_back(random_rational(rng, Rational(1, 10), Rational(9, 10), 89));
  auto check = pr.value_at(xc);
  ev.validated = true;
  for (std::size_t i = 0; i < polys.size(); ++i)
    if (polys[i](xc) != check[i]) ev.validated = false;

  // primitive integer normalization
  mpz_class l = 1, g = 0;
  for (auto& p : polys)
    for (auto& [e, c] : p.terms) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  for (auto& p : polys)
    for (auto& [e, c] : p.terms) {
      mpz_class z = c.get_num() * (l / c.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    }
  Rational scale = Rational(l) / Rational(g);
  std::size_t wrong_plus = 0, wrong_minus = 0, total = 0;
  for (auto& p : polys)
    for (auto& [e, c] : p.terms) {
      c *= scale;
      int mu_deg = 0;
      for (std::size_t v = 1; v < e.size(); ++v) mu_deg += e[v];
      int sg = sgn(c) * (mu_deg % 2 ? -1 : 1);
      ++total;
      if (sg < 0) ++wrong_plus;
      else ++wrong_minus;
    }
  if (wrong_minus < wrong_plus) {
    for (auto& p : polys)
      for (auto& [e, c] : p.terms) c = -c;
    std::swap(wrong_plus, wrong_minus);
  }
  ev.polys = std::move(polys);
  ev.negative_coefficients = wrong_plus;
  ev.total_coefficients = total;
  ev.consistent = ev.validated && wrong_plus == 0;

  std::ostringstream os;
  os << "variables (q, mu_1..mu_" << s.L << "), lambda = " << to_string(kProbeLambda) << "; base point (";
  for (std::size_t i = 0; i < V; ++i) os << (i ? ", " : "") << to_string(pr.x0[i]);
  os << "); tensor grid with per-variable degrees (";
  for (std::size_t i = 0; i < V; ++i) os << (i ? ", " : "") << ev.degrees[i];
  os << "), nodes (j+1)/(2(d+2)) + 1/101; values via Thiele reconstruction along lines from the base point";
  ev.grid = os.str();
  return ev;
}

std::vector<PositivityEvidence> probe_positivity_conjecture(const std::vector<PositivitySample>& samples,
                                                            unsigned seed) {
  std::vector<PositivityEvidence> out;
  for (auto& s : samples) out.push_back(probe_positivity(s, seed));
  return out;
}

}  // namespace zrp
