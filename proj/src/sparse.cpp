#include "zrplab/sparse.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include "zrplab/poly.hpp"

namespace zrp {

Basis::Basis(std::vector<State> states) : states_(std::move(states)) {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (!index_.emplace(states_[i], i).second) throw std::invalid_argument("basis has a repeated state");
}

std::optional<std::size_t> Basis::find(const State& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Basis::at(const State& s) const {
  auto i = find(s);
  if (!i) throw std::out_of_range("state " + state_str(s) + " not in basis");
  return *i;
}

BasisPtr make_basis(std::vector<State> states) { return std::make_shared<const Basis>(std::move(states)); }

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.col_[i].emplace(i, 1);
  return m;
}

Rational SparseMatrix::get(std::size_t i, std::size_t j) const {
  auto it = col_[j].find(i);
  return it == col_[j].end() ? Rational(0) : it->second;
}

void SparseMatrix::set(std::size_t i, std::size_t j, const Rational& v) {
  if (is_zero(v))
    col_[j].erase(i);
  else
    col_[j][i] = v;
}

void SparseMatrix::add(std::size_t i, std::size_t j, const Rational& v) {
  if (is_zero(v)) return;
  auto [it, fresh] = col_[j].emplace(i, v);
  if (!fresh) {
    it->second += v;
    if (is_zero(it->second)) col_[j].erase(it);
  }
}

std::size_t SparseMatrix::nnz() const {
  std::size_t n = 0;
  for (auto& c : col_) n += c.size();
  return n;
}

SparseMatrix::Column SparseMatrix::apply(const Column& v) const {
  Column out;
  for (auto& [j, x] : v) {
    for (auto& [i, a] : col_[j]) {
      auto [it, fresh] = out.emplace(i, a * x);
      if (!fresh) it->second += a * x;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  if (cols() != o.rows()) throw std::invalid_argument("matrix product shape mismatch");
  SparseMatrix r(rows_, o.cols());
  for (std::size_t j = 0; j < o.cols(); ++j) r.col_[j] = apply(o.col_[j]);
  return r;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
  if (rows_ != o.rows_ || cols() != o.cols()) throw std::invalid_argument("matrix sum shape mismatch");
  SparseMatrix r(*this);
  for (std::size_t j = 0; j < o.cols(); ++j)
    for (auto& [i, v] : o.col_[j]) r.add(i, j, v);
  return r;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const { return *this + o * Rational(-1); }

SparseMatrix SparseMatrix::operator*(const Rational& a) const {
  if (is_zero(a)) return SparseMatrix(rows_, cols());
  SparseMatrix r(*this);
  for (auto& c : r.col_)
    for (auto& [i, v] : c) v *= a;
  return r;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix r(cols(), rows_);
  for (std::size_t j = 0; j < cols(); ++j)
    for (auto& [i, v] : col_[j]) r.col_[i].emplace(j, v);
  return r;
}

std::vector<Rational> SparseMatrix::column_sums() const {
  std::vector<Rational> s(cols());
  for (std::size_t j = 0; j < cols(); ++j)
    for (auto& [i, v] : col_[j]) s[j] += v;
  return s;
}

SparseMatrix SparseMatrix::kron(const SparseMatrix& o) const {
  SparseMatrix r(rows_ * o.rows_, cols() * o.cols());
  for (std::size_t j = 0; j < cols(); ++j)
    for (auto& [i, a] : col_[j])
      for (std::size_t l = 0; l < o.cols(); ++l)
        for (auto& [k, b] : o.col_[l]) r.col_[j * o.cols() + l].emplace(i * o.rows_ + k, a * b);
  return r;
}

Rational SparseOperator::entry(const State& out, const State& in) const {
  auto i = cod->find(out);
  auto j = dom->find(in);
  if (!i || !j) return 0;
  return mat.get(*i, *j);
}

void SparseOperator::add(const State& out, const State& in, const Rational& v) {
  mat.add(cod->at(out), dom->at(in), v);
}

bool same_shape(const SparseOperator& a, const SparseOperator& b) {
  return *a.dom == *b.dom && *a.cod == *b.cod;
}

SparseOperator compose(const SparseOperator& a, const SparseOperator& b) {
  if (!(*a.dom == *b.cod)) throw std::invalid_argument("compose: basis mismatch");
  SparseOperator r;
  r.dom = b.dom;
  r.cod = a.cod;
  r.mat = a.mat * b.mat;
  return r;
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  SparseOperator r = compose(a, b);
  r.mat = r.mat - compose(b, a).mat;
  return r;
}

void add_to(SparseVec& v, const State& s, const Rational& x) {
  if (is_zero(x)) return;
  auto [it, fresh] = v.emplace(s, x);
  if (!fresh) {
    it->second += x;
    if (is_zero(it->second)) v.erase(it);
  }
}

SparseVec apply_kernel(const Kernel2& k, std::size_t i, std::size_t j, const SparseVec& v) {
  SparseVec out;
  std::vector<LocalTerm> terms;
  for (auto& [s, x] : v) {
    terms.clear();
    k(s[i], s[j], terms);
    for (auto& t : terms) {
      State s2 = s;
      s2[i] = t.out1;
      s2[j] = t.out2;
      add_to(out, s2, t.value * x);
    }
  }
  return out;
}

Kernel2 kernel_of(std::shared_ptr<const SparseOperator> op) {
  return [op](const MultiIndex& a, const MultiIndex& b, std::vector<LocalTerm>& out) {
    auto j = op->dom->find(State{a, b});
    if (!j) throw std::out_of_range("kernel input outside the operator domain");
    for (auto& [i, v] : op->mat.column(*j)) {
      const State& s = (*op->cod)[i];
      out.push_back({s[0], s[1], v});
    }
  };
}

std::string first_difference(const SparseVec& a, const SparseVec& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      return state_str(ia->first) + ": " + to_string(ia->second) + " vs 0";
    }
    if (ia == a.end() || ib->first < ia->first) {
      return state_str(ib->first) + ": 0 vs " + to_string(ib->second);
    }
    if (ia->second != ib->second)
      return state_str(ia->first) + ": " + to_string(ia->second) + " vs " + to_string(ib->second);
    ++ia;
    ++ib;
  }
  return "";
}

}  // namespace zrp

namespace zrp {

SparseMatrix interpolated_derivative(const std::function<SparseMatrix(const Rational&)>& F, int shift, int degree,
                                     const Rational& at) {
  std::vector<Rational> xs;
  std::vector<SparseMatrix> vals;
  for (int t = 0; t <= degree + 1; ++t) {
    xs.push_back(Rational(t + 2));
    vals.push_back(F(xs.back()));
  }
  std::set<std::pair<std::size_t, std::size_t>> support;
  for (auto& v : vals)
    for (std::size_t j = 0; j < v.cols(); ++j)
      for (auto& [i, x] : v.column(j)) support.insert({i, j});
  SparseMatrix D(vals.front().rows(), vals.front().cols());
  std::vector<Rational> fit_x(xs.begin(), xs.end() - 1);
  for (auto& [i, j] : support) {
    std::vector<Rational> ys;
    for (std::size_t t = 0; t < xs.size(); ++t) ys.push_back(vals[t].get(i, j) * pow(xs[t], shift));
    std::vector<Rational> fit_y(ys.begin(), ys.end() - 1);
    Poly P = interpolate(fit_x, fit_y);
    if (P(xs.back()) != ys.back()) throw std::logic_error("interpolated_derivative: degree bound violated");
    D.set(i, j, -shift * pow(at, -shift - 1) * P(at) + pow(at, -shift) * P.derivative()(at));
  }
  return D;
}

}  // namespace zrp
