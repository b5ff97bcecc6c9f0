#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zrplab/multi_index.hpp"
#include "zrplab/rational.hpp"

namespace zrp {

// Ordered list of product states with a reverse index.
class Basis {
 public:
  Basis() = default;
  explicit Basis(std::vector<State> states);
  std::size_t size() const { return states_.size(); }
  const State& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<State>& states() const { return states_; }
  std::optional<std::size_t> find(const State& s) const;
  std::size_t at(const State& s) const;  // throws if absent
  bool operator==(const Basis& o) const { return states_ == o.states_; }

 private:
  std::vector<State> states_;
  std::map<State, std::size_t> index_;
};
using BasisPtr = std::shared_ptr<const Basis>;
BasisPtr make_basis(std::vector<State> states);

// Column-major sparse matrix; stored entries are nonzero.
class SparseMatrix {
 public:
  using Column = std::map<std::size_t, Rational>;
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), col_(cols) {}
  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return col_.size(); }
  const Column& column(std::size_t j) const { return col_[j]; }
  Rational get(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Rational& v);
  void add(std::size_t i, std::size_t j, const Rational& v);
  std::size_t nnz() const;

  SparseMatrix operator*(const SparseMatrix& o) const;
  SparseMatrix operator+(const SparseMatrix& o) const;
  SparseMatrix operator-(const SparseMatrix& o) const;
  SparseMatrix operator*(const Rational& a) const;
  SparseMatrix transpose() const;
  bool operator==(const SparseMatrix& o) const { return rows_ == o.rows_ && col_ == o.col_; }
  Column apply(const Column& v) const;
  std::vector<Rational> column_sums() const;
  SparseMatrix kron(const SparseMatrix& o) const;  // this (x) o, row index i*o.rows + k

 private:
  std::size_t rows_ = 0;
  std::vector<Column> col_;
};

// Matrix together with domain/codomain state bases.
struct SparseOperator {
  BasisPtr dom, cod;
  SparseMatrix mat;

  SparseOperator() = default;
  SparseOperator(BasisPtr d, BasisPtr c) : dom(std::move(d)), cod(std::move(c)), mat(cod->size(), dom->size()) {}
  Rational entry(const State& out, const State& in) const;
  void add(const State& out, const State& in, const Rational& v);
};

bool same_shape(const SparseOperator& a, const SparseOperator& b);
SparseOperator compose(const SparseOperator& a, const SparseOperator& b);  // a after b
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);

// Sparse vectors keyed by product state.
using SparseVec = std::map<State, Rational>;

struct LocalTerm {
  MultiIndex out1, out2;
  Rational value;
};
// Two-site kernel: |a> (x) |b>  ->  sum value |out1> (x) |out2>.
using Kernel2 = std::function<void(const MultiIndex& a, const MultiIndex& b, std::vector<LocalTerm>& out)>;

SparseVec apply_kernel(const Kernel2& k, std::size_t i, std::size_t j, const SparseVec& v);
// Kernel view of an operator on two-site product states.
Kernel2 kernel_of(std::shared_ptr<const SparseOperator> op);

void add_to(SparseVec& v, const State& s, const Rational& x);
std::string first_difference(const SparseVec& a, const SparseVec& b);  // "" when equal

// d/dx of a matrix family F(x) whose entries times x^shift are polynomials
// of degree <= degree: exact Lagrange interpolation at x = 2, 3, ... with
// one extra verification node (throws std::logic_error on inconsistency).
SparseMatrix interpolated_derivative(const std::function<SparseMatrix(const Rational&)>& F, int shift, int degree,
                                     const Rational& at);

}  // namespace zrp
