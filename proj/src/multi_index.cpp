#include "zrplab/multi_index.hpp"

#include <stdexcept>

namespace zrp {

int MultiIndex::weight() const {
  int w = 0;
  for (int x : v_) w += x;
  return w;
}

bool MultiIndex::is_zero() const {
  for (int x : v_)
    if (x != 0) return false;
  return true;
}

bool MultiIndex::nonnegative() const {
  for (int x : v_)
    if (x < 0) return false;
  return true;
}

bool MultiIndex::le(const MultiIndex& o) const {
  if (o.size() != size()) throw std::invalid_argument("MultiIndex length mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i)
    if (v_[i] > o.v_[i]) return false;
  return true;
}

MultiIndex MultiIndex::unit(std::size_t m, std::size_t i) {
  MultiIndex e(m);
  e[i] = 1;
  return e;
}

MultiIndex& MultiIndex::operator+=(const MultiIndex& o) {
  if (o.size() != size()) throw std::invalid_argument("MultiIndex length mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

MultiIndex& MultiIndex::operator-=(const MultiIndex& o) {
  if (o.size() != size()) throw std::invalid_argument("MultiIndex length mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  MultiIndex r = *this;
  r += o;
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  MultiIndex r = *this;
  r -= o;
  return r;
}

std::string MultiIndex::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v_[i]);
  }
  return s + ")";
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& a) { return os << a.str(); }

std::string state_str(const State& s) {
  std::string r = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) r += ',';
    r += s[i].str();
  }
  return r + "]";
}

std::string multiset_label(const State& s) {
  std::string r;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) r += '|';
    std::string site;
    for (std::size_t a = 0; a < s[i].size(); ++a) {
      std::string sp = std::to_string(a + 1);
      for (int c = 0; c < s[i][a]; ++c) site += sp;
    }
    r += site.empty() ? "∅" : site;
  }
  return r;
}

MultiIndex total_content(const State& s) {
  if (s.empty()) return {};
  MultiIndex k(s[0].size());
  for (const auto& a : s) k += a;
  return k;
}

}  // namespace zrp
