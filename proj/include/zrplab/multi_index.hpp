#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace zrp {

// Occupation array (alpha_1, ..., alpha_m).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t m) : v_(m, 0) {}
  MultiIndex(std::initializer_list<int> xs) : v_(xs) {}
  explicit MultiIndex(std::vector<int> xs) : v_(std::move(xs)) {}

  std::size_t size() const { return v_.size(); }
  int& operator[](std::size_t i) { return v_[i]; }
  int operator[](std::size_t i) const { return v_[i]; }
  const std::vector<int>& data() const { return v_; }

  int weight() const;
  bool is_zero() const;
  bool nonnegative() const;
  // componentwise alpha <= beta
  bool le(const MultiIndex& other) const;

  static MultiIndex unit(std::size_t m, std::size_t i);

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-(const MultiIndex& o) const;
  MultiIndex& operator+=(const MultiIndex& o);
  MultiIndex& operator-=(const MultiIndex& o);

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

  std::string str() const;  // "(1,0,2)"

 private:
  std::vector<int> v_;
};

std::ostream& operator<<(std::ostream& os, const MultiIndex& a);

// A tensor-product basis label: one local state per site.
using State = std::vector<MultiIndex>;

std::string state_str(const State& s);
// Multiset label: species are listed per site, "∅" for an empty site, sites
// separated by '|'.  ((0,0),(1,1)) -> "∅|12".
std::string multiset_label(const State& s);

MultiIndex total_content(const State& s);

}  // namespace zrp
