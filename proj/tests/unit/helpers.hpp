#pragma once

#include <random>

#include "zrplab/rational.hpp"

namespace zrp::test {

// Random rational p/d with 1 <= p < d <= max_den, so 0 < x < 1.
inline Rational unit_rational(std::mt19937_64& rng, int max_den = 13) {
  std::uniform_int_distribution<int> dd(2, max_den);
  int d = dd(rng);
  std::uniform_int_distribution<int> dn(1, d - 1);
  Rational r(dn(rng), d);
  r.canonicalize();
  return r;
}

}  // namespace zrp::test
