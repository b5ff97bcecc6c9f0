#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace zrp {

using Rational = mpq_class;

// Parses "p/q" or an integer. Anything with a decimal point or exponent is
// rejected; `field` names the offending input in the error message.
Rational parse_rational(std::string_view text, std::string_view field);

std::string to_string(const Rational& x);

// x^e for any integer e (x must be nonzero when e < 0).
Rational pow(const Rational& x, long e);

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

double to_double(const Rational& x);

class PoleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zrp
