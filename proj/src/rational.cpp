#include "zrplab/rational.hpp"

#include <cctype>

namespace zrp {

namespace {

bool valid_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text, std::string_view field) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  auto fail = [&]() -> Rational {
    throw std::invalid_argument(std::string(field) + ": '" + std::string(text) +
                                "' is not an exact rational (expected p/q or an integer)");
  };
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den)) return fail();
  std::string n(num), d(den);
  if (n[0] == '+') n.erase(0, 1);
  if (d[0] == '+') d.erase(0, 1);
  mpz_class zn(n, 10), zd(d, 10);
  if (zd == 0) throw std::invalid_argument(std::string(field) + ": zero denominator");
  Rational r(zn, zd);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& x) { return x.get_str(); }

Rational pow(const Rational& x, long e) {
  if (e < 0) {
    if (is_zero(x)) throw PoleError("negative power of zero");
    Rational inv = 1 / x;
    return pow(inv, -e);
  }
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(e));
  r.canonicalize();
  return r;
}

double to_double(const Rational& x) { return x.get_d(); }

}  // namespace zrp
