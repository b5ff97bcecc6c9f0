#include "zrplab/oracles.hpp"

#include <functional>
#include <stdexcept>

namespace zrp {

namespace {

MultiIndex mi(int a, int b, int c) { return MultiIndex{a, b, c}; }

}  // namespace


std::vector<std::pair<State, TableColumn>> tabulated_R_110(int l, int m, const Rational& q, const Rational& z) {
  auto Q = [&](int e) -> Rational { return pow(q, e); };
  Rational d1 = z - Q(l + m);
  Rational d2 = (Q(l + m) - z) * (Q(l + m) - q * q * z);
  Rational d3 = (Q(l + m) - z) * (Q(l + m - 2) - z);
  auto s00l = mi(0, 0, l), s01l = mi(0, 1, l - 1), s10l = mi(1, 0, l - 1), s11l = mi(1, 1, l - 2);
  auto s00m = mi(0, 0, m), s01m = mi(0, 1, m - 1), s10m = mi(1, 0, m - 1), s11m = mi(1, 1, m - 2);
  std::vector<std::pair<State, TableColumn>> g;
  g.push_back({{s00l, s00m}, {{{s00l, s00m}, 1}}});
  g.push_back({{s00l, s01m},
               {{{s00l, s01m}, (Q(l) * z - Q(m)) / d1}, {{s01l, s00m}, (1 - Q(2 * l)) * z / d1}}});
  g.push_back({{s00l, s10m},
               {{{s00l, s10m}, (Q(l) * z - Q(m)) / d1}, {{s10l, s00m}, (1 - Q(2 * l)) * z / d1}}});
  g.push_back({{s00l, s11m},
               {{{s00l, s11m}, (Q(m) - Q(l) * z) * (Q(m) - Q(l + 2) * z) / d2},
                {{s01l, s10m}, (Q(l) * z - Q(m)) * (1 - Q(2 * l)) * z * Q(2) / d2},
                {{s10l, s01m}, (Q(l) * z - Q(m)) * (1 - Q(2 * l)) * z * q / d2},
                {{s11l, s00m}, (1 - Q(2 * l)) * (1 - Q(2 * l - 2)) * z * z * Q(2) / d2}}});
  g.push_back({{s11l, s00m},
               {{{s00l, s11m}, Q(2) * (1 - Q(2 * m)) * (1 - Q(2 * m - 2)) / d2},
                {{s01l, s10m}, Q(2) * (1 - Q(2 * m)) * (Q(m) * z - Q(l)) / d2},
                {{s10l, s01m}, q * (1 - Q(2 * m)) * (Q(m) * z - Q(l)) / d2},
                {{s11l, s00m}, (Q(m) * z - Q(l)) * (Q(m + 2) * z - Q(l)) / d2}}});
  g.push_back({{s11l, s01m},
               {{{s01l, s11m}, (1 - Q(l + m) * z) * (1 - Q(2 * m - 2)) / d3},
                {{s11l, s01m}, (1 - Q(l + m) * z) * (Q(m - 1) * z - Q(l - 1)) / d3}}});
  g.push_back({{s11l, s10m},
               {{{s10l, s11m}, (1 - Q(l + m) * z) * (1 - Q(2 * m - 2)) / d3},
                {{s11l, s10m}, (1 - Q(l + m) * z) * (Q(m - 1) * z - Q(l - 1)) / d3}}});
  g.push_back({{s11l, s11m}, {{{s11l, s11m}, (1 - Q(l + m) * z) * (1 - Q(l + m - 2) * z) / d3}}});
  g.push_back({{s10l, s00m},
               {{{s00l, s10m}, (1 - Q(2 * m)) / d1}, {{s10l, s00m}, (Q(m) * z - Q(l)) / d1}}});
  g.push_back({{s10l, s01m},
               {{{s00l, s11m}, (Q(2 * m) - Q(2)) * (Q(m) - Q(l) * z) / d2},
                {{s01l, s10m},
                 ((Q(2) - 1) * Q(l + m) + (Q(2) - Q(2 + 2 * l) - Q(2 + 2 * m) + Q(2 * l + 2 * m)) * z) / d2},
                {{s10l, s01m}, q * (Q(m) - Q(l) * z) * (Q(l) - Q(m) * z) / d2},
                {{s11l, s00m}, (Q(2 * l) - Q(2)) * (Q(l) - Q(m) * z) * z / d2}}});
  g.push_back({{s10l, s10m}, {{{s10l, s10m}, (1 - Q(l + m) * z) / d1}}});
  g.push_back({{s10l, s11m},
               {{{s10l, s11m}, q * (1 - Q(l + m) * z) * (Q(l) * z - Q(m)) / d2},
                {{s11l, s10m}, Q(2) * z * (1 - Q(l + m) * z) * (1 - Q(2 * l - 2)) / d2}}});
  g.push_back({{s01l, s00m},
               {{{s00l, s01m}, (1 - Q(2 * m)) / d1}, {{s01l, s00m}, (Q(m) * z - Q(l)) / d1}}});
  g.push_back({{s01l, s01m}, {{{s01l, s01m}, (1 - Q(l + m) * z) / d1}}});
  g.push_back({{s01l, s10m},
               {{{s00l, s11m}, q * (Q(l) * z - Q(m)) * (1 - Q(2 * m - 2)) / d2},
                {{s01l, s10m}, q * (Q(l) * z - Q(m)) * (Q(m) * z - Q(l)) / d2},
                {{s10l, s01m},
                 (Q(l + m) * (1 - Q(2)) * z * z + (Q(2) + Q(2 * l + 2 * m) - Q(2 * l) - Q(2 * m)) * z) / d2},
                {{s11l, s00m}, q * z * (1 - Q(2 * l - 2)) * (Q(m) * z - Q(l)) / d2}}});
  g.push_back({{s01l, s11m},
               {{{s01l, s11m}, (1 - Q(l + m) * z) * (Q(l - 1) * z - Q(m - 1)) / d3},
                {{s11l, s01m}, (1 - Q(l + m) * z) * (1 - Q(2 * l - 2)) * z / d3}}});
  return g;
}

namespace {

using Term = std::pair<State, std::function<Rational(const Mu&, const Rational&)>>;

// Sum over rotations of the ring: the content of site j moves to site j+i
// and f is evaluated at (mu_{1+i}, ..., mu_{L+i}).
std::map<State, Rational> cyclic_sum(const std::vector<Term>& terms, const Mu& mu, const Rational& q) {
  std::size_t L = mu.size();
  std::map<State, Rational> out;
  for (auto& [sigma, f] : terms)
    for (std::size_t i = 0; i < L; ++i) {
      State s(L);
      Mu m(L);
      for (std::size_t j = 0; j < L; ++j) {
        s[(j + i) % L] = sigma[j];
        m[j] = mu[(j + i) % L];
      }
      out[s] += f(m, q);
    }
  return out;
}

const MultiIndex E{0, 0}, A{1, 0}, B{0, 1}, AB{1, 1};

std::map<State, Rational> ring_weights_L2(const Mu& mu, const Rational& q) {
  std::vector<Term> t{
      {{E, AB},
       [](const Mu& m, const Rational& q) -> Rational {
         return m[0] * m[0] * (1 - m[1]) * (1 - q * m[1]) * (m[0] + m[1] - 2 * m[1] * m[0]);
       }},
      {{A, B}, [](const Mu& m, const Rational& q) -> Rational {
         return m[0] * m[1] * (1 - m[0]) * (1 - m[1]) * (m[0] + q * m[1] - m[0] * m[1] - q * m[0] * m[1]);
       }}};
  return cyclic_sum(t, mu, q);
}

std::map<State, Rational> ring_weights_L3(const Mu& mu, const Rational& q) {
  std::vector<Term> t{
      {{E, E, AB},
       [](const Mu& m, const Rational& q) -> Rational {
         return m[0] * m[0] * m[1] * m[1] * (1 - m[2]) * (1 - q * m[2]) *
                (m[0] * m[1] + m[0] * m[2] + m[1] * m[2] - 3 * m[0] * m[2] * m[1]);
       }},
      {{E, B, A},
       [](const Mu& m, const Rational& q) -> Rational {
         return m[0] * m[0] * m[1] * m[2] * (1 - m[1]) * (1 - m[2]) *
                (q * m[0] * m[1] + m[0] * m[2] + m[1] * m[2] - 2 * m[0] * m[1] * m[2] - q * m[0] * m[1] * m[2]);
       }},
      {{E, A, B}, [](const Mu& m, const Rational& q) -> Rational {
         return m[0] * m[0] * m[1] * m[2] * (1 - m[1]) * (1 - m[2]) *
                (m[0] * m[1] + q * m[0] * m[2] + q * m[1] * m[2] - m[0] * m[1] * m[2] - 2 * q * m[0] * m[1] * m[2]);
       }}};
  return cyclic_sum(t, mu, q);
}

}  // namespace

std::map<State, Rational> two_species_ring_weights(const Mu& mu, const Rational& q) {
  if (mu.size() == 2) return ring_weights_L2(mu, q);
  if (mu.size() == 3) return ring_weights_L3(mu, q);
  throw std::invalid_argument("two_species_ring_weights: tabulated for L = 2, 3 only");
}

}  // namespace zrp
