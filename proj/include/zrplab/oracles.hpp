#pragma once

#include <map>
#include <utility>
#include <vector>

#include "zrplab/multi_index.hpp"
#include "zrplab/rational.hpp"

// Closed-form reference data used as independent oracles by the tests, the
// acceptance suite and the CLI comparison reports.
namespace zrp {

using Mu = std::vector<Rational>;
using TableColumn = std::vector<std::pair<State, Rational>>;

// R^{l,m}(z) for eps = (1,1,0), l, m >= 2: every nonzero entry, one column
// per input state (alpha, beta) of V_l (x) V_m.
std::vector<std::pair<State, TableColumn>> tabulated_R_110(int l, int m, const Rational& q, const Rational& z);

// Unnormalized stationary weights of the two-species chain, sector (1,1),
// on rings of length 2 or 3, as polynomials in (q, mu_i).
std::map<State, Rational> two_species_ring_weights(const Mu& mu, const Rational& q);

}  // namespace zrp
