#pragma once

#include <random>
#include <string>

#include "algoprice/demand.hpp"
#include "algoprice/io.hpp"

namespace testing {

inline std::string data(const std::string& name) { return std::string(ALGOPRICE_DATA_DIR) + "/" + name; }

// Fixed seeds keep property failures reproducible.
inline std::mt19937_64& rng() {
  static std::mt19937_64 g(0x5eed1234u);
  return g;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }
inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

// 2x2 table 2/3/0/1 used for the subgame-perfect computations.
inline algoprice::Matrix pd_table() { return algoprice::Matrix(2, {1, 3, 0, 2}); }

inline algoprice::Matrix reported_unequal_table() { return algoprice::io::load_payoffs(data("unequal_payoffs_reported.json")).table; }

inline algoprice::Matrix calibrated_unequal_table() {
  const auto c = algoprice::calibrate_discrete_choice(4.0, 8.0);
  return algoprice::payoff_matrix(algoprice::DiscreteChoiceModel{c.a, c.b}, algoprice::PriceGrid::uniform(4.0, 8.0, 5));
}

// Prices A and B move to from each pair in the unequal-price equilibrium.
inline algoprice::TransitionMatrix reported_transitions() { return algoprice::io::load_transitions(data("unequal_phi.json")); }

}  // namespace testing
