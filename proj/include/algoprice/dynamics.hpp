#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "algoprice/matrix.hpp"

namespace algoprice {

// Entry j is the own price index charged next when the opponent charges j.
using Algorithm = std::vector<int>;

// Price indices of seller A and seller B.
struct PricePair {
  int a;
  int b;
  friend bool operator==(const PricePair&, const PricePair&) = default;
};

// A single pair when the iteration reaches a fixed point, otherwise the
// cycle in visiting order (length >= 2).
struct ConvergentOutcome {
  std::vector<PricePair> pairs;

  bool is_cycle() const { return pairs.size() > 1; }
  PricePair fixed() const { return pairs.front(); }
};

struct Trajectory {
  ConvergentOutcome outcome;
  std::vector<PricePair> transient;
};

enum class CyclePolicy { Forbidden, MinPrice, AveragePayoff };

// Simultaneous update p_A <- sA(p_B), p_B <- sB(p_A) from (p0A, p0B) until
// a pair repeats.
Trajectory iterate(const Algorithm& sA, const Algorithm& sB, int p0A, int p0B);

// All (p, q) with p = sA(q) and q = sB(p).
std::vector<PricePair> consistent_pairs(const Algorithm& sA, const Algorithm& sB);

struct Selection {
  int own;
  int opp;
  friend bool operator==(const Selection&, const Selection&) = default;
};

struct PairValue {
  double own;
  double opp;
};

// Value of a fixed pair to the adjuster (own) and to the opponent.
using PairValuation = std::function<PairValue(int own, int opp)>;

PairValuation immediate_payoffs(const Matrix& table);

// The consistent pair the adjuster selects by choosing its initial prices:
// best for the adjuster, then best for the opponent, then lowest own index.
Selection select_pair(const Algorithm& s_opp, const Algorithm& s_own, const PairValuation& value);

// Payoffs of sellers A and B over a cycle given in (a, b) orientation.
std::pair<double, double> cycle_value(const std::vector<PricePair>& cycle, const Matrix& table,
                                      CyclePolicy policy);

}  // namespace algoprice
