#pragma once

#include <cstddef>
#include <vector>

namespace algoprice {

// Discounted values on a deterministic state graph:
//   W_j(x) = (1 - beta) * reward_j(x) + beta * W_j(next[x]),  j in {A, B}.
// Every orbit ends in a cycle; the cycle is summed as a geometric series and
// the transient is unwound backwards, so the result is exact up to rounding.
struct OrbitValues {
  std::vector<double> a;
  std::vector<double> b;
};

OrbitValues discounted_orbit_values(const std::vector<int>& next, const std::vector<double>& reward_a,
                                    const std::vector<double>& reward_b, double beta);

// Visiting order of the orbit from `start` and the index where its cycle begins.
struct Orbit {
  std::vector<int> states;
  std::size_t cycle_start = 0;
};

Orbit follow_orbit(const std::vector<int>& next, int start);

// Per-moment continuation values along an orbit. At each moment one seller
// adjusts; u is that seller's value, v the other seller's value.
struct ValueMoment {
  int adjuster;  // 0 = seller A, 1 = seller B
  double u;
  double v;
};

struct ValuePath {
  std::vector<ValueMoment> moments;
  std::size_t cycle_start = 0;
};

}  // namespace algoprice
