#include "algoprice/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "algoprice/errors.hpp"

namespace algoprice {

namespace {

void check_algorithm(const Algorithm& s, int k) {
  if (static_cast<int>(s.size()) != k) throw DomainError("algorithm length differs from K");
  for (int v : s) {
    if (v < 0 || v >= k) throw DomainError("algorithm entry outside 0..K-1");
  }
}

}  // namespace

Trajectory iterate(const Algorithm& sA, const Algorithm& sB, int p0A, int p0B) {
  const int k = static_cast<int>(sA.size());
  check_algorithm(sA, k);
  check_algorithm(sB, k);
  if (p0A < 0 || p0A >= k || p0B < 0 || p0B >= k) throw DomainError("start pair outside grid");

  std::vector<int> seen_at(static_cast<size_t>(k) * k, -1);
  std::vector<PricePair> path;
  PricePair p{p0A, p0B};
  while (seen_at[static_cast<size_t>(p.a) * k + p.b] < 0) {
    seen_at[static_cast<size_t>(p.a) * k + p.b] = static_cast<int>(path.size());
    path.push_back(p);
    p = PricePair{sA[p.b], sB[p.a]};
  }
  const int start = seen_at[static_cast<size_t>(p.a) * k + p.b];
  Trajectory out;
  out.transient.assign(path.begin(), path.begin() + start);
  out.outcome.pairs.assign(path.begin() + start, path.end());
  return out;
}

std::vector<PricePair> consistent_pairs(const Algorithm& sA, const Algorithm& sB) {
  const int k = static_cast<int>(sA.size());
  check_algorithm(sA, k);
  check_algorithm(sB, k);
  std::vector<PricePair> out;
  for (int p = 0; p < k; ++p) {
    for (int q = 0; q < k; ++q) {
      if (sA[q] == p && sB[p] == q) out.push_back({p, q});
    }
  }
  return out;
}

PairValuation immediate_payoffs(const Matrix& table) {
  return [table](int own, int opp) { return PairValue{table(own, opp), table(opp, own)}; };
}

Selection select_pair(const Algorithm& s_opp, const Algorithm& s_own, const PairValuation& value) {
  const int k = static_cast<int>(s_own.size());
  // A pair is reachable when some start pair iterates into it. Every
  // consistent pair is reachable from itself, and starting the dynamics at an
  // arbitrary pair is exactly what one initial own price followed by the
  // algorithms achieves, so longer initial sequences reach nothing new.
  std::vector<char> reachable(static_cast<size_t>(k) * k, 0);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      auto traj = iterate(s_own, s_opp, a, b);
      if (!traj.outcome.is_cycle()) {
        auto f = traj.outcome.fixed();
        reachable[static_cast<size_t>(f.a) * k + f.b] = 1;
      }
    }
  }

  const auto pairs = consistent_pairs(s_own, s_opp);
  bool found = false;
  Selection best{0, 0};
  PairValue best_value{0.0, 0.0};
  for (const auto& p : pairs) {
    if (!reachable[static_cast<size_t>(p.a) * k + p.b]) continue;
    const PairValue v = value(p.a, p.b);
    const double tol = 1e-12 * std::max({1.0, std::abs(v.own), std::abs(best_value.own)});
    bool better = !found || v.own > best_value.own + tol;
    if (found && std::abs(v.own - best_value.own) <= tol) {
      const double tol_opp = 1e-12 * std::max({1.0, std::abs(v.opp), std::abs(best_value.opp)});
      better = v.opp > best_value.opp + tol_opp ||
               (std::abs(v.opp - best_value.opp) <= tol_opp && p.a < best.own);
    }
    if (better) {
      best = Selection{p.a, p.b};
      best_value = v;
      found = true;
    }
  }
  if (!found) throw NoFixedPairError("the algorithm pair has no consistent price pair");
  return best;
}

std::pair<double, double> cycle_value(const std::vector<PricePair>& cycle, const Matrix& table,
                                      CyclePolicy policy) {
  if (cycle.empty()) throw DomainError("empty cycle");
  switch (policy) {
    case CyclePolicy::Forbidden:
      throw CycleForbiddenError("price cycle under the forbidden-cycle policy");
    case CyclePolicy::MinPrice: {
      int min_a = cycle.front().a, min_b = cycle.front().b;
      for (const auto& p : cycle) {
        min_a = std::min(min_a, p.a);
        min_b = std::min(min_b, p.b);
      }
      return {table(min_a, min_b), table(min_b, min_a)};
    }
    case CyclePolicy::AveragePayoff: {
      double sa = 0.0, sb = 0.0;
      for (const auto& p : cycle) {
        sa += table(p.a, p.b);
        sb += table(p.b, p.a);
      }
      const double n = static_cast<double>(cycle.size());
      return {sa / n, sb / n};
    }
  }
  return {0.0, 0.0};
}

}  // namespace algoprice
