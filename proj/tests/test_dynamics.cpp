#include <doctest.h>

#include <algorithm>
#include <set>

#include "algoprice/dynamics.hpp"
#include "algoprice/errors.hpp"
#include "algoprice/two_price.hpp"
#include "support.hpp"

using namespace algoprice;

namespace {

const Algorithm sM = to_algorithm(TwoPriceAlgo::M);
const Algorithm sC = to_algorithm(TwoPriceAlgo::C);
const Algorithm sT = to_algorithm(TwoPriceAlgo::T);
const Algorithm sR = to_algorithm(TwoPriceAlgo::R);

Algorithm random_algorithm(int k) {
  Algorithm s(k);
  for (int& p : s) p = testing::uniform_int(0, k - 1);
  return s;
}

PricePair step(const Algorithm& sA, const Algorithm& sB, PricePair p) { return {sA[p.b], sB[p.a]}; }

}  // namespace

TEST_CASE("two-price algorithms") {
  CHECK(sM == Algorithm{1, 1});
  CHECK(sC == Algorithm{0, 0});
  CHECK(sT == Algorithm{0, 1});
  CHECK(sR == Algorithm{1, 0});
}

TEST_CASE("tit-for-tat against reverse cycles through all four pairs") {
  const Trajectory t = iterate(sT, sR, 0, 0);
  REQUIRE(t.outcome.is_cycle());
  CHECK(t.outcome.pairs == std::vector<PricePair>{{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(t.transient.empty());
}

TEST_CASE("constant algorithms fix at once") {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Trajectory t = iterate(sM, sC, a, b);
      REQUIRE_FALSE(t.outcome.is_cycle());
      CHECK(t.outcome.fixed() == PricePair{1, 0});
      CHECK(t.transient.size() <= 1);
    }
}

TEST_CASE("consistent pairs") {
  CHECK(consistent_pairs(sR, sR) == std::vector<PricePair>{{0, 1}, {1, 0}});
  CHECK(consistent_pairs(sT, sT) == std::vector<PricePair>{{0, 0}, {1, 1}});
  CHECK(consistent_pairs(sT, sR).empty());
}

TEST_CASE("pair selection") {
  const Matrix t = testing::pd_table();
  // reverse against reverse: the adjuster takes the undercutting side
  CHECK(select_pair(sR, sR, immediate_payoffs(t)) == Selection{0, 1});
  CHECK(select_pair(sT, sM, immediate_payoffs(t)) == Selection{1, 1});
  CHECK(select_pair(sT, sT, immediate_payoffs(t)) == Selection{1, 1});
  // a valuation that prefers (C,C) picks it
  const PairValuation low = [](int own, int opp) { return PairValue{own == 0 && opp == 0 ? 5.0 : 0.0, 0.0}; };
  CHECK(select_pair(sT, sT, low) == Selection{0, 0});
  CHECK_THROWS_AS(select_pair(sT, sR, immediate_payoffs(t)), NoFixedPairError);
}

TEST_CASE("ties go to the opponent's benefit") {
  const Matrix t(2, {1, 1, 1, 1});
  const PairValuation v = [](int own, int opp) { return PairValue{0.0, own == 1 && opp == 1 ? 1.0 : 0.0}; };
  CHECK(select_pair(sT, sT, v) == Selection{1, 1});
  CHECK(select_pair(sR, sR, immediate_payoffs(t)) == Selection{0, 1});
}

TEST_CASE("cycle valuation") {
  const double x = 0.8, y = 0.3;
  const Matrix t = normalized_table(x, y);
  const auto cyc = iterate(sT, sR, 0, 0).outcome.pairs;
  const auto mp = cycle_value(cyc, t, CyclePolicy::MinPrice);
  CHECK(mp.first == doctest::Approx(0.0));
  CHECK(mp.second == doctest::Approx(0.0));
  const auto avg = cycle_value(cyc, t, CyclePolicy::AveragePayoff);
  CHECK(avg.first == doctest::Approx((2 + x - y) / 4));
  CHECK(avg.second == doctest::Approx((2 + x - y) / 4));
  CHECK_THROWS_AS(cycle_value(cyc, t, CyclePolicy::Forbidden), CycleForbiddenError);
}

TEST_CASE("property: iteration terminates and its outcome is sound") {
  for (int n = 0; n < 300; ++n) {
    const int k = testing::uniform_int(2, 7);
    const Algorithm sA = random_algorithm(k), sB = random_algorithm(k);
    const int a0 = testing::uniform_int(0, k - 1), b0 = testing::uniform_int(0, k - 1);
    const Trajectory t = iterate(sA, sB, a0, b0);
    CHECK(t.transient.size() + t.outcome.pairs.size() <= static_cast<size_t>(k * k));
    const auto& c = t.outcome.pairs;
    if (!t.outcome.is_cycle()) {
      CHECK(step(sA, sB, c[0]) == c[0]);
    } else {
      std::set<std::pair<int, int>> distinct;
      for (size_t i = 0; i < c.size(); ++i) {
        distinct.insert({c[i].a, c[i].b});
        CHECK(step(sA, sB, c[i]) == c[(i + 1) % c.size()]);
      }
      CHECK(distinct.size() == c.size());
    }
    const PricePair first = t.transient.empty() ? c.front() : t.transient.front();
    CHECK(first == PricePair{a0, b0});
  }
}

TEST_CASE("property: consistent pairs are the fixed outcomes over all starts") {
  for (int n = 0; n < 200; ++n) {
    const int k = testing::uniform_int(2, 6);
    const Algorithm sA = random_algorithm(k), sB = random_algorithm(k);
    std::set<std::pair<int, int>> fixed;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        const Trajectory t = iterate(sA, sB, a, b);
        if (!t.outcome.is_cycle()) fixed.insert({t.outcome.fixed().a, t.outcome.fixed().b});
      }
    std::set<std::pair<int, int>> consistent;
    for (const auto& p : consistent_pairs(sA, sB)) consistent.insert({p.a, p.b});
    CHECK(fixed == consistent);
  }
}

TEST_CASE("property: average of a symmetric cycle is symmetric") {
  for (int n = 0; n < 100; ++n) {
    const double x = testing::uniform(0.01, 3);
    const double y = testing::uniform(std::max(0.01, x - 0.99), 3);
    const auto avg = cycle_value(iterate(sT, sR, 0, 0).outcome.pairs, normalized_table(x, y), CyclePolicy::AveragePayoff);
    CHECK(avg.first == doctest::Approx(avg.second));
  }
}
