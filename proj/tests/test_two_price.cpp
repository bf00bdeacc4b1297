#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "algoprice/errors.hpp"
#include "algoprice/two_price.hpp"
#include "support.hpp"

using namespace algoprice;
using A = TwoPriceAlgo;

namespace {

bool has(const std::vector<EquilibriumType>& v, EquilibriumType t) { return std::find(v.begin(), v.end(), t) != v.end(); }

struct Pd {
  double x, y, beta;
};

// Uniform over the valid region x > 0, y > max(0, x - 1), away from the
// classification boundaries by a small margin.
Pd random_pd() {
  for (;;) {
    const double x = testing::uniform(0.02, 3.0);
    const double y = testing::uniform(std::max(0.02, x - 0.98), 3.0);
    const double beta = testing::uniform(0.02, 0.98);
    if (std::abs(x - beta) < 1e-3 || std::abs(y - beta * (x - beta)) < 1e-3) continue;
    return {x, y, beta};
  }
}

}  // namespace

TEST_CASE("outcome map matches the two-price outcome table") {
  // rows: adjuster (last to choose), columns: opponent; pair = (adjuster, opponent), 1 = p_M
  struct Cell {
    A own, opp;
    int p, q;
  };
  const std::vector<Cell> fixed = {
      {A::M, A::M, 1, 1}, {A::M, A::C, 1, 0}, {A::M, A::T, 1, 1}, {A::M, A::R, 1, 0},
      {A::C, A::M, 0, 1}, {A::C, A::C, 0, 0}, {A::C, A::T, 0, 0}, {A::C, A::R, 0, 1},
      {A::T, A::M, 1, 1}, {A::T, A::C, 0, 0}, {A::T, A::T, 1, 1},
      {A::R, A::M, 0, 1}, {A::R, A::C, 1, 0}, {A::R, A::R, 0, 1},
  };
  const OutcomeMap map = outcome_map(testing::pd_table(), CyclePolicy::Forbidden);
  for (const Cell& c : fixed) {
    const StageOutcome& st = map[static_cast<int>(c.own)][static_cast<int>(c.opp)];
    CAPTURE(algo_name(c.own));
    CAPTURE(algo_name(c.opp));
    REQUIRE_FALSE(st.cycle);
    CHECK(st.pair == Selection{c.p, c.q});
  }
  const StageOutcome& tr = map[static_cast<int>(A::T)][static_cast<int>(A::R)];
  REQUIRE(tr.cycle);
  CHECK_FALSE(tr.feasible);
  CHECK(tr.pairs == std::vector<PricePair>{{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  const StageOutcome& rt = map[static_cast<int>(A::R)][static_cast<int>(A::T)];
  REQUIRE(rt.cycle);
  CHECK(rt.pairs == std::vector<PricePair>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

TEST_CASE("classification examples") {
  using E = EquilibriumType;
  CHECK(classify_mpe(1, 1, 0.5, CyclePolicy::Forbidden) == std::vector<E>{E::TypeII});
  CHECK(classify_mpe(0.3, 0.5, 0.5, CyclePolicy::Forbidden) == std::vector<E>{E::TypeI});
  CHECK(classify_mpe(1, 0.2, 0.5, CyclePolicy::Forbidden) == std::vector<E>{E::TypeII, E::TypeIII});
  CHECK(classify_mpe(1, 0.2, 0.5, CyclePolicy::MinPrice) == std::vector<E>{E::TypeII, E::TypeIII});
  // equal-average cycles: 4*0.9 - 2 - 3*0.2 = 1.0
  CHECK(classify_mpe(0.2, 0.5, 0.9, CyclePolicy::AveragePayoff) == std::vector<E>{E::TypeIPrime});
  CHECK(classify_mpe(0.2, 1.5, 0.9, CyclePolicy::AveragePayoff) == std::vector<E>{E::TypeI});
  CHECK(classify_mpe(0.2, 1.0, 0.9, CyclePolicy::AveragePayoff) == std::vector<E>{E::TypeI, E::TypeIPrime});
  CHECK_THROWS_AS(classify_mpe(2, 0.5, 0.5, CyclePolicy::Forbidden), DomainError);
  CHECK_THROWS_AS(classify_mpe(1, 1, 1.0, CyclePolicy::Forbidden), DomainError);
}

TEST_CASE("outcomes of equilibrium types") {
  CHECK(outcome_of(EquilibriumType::TypeI).kind == OutcomeDescriptor::Kind::Monopoly);
  CHECK(outcome_of(EquilibriumType::TypeII).kind == OutcomeDescriptor::Kind::Monopoly);
  CHECK(outcome_of(EquilibriumType::TypeIPrime).kind == OutcomeDescriptor::Kind::Monopoly);
  CHECK(outcome_of(EquilibriumType::TypeIII).kind == OutcomeDescriptor::Kind::Alternating);
  CHECK(outcome_of(EquilibriumType::TypeII).description == "monopoly (p_M,p_M)");
}

TEST_CASE("alternating-price discount window") {
  const auto w = type3_beta_window(1, 0.2);
  REQUIRE(w.has_value());
  CHECK(w->first == doctest::Approx(0.5 - std::sqrt(0.05)));
  CHECK(w->second == doctest::Approx(0.5 + std::sqrt(0.05)));
  CHECK_FALSE(type3_beta_window(1, 0.3).has_value());
  CHECK_FALSE(type3_beta_window(2.5, 0.1).has_value());
}

TEST_CASE("property: the window shrinks as y approaches x^2/4") {
  for (int n = 0; n < 100; ++n) {
    const double x = testing::uniform(0.05, 1.95);
    const double cap = x * x / 4;
    const double floor = std::max(0.0, x - 1) + 1e-6;
    const double y1 = testing::uniform(floor, floor + (cap - floor) * 0.999);
    const double y2 = y1 + (cap - y1) * testing::uniform(0.1, 0.9);
    const auto w1 = type3_beta_window(x, y1), w2 = type3_beta_window(x, y2);
    REQUIRE(w1.has_value());
    REQUIRE(w2.has_value());
    CHECK(w2->second - w2->first <= w1->second - w1->first);
    CHECK(w2->first >= w1->first);
    // inside the window the alternating type is present
    const double mid = 0.5 * (w1->first + w1->second);
    CHECK(has(classify_mpe(x, y1, mid, CyclePolicy::Forbidden), EquilibriumType::TypeIII));
  }
}

TEST_CASE("monopoly uniqueness condition") {
  CHECK_FALSE(monopoly_unique_sufficient(1, 1));
  CHECK(monopoly_unique_sufficient(0.5, 1));
}

TEST_CASE("enumeration at low patience on the 2/3/0/1 game") {
  const auto profiles = enumerate_mpe(testing::pd_table(), 0.4, CyclePolicy::Forbidden);
  REQUIRE_FALSE(profiles.empty());
  const OutcomeMap map = outcome_map(testing::pd_table(), CyclePolicy::Forbidden);
  for (const auto& p : profiles) {
    CHECK(p.response(0, A::C) == A::T);
    CHECK(p.response(1, A::C) == A::T);
    CHECK(profile_shape(p) == EquilibriumType::TypeII);
    // from any revision the path ends at (p_M, p_M)
    for (A s : kTwoPriceAlgos) {
      const ValuePath path = profile_value_path(p, map, 0.4, 0, s);
      CHECK(path.moments.back().u == doctest::Approx(2.0));
      CHECK(path.moments.back().v == doctest::Approx(2.0));
    }
  }
}

TEST_CASE("enumeration with both monopoly and alternating equilibria") {
  const auto profiles = enumerate_mpe(normalized_table(1, 0.1), 0.5, CyclePolicy::Forbidden, 2);
  std::set<EquilibriumType> shapes;
  for (const auto& p : profiles)
    if (auto s = profile_shape(p)) shapes.insert(*s);
  CHECK(shapes.count(EquilibriumType::TypeII) == 1);
  CHECK(shapes.count(EquilibriumType::TypeIII) == 1);
}

TEST_CASE("property: enumeration agrees with the closed-form classification") {
  for (int n = 0; n < 200; ++n) {
    const Pd d = random_pd();
    CAPTURE(d.x);
    CAPTURE(d.y);
    CAPTURE(d.beta);
    const Matrix t = normalized_table(d.x, d.y);
    const auto profiles = enumerate_mpe(t, d.beta, CyclePolicy::Forbidden);
    REQUIRE_FALSE(profiles.empty());
    const auto types = classify_mpe(d.x, d.y, d.beta, CyclePolicy::Forbidden);
    std::set<EquilibriumType> shapes;
    const OutcomeMap map = outcome_map(t, CyclePolicy::Forbidden);
    for (const auto& p : profiles) {
      const auto shape = profile_shape(p);
      CHECK(shape.has_value());
      if (shape) shapes.insert(*shape);
      for (int i = 0; i < 2; ++i) {
        CHECK(p.response(i, A::C) == A::T);
        // never settle as the seller left at p_M against p_C
        for (A s : kTwoPriceAlgos) {
          const StageOutcome& st = map[static_cast<int>(p.response(i, s))][static_cast<int>(s)];
          CHECK(st.feasible);
          if (!st.cycle) CHECK_FALSE(st.pair == Selection{1, 0});
        }
      }
    }
    CHECK(shapes == std::set<EquilibriumType>(types.begin(), types.end()));
    const bool alternating = d.y < d.beta * (d.x - d.beta) && d.x > d.beta;
    CHECK(shapes.count(EquilibriumType::TypeIII) == (alternating ? 1u : 0u));
    const auto min_price = enumerate_mpe(t, d.beta, CyclePolicy::MinPrice);
    CHECK(min_price == profiles);
  }
}

TEST_CASE("property: equal-average cycles only add the primed type below the line") {
  for (int n = 0; n < 100; ++n) {
    const double beta = testing::uniform(0.3, 0.98);
    const double x = testing::uniform(0.02, beta - 0.01);
    const double y = testing::uniform(std::max(0.02, x - 0.98), 3.0);
    if (std::abs(y - (4 * beta - 2 - 3 * x)) < 1e-3) continue;
    const auto types = classify_mpe(x, y, beta, CyclePolicy::AveragePayoff);
    const auto profiles = enumerate_mpe(normalized_table(x, y), beta, CyclePolicy::AveragePayoff);
    REQUIRE_FALSE(profiles.empty());
    bool primed = false;
    for (const auto& p : profiles) {
      // the primed pattern answers reverse with tit-for-tat and accepts the cycle
      for (int i = 0; i < 2; ++i) primed |= p.response(i, A::R) == A::T;
    }
    CHECK(primed == has(types, EquilibriumType::TypeIPrime));
    CHECK_FALSE(has(classify_mpe(x, y, beta, CyclePolicy::Forbidden), EquilibriumType::TypeIPrime));
  }
}

TEST_CASE("region scan") {
  const RegionRaster r = scan_region(0.5, {0.0, 3.0}, {0.0, 3.0}, 300, CyclePolicy::Forbidden, 2);
  for (int j = 0; j < r.res; ++j)
    for (int i = 0; i < r.res; ++i) {
      const double x = r.x_center(i), y = r.y_center(j);
      const auto c = r.at(i, j);
      if (y <= x - 1) {
        CHECK(c == kRegionOutside);
        continue;
      }
      CHECK(c != kRegionOutside);
      if (x <= 0.5) CHECK(c == kRegionTypeI);
      else CHECK(c == (y < 0.5 * (x - 0.5) ? kRegionTypeIIAndIII : kRegionTypeII));
    }
  const std::string csv = region_csv(r);
  CHECK(csv.rfind("# codes:", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + r.res);
  CHECK_THROWS_AS(scan_region(0.5, {0.0, 3.0}, {0.0, 3.0}, 1, CyclePolicy::Forbidden), DomainError);
}
