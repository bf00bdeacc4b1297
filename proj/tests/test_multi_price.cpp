#include <doctest.h>

#include <cmath>

#include "algoprice/errors.hpp"
#include "algoprice/io.hpp"
#include "algoprice/multi_price.hpp"
#include "algoprice/two_price.hpp"
#include "support.hpp"

using namespace algoprice;

namespace {

TransitionMatrix unequal_phi() { return io::load_transitions(testing::data("unequal_phi.json")); }

// Symmetric K=2 transition matrix: code packs seller A's successor of pair
// (a, b) in bits 2*(2a+b); seller B mirrors it.
TransitionMatrix symmetric_k2(int code) {
  TransitionMatrix phi;
  phi.k = 2;
  phi.next[0].resize(4);
  phi.next[1].resize(4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const int s = (code >> (2 * (2 * a + b))) & 3;
      const PricePair succ{s / 2, s % 2};
      phi.set(0, {a, b}, succ);
      phi.set(1, {b, a}, {succ.b, succ.a});
    }
  return phi;
}

// (C,C) -> (M,M); undercut pairs reset to (C,C); the rest stay
constexpr int kGrim = 0b11100011;
// (C,C) -> (M,M); undercut pairs alternate
constexpr int kAlternating = 0b11101011;
// (C,C) -> (M,M); the undercut seller restores (M,M)
constexpr int kForgiving = 0b11110011;

void check_value_paths(const TransitionMatrix& phi, const PayoffTables& t, const Matrix& table) {
  const int k = phi.k;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        const ValuePath path = transition_value_path(phi, t, c, {a, b});
        for (size_t m = 0; m < path.moments.size(); ++m) {
          CHECK(path.moments[m].u >= table(0, 0) - 1e-12);
          if (m > 0) CHECK(path.moments[m].v >= table(0, 0) - 1e-12);
          // the next adjuster gets at least what it held while waiting
          if (m + 1 < path.moments.size()) CHECK(path.moments[m + 1].u >= path.moments[m].v - 1e-12);
        }
      }
}

}  // namespace

TEST_CASE("continuation tables of the unequal-price transitions") {
  const Matrix table = testing::calibrated_unequal_table();
  const PayoffTables t = payoffs_from_transitions(unequal_phi(), table, 0.95);
  // (8,8) and (7,8) are absorbing, so the values equal the per-period payoffs
  CHECK(t.seller[0].v(4, 4) == doctest::Approx(table(4, 4)));
  CHECK(std::abs(t.seller[0].v(4, 4) - 2.95) <= 0.01);
  CHECK(t.seller[0].v(3, 4) == doctest::Approx(table(3, 4)));
  CHECK(std::abs(t.seller[0].v(3, 4) - 3.39) <= 0.01);
  CHECK(t.seller[0].v(3, 4) > t.seller[0].v(4, 4));
}

TEST_CASE("continuation tables satisfy the before/after identities") {
  const Matrix table = testing::calibrated_unequal_table();
  for (double beta : {0.3, 0.9, 0.999}) {
    const PayoffTables t = payoffs_from_transitions(unequal_phi(), table, beta);
    for (int i = 0; i < 2; ++i) {
      const SellerTables& s = t.seller[i];
      const SellerTables& o = t.seller[1 - i];
      double u_lower = -INFINITY;
      for (int p = 0; p < 5; ++p) {
        double worst = INFINITY;
        for (int q = 0; q < 5; ++q) {
          CHECK(std::abs(s.V(p, q) - ((1 - beta) * table(p, q) + beta * s.u(p, q))) <= 1e-12);
          CHECK(std::abs(s.U(p, q) - ((1 - beta) * table(p, q) + beta * s.v(p, q))) <= 1e-12);
          worst = std::min(worst, (1 - beta) * table(p, q) + beta * s.v(p, q));
        }
        u_lower = std::max(u_lower, worst);
      }
      CHECK(s.u_lower == doctest::Approx(u_lower));
      // the punishing price minimizes the opponent's before-payoff
      for (int x = 0; x < 5; ++x) {
        double m = INFINITY;
        for (int p = 0; p < 5; ++p) m = std::min(m, o.U(x, p));
        CHECK(o.U(x, s.worst_response[x]) == doctest::Approx(m));
      }
    }
  }
}

TEST_CASE("one-step absorption at the monopoly pair") {
  const Matrix table = normalized_table(0.4, 0.8);
  TransitionMatrix phi;
  phi.k = 2;
  phi.next[0].assign(4, {1, 1});
  phi.next[1].assign(4, {1, 1});
  const double beta = 0.7;
  const PayoffTables t = payoffs_from_transitions(phi, table, beta);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) CHECK(t.seller[0].V(p, q) == doctest::Approx((1 - beta) * table(p, q) + beta * table(1, 1)));
}

TEST_CASE("feasibility rules") {
  const Matrix table = testing::calibrated_unequal_table();
  const PayoffTables t = payoffs_from_transitions(unequal_phi(), table, 0.95);
  // staying at the monopoly pair
  CHECK(check_feasible({4, 4}, {4, 4}, t, 0));
  // the opponent price must move unless the pair stays
  CHECK_FALSE(check_feasible({4, 4}, {3, 4}, t, 0));
  const TransitionMatrix phi = unequal_phi();
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) {
        const PricePair p{a, b};
        CHECK(check_feasible(own_view(i, p), own_view(i, phi.successor(i, p)), t, i));
      }
}

TEST_CASE("the unequal-price transitions are an equilibrium at high patience") {
  const Matrix table = testing::calibrated_unequal_table();
  for (double beta : {0.9, 0.95, 0.999}) {
    const VerificationReport rep = verify_equilibrium(unequal_phi(), table, beta);
    CAPTURE(beta);
    CHECK(rep.confirmed());
    CHECK(rep.violated_constraints.empty());
    CHECK(rep.values_above_competitive);
    CHECK(rep.values_reach_monopoly_bound);
    check_value_paths(unequal_phi(), payoffs_from_transitions(unequal_phi(), table, beta), table);
  }
  CHECK_FALSE(verify_equilibrium(unequal_phi(), table, 0.5).confirmed());
}

TEST_CASE("rerouting a transition breaks optimality") {
  const Matrix table = testing::calibrated_unequal_table();
  TransitionMatrix phi = unequal_phi();
  phi.set(1, {4, 4}, {0, 0});
  const VerificationReport rep = verify_equilibrium(phi, table, 0.95);
  CHECK_FALSE(rep.confirmed());
  bool any_suboptimal = false;
  for (int i = 0; i < 2; ++i)
    for (char f : rep.optimal[i]) any_suboptimal |= f == 0;
  CHECK(any_suboptimal);
}

TEST_CASE("monopoly bound arithmetic") {
  const Matrix table = testing::reported_unequal_table();
  CHECK(monopoly_value_bound(table, 0.95) == doctest::Approx(0.05 * 2.87 + 0.95 * 2.95));
  CHECK(std::abs(monopoly_value_bound(table, 0.95) - 2.946) <= 0.01);

  const ValuePath competitive{{{0, table(0, 0), table(0, 0)}, {1, table(0, 0), table(0, 0)}}, 0};
  const ValueBoundFlags f = value_bound_check(competitive, table, 0.95);
  CHECK(f.both_above_competitive);
  CHECK_FALSE(f.one_eventually_near_monopoly);
}

TEST_CASE("alternating path values stay above the competitive payoff") {
  const double x = 1.0, y = 0.1, beta = 0.5;
  const Matrix table = normalized_table(x, y);
  const TransitionMatrix phi = symmetric_k2(kAlternating);
  const PayoffTables t = payoffs_from_transitions(phi, table, beta);
  const ValuePath path = transition_value_path(phi, t, 0, {0, 1});
  const ValueBoundFlags f = value_bound_check(path, table, beta);
  CHECK(f.both_above_competitive);
  // the undercutter earns (1+x) now and -y next, discounted alternately
  const double high = ((1 - beta) * (1 + x) - beta * (1 - beta) * y) / (1 - beta * beta);
  const double low = ((1 - beta) * (-y) + beta * (1 - beta) * (1 + x)) / (1 - beta * beta);
  const auto& m = path.moments[path.cycle_start];
  CHECK(std::max(m.u, m.v) == doctest::Approx(high));
  CHECK(std::min(m.u, m.v) == doctest::Approx(low));
}

TEST_CASE("algorithm recovery") {
  const Matrix table = testing::calibrated_unequal_table();
  const PayoffTables t = payoffs_from_transitions(unequal_phi(), table, 0.95);
  const auto& wr = t.seller[0].worst_response;
  const Algorithm stay = recover_algorithm({4, 4}, {4, 4}, wr);
  CHECK(stay[4] == 4);
  for (int x = 0; x < 4; ++x) CHECK(stay[x] == wr[x]);

  const Algorithm s = recover_algorithm({2, 1}, {3, 4}, wr);
  CHECK(s[1] == 2);
  CHECK(s[4] == 3);
  for (int x : {0, 2, 3}) CHECK(s[x] == wr[x]);
  CHECK_THROWS_AS(recover_algorithm({2, 1}, {3, 1}, wr), InfeasibleSuccessorError);

  // seller A holding (7,8): 8 -> 7 on path, punishment elsewhere keeps B at or
  // below its guaranteed payoff; also for the hand-written punishment 8->7,
  // 7->6, 6->5, 5->4, 4->5
  const SellerTables& b = t.seller[1];
  const Algorithm unequal = recover_algorithm({3, 4}, {3, 4}, wr);
  const Algorithm hand = {1, 0, 1, 2, 3};
  for (const Algorithm& alg : {unequal, hand}) {
    CHECK(alg[4] == 3);
    for (int x = 0; x < 4; ++x) CHECK(b.U(x, alg[x]) <= b.u_lower + kVerifyMargin);
  }
}

TEST_CASE("first and second best") {
  const Matrix table = testing::calibrated_unequal_table();
  const PayoffTables t = payoffs_from_transitions(unequal_phi(), table, 0.95);
  const BestPair a = first_best(t, 0);
  CHECK(a.pair == OwnPair{3, 4});
  CHECK(a.value == doctest::Approx(table(3, 4)));
  const BestPair b = first_best(t, 1);
  CHECK(b.pair == OwnPair{4, 4});
  const auto a2 = second_best(t, 0, a.pair.other);
  const auto b2 = second_best(t, 1, b.pair.other);
  REQUIRE(a2.has_value());
  REQUIRE(b2.has_value());
  CHECK(a2->value <= a.value);
  CHECK(b2->value <= b.value);
  // regression values of this instance
  CHECK(a2->pair == OwnPair{1, 0});
  CHECK(a2->value == doctest::Approx(3.312268).epsilon(1e-6));
  CHECK(b2->pair == OwnPair{3, 3});
  CHECK(std::max(a2->value, b2->value) >= monopoly_value_bound(table, 0.95) - kVerifyMargin);

  // all-monopoly two-price tables
  TransitionMatrix mono;
  mono.k = 2;
  mono.next[0].assign(4, {1, 1});
  mono.next[1].assign(4, {1, 1});
  const PayoffTables tm = payoffs_from_transitions(mono, normalized_table(0.5, 0.8), 0.6);
  CHECK(first_best(tm, 0).pair == OwnPair{1, 1});
  CHECK(first_best(tm, 1).pair == OwnPair{1, 1});
}

TEST_CASE("second best can be empty") {
  // with a single opponent price allowed by the guarantee, excluding it leaves nothing
  PayoffTables t;
  t.beta = 0.5;
  for (int i = 0; i < 2; ++i) {
    SellerTables& s = t.seller[i];
    s.v = s.u = s.V = Matrix(2, 1.0);
    s.U = Matrix(2, {0, 0, 0, 1});
    s.u_lower = 1.0;
    s.worst_response = {0, 0};
  }
  const BestPair f = first_best(t, 0);
  CHECK(f.pair == OwnPair{1, 1});
  CHECK_FALSE(second_best(t, 0, 1).has_value());
}

TEST_CASE("property: two-price transition equilibria match the closed-form types") {
  for (int n = 0; n < 300; ++n) {
    const double x = testing::uniform(0.02, 2.9);
    const double y = testing::uniform(std::max(0.02, x - 0.98), 3.0);
    const double beta = testing::uniform(0.02, 0.98);
    if (std::abs(x - beta) < 1e-6 || std::abs(y - beta * (x - beta)) < 1e-6) continue;
    CAPTURE(x);
    CAPTURE(y);
    CAPTURE(beta);
    const Matrix table = normalized_table(x, y);
    std::vector<int> confirmed;
    for (int code = 0; code < 256; ++code) {
      const TransitionMatrix phi = symmetric_k2(code);
      if (verify_equilibrium(phi, table, beta).confirmed()) {
        confirmed.push_back(code);
        check_value_paths(phi, payoffs_from_transitions(phi, table, beta), table);
      }
    }
    const auto types = classify_mpe(x, y, beta, CyclePolicy::Forbidden);
    std::vector<int> expected;
    for (auto ty : types) {
      if (ty == EquilibriumType::TypeI) expected.push_back(kForgiving);
      if (ty == EquilibriumType::TypeII) expected.push_back(kGrim);
      if (ty == EquilibriumType::TypeIII) expected.push_back(kAlternating);
    }
    std::sort(expected.begin(), expected.end());
    CHECK(confirmed == expected);
  }
}
