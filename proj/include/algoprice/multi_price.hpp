#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "algoprice/dynamics.hpp"
#include "algoprice/matrix.hpp"
#include "algoprice/orbit.hpp"

namespace algoprice {

// Seller 0 is A and seller 1 is B. Pairs inside PayoffTables and the
// first/second-best results are own-first from the named seller's view;
// TransitionMatrix entries are (A price, B price).
struct OwnPair {
  int own;
  int other;
  friend bool operator==(const OwnPair&, const OwnPair&) = default;
};

inline OwnPair own_view(int seller, PricePair p) { return seller == 0 ? OwnPair{p.a, p.b} : OwnPair{p.b, p.a}; }
inline PricePair ab_view(int seller, OwnPair p) {
  return seller == 0 ? PricePair{p.own, p.other} : PricePair{p.other, p.own};
}

// next[i] maps the pair seller i just created to the pair that follows once
// the other seller has adjusted.
struct TransitionMatrix {
  int k = 0;
  std::array<std::vector<PricePair>, 2> next;

  PricePair successor(int creator, PricePair p) const {
    return next[creator][static_cast<size_t>(p.a) * k + p.b];
  }
  void set(int creator, PricePair p, PricePair succ) { next[creator][static_cast<size_t>(p.a) * k + p.b] = succ; }
};

struct SellerTables {
  Matrix v;  // after creating (own, other), before the opponent adjusts
  Matrix u;  // as the adjuster, after the opponent created (own, other)
  Matrix V;  // before-payoff when the opponent creates (own, other)
  Matrix U;  // before-payoff when creating (own, other)
  double u_lower = 0.0;
  // worst_response[x]: this seller's punishing price when the opponent charges x.
  std::vector<int> worst_response;
};

struct PayoffTables {
  double beta = 0.0;
  std::array<SellerTables, 2> seller;
};

PayoffTables payoffs_from_transitions(const TransitionMatrix& phi, const Matrix& table, double beta);

// Margin used for feasibility and optimality comparisons.
inline constexpr double kVerifyMargin = 1e-9;

bool check_feasible(OwnPair pair, OwnPair successor, const PayoffTables& tables, int seller);

struct ValueBoundFlags {
  bool both_above_competitive = false;
  bool one_eventually_near_monopoly = false;
};

double monopoly_value_bound(const Matrix& table, double beta);

ValueBoundFlags value_bound_check(const ValuePath& path, const Matrix& table, double beta);

// Values along the orbit that starts when `creator` has just set `pair`.
ValuePath transition_value_path(const TransitionMatrix& phi, const PayoffTables& tables, int creator,
                                PricePair pair);

struct VerificationReport {
  int k = 0;
  std::array<std::vector<char>, 2> feasible;  // indexed a*K+b of the created pair
  std::array<std::vector<char>, 2> optimal;
  bool consistent = false;  // v^i(p,q) = V^i(p',q') and u^{-i}(q,p) = U^{-i}(q',p')
  bool values_above_competitive = false;
  bool values_reach_monopoly_bound = false;
  std::vector<std::string> violated_constraints;

  bool confirmed() const;
};

VerificationReport verify_equilibrium(const TransitionMatrix& phi, const Matrix& table, double beta);

Algorithm recover_algorithm(OwnPair pair, OwnPair successor, const std::vector<int>& worst_response);

struct BestPair {
  OwnPair pair;
  double value;
};

BestPair first_best(const PayoffTables& tables, int seller);
std::optional<BestPair> second_best(const PayoffTables& tables, int seller, int q_star);

}  // namespace algoprice
