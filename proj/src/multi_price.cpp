#include "algoprice/multi_price.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "algoprice/errors.hpp"

namespace algoprice {

namespace {

const char* seller_name(int i) { return i == 0 ? "A" : "B"; }

void check_phi(const TransitionMatrix& phi, const Matrix& table) {
  const int k = phi.k;
  if (k < 2 || table.size() != k) throw DomainError("transition matrix and payoff table differ in K");
  for (int i = 0; i < 2; ++i) {
    if (phi.next[i].size() != static_cast<size_t>(k) * k) throw DomainError("transition matrix is not total");
    for (const auto& p : phi.next[i]) {
      if (p.a < 0 || p.a >= k || p.b < 0 || p.b >= k) throw DomainError("successor index outside the grid");
    }
  }
}

int state_of(int k, int creator, PricePair p) { return creator * k * k + p.a * k + p.b; }

bool ge(double a, double b) { return a >= b - kVerifyMargin; }

std::string describe(int seller, OwnPair p) {
  std::ostringstream os;
  os << "seller " << seller_name(seller) << " (" << p.own << "," << p.other << ")";
  return os.str();
}

}  // namespace

PayoffTables payoffs_from_transitions(const TransitionMatrix& phi, const Matrix& table, double beta) {
  check_phi(phi, table);
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
  const int k = phi.k;
  const int n = 2 * k * k;
  std::vector<int> next(n);
  std::vector<double> ra(n), rb(n);
  for (int c = 0; c < 2; ++c) {
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        const PricePair succ = phi.successor(c, {a, b});
        const int x = state_of(k, c, {a, b});
        next[x] = state_of(k, 1 - c, succ);
        // Values are taken at the revision, so the first period counted is
        // the one of the pair created next.
        ra[x] = table(succ.a, succ.b);
        rb[x] = table(succ.b, succ.a);
      }
    }
  }
  const OrbitValues w = discounted_orbit_values(next, ra, rb, beta);

  PayoffTables t;
  t.beta = beta;
  for (int i = 0; i < 2; ++i) {
    SellerTables& s = t.seller[i];
    s.v = s.u = s.V = s.U = Matrix(k);
    const std::vector<double>& wi = i == 0 ? w.a : w.b;
    for (int p = 0; p < k; ++p) {
      for (int q = 0; q < k; ++q) {
        const PricePair ab = ab_view(i, {p, q});
        s.v(p, q) = wi[state_of(k, i, ab)];
        s.u(p, q) = wi[state_of(k, 1 - i, ab)];
        s.V(p, q) = (1.0 - beta) * table(p, q) + beta * s.u(p, q);
        s.U(p, q) = (1.0 - beta) * table(p, q) + beta * s.v(p, q);
      }
    }
  }
  for (int i = 0; i < 2; ++i) {
    SellerTables& s = t.seller[i];
    const SellerTables& o = t.seller[1 - i];
    s.u_lower = -INFINITY;
    for (int p = 0; p < k; ++p) {
      double worst = INFINITY;
      for (int q = 0; q < k; ++q) worst = std::min(worst, s.U(p, q));
      s.u_lower = std::max(s.u_lower, worst);
    }
    // Punishment of the opponent: minimize the opponent's before-payoff,
    // then its immediate payoff, then take the lowest index.
    s.worst_response.assign(k, 0);
    for (int x = 0; x < k; ++x) {
      int best = 0;
      for (int p = 1; p < k; ++p) {
        const double d = o.U(x, p) - o.U(x, best);
        if (d < -1e-12 || (std::abs(d) <= 1e-12 && table(x, p) < table(x, best))) best = p;
      }
      s.worst_response[x] = best;
    }
  }
  return t;
}

bool check_feasible(OwnPair pair, OwnPair succ, const PayoffTables& t, int i) {
  const SellerTables& o = t.seller[1 - i];
  const double u_next = o.U(succ.other, succ.own);
  return ge(u_next, o.u_lower) && ge(u_next, o.U(pair.other, pair.own)) &&
         (succ == pair || succ.other != pair.other);
}

double monopoly_value_bound(const Matrix& table, double beta) {
  const int m = table.size() - 1;
  return (1.0 - beta) * table(m - 1, m - 1) + beta * table(m, m);
}

ValueBoundFlags value_bound_check(const ValuePath& path, const Matrix& table, double beta) {
  ValueBoundFlags f;
  const double floor = table(0, 0);
  f.both_above_competitive = true;
  for (size_t k = 0; k < path.moments.size(); ++k) {
    if (!ge(path.moments[k].u, floor)) f.both_above_competitive = false;
    if (k > 0 && !ge(path.moments[k].v, floor)) f.both_above_competitive = false;
  }
  // The tail maximum is attained on the eventual cycle.
  const double bound = monopoly_value_bound(table, beta);
  for (int j = 0; j < 2; ++j) {
    double best = -INFINITY;
    for (size_t k = path.cycle_start; k < path.moments.size(); ++k) {
      const auto& m = path.moments[k];
      best = std::max(best, m.adjuster == j ? m.u : m.v);
    }
    if (ge(best, bound)) f.one_eventually_near_monopoly = true;
  }
  return f;
}

ValuePath transition_value_path(const TransitionMatrix& phi, const PayoffTables& t, int creator,
                                PricePair pair) {
  const int k = phi.k;
  std::vector<int> next(2 * k * k);
  for (int c = 0; c < 2; ++c) {
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) next[state_of(k, c, {a, b})] = state_of(k, 1 - c, phi.successor(c, {a, b}));
    }
  }
  const Orbit orbit = follow_orbit(next, state_of(k, creator, pair));
  ValuePath path;
  path.cycle_start = orbit.cycle_start;
  for (int x : orbit.states) {
    const int c = x / (k * k);
    const PricePair p{(x % (k * k)) / k, x % k};
    const OwnPair mine = own_view(c, p);
    path.moments.push_back({1 - c, t.seller[1 - c].u(mine.other, mine.own), t.seller[c].v(mine.own, mine.other)});
  }
  return path;
}

bool VerificationReport::confirmed() const {
  for (int i = 0; i < 2; ++i) {
    for (size_t x = 0; x < feasible[i].size(); ++x) {
      if (!feasible[i][x] || !optimal[i][x]) return false;
    }
  }
  return consistent && values_above_competitive && values_reach_monopoly_bound;
}

VerificationReport verify_equilibrium(const TransitionMatrix& phi, const Matrix& table, double beta) {
  const PayoffTables t = payoffs_from_transitions(phi, table, beta);
  const int k = phi.k;
  VerificationReport rep;
  rep.k = k;
  rep.consistent = true;

  for (int i = 0; i < 2; ++i) {
    const SellerTables& mine = t.seller[i];
    const SellerTables& theirs = t.seller[1 - i];
    rep.feasible[i].assign(static_cast<size_t>(k) * k, 0);
    rep.optimal[i].assign(static_cast<size_t>(k) * k, 0);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        const OwnPair pair = own_view(i, {a, b});
        const OwnPair succ = own_view(i, phi.successor(i, {a, b}));
        const size_t idx = static_cast<size_t>(a) * k + b;

        const double dv = mine.v(pair.own, pair.other) - mine.V(succ.own, succ.other);
        const double du = theirs.u(pair.other, pair.own) - theirs.U(succ.other, succ.own);
        if (std::abs(dv) > 1e-12 * std::max(1.0, std::abs(mine.v(pair.own, pair.other))) ||
            std::abs(du) > 1e-12 * std::max(1.0, std::abs(theirs.u(pair.other, pair.own)))) {
          rep.consistent = false;
          rep.violated_constraints.push_back(describe(i, pair) + ": continuation identity broken");
        }

        rep.feasible[i][idx] = check_feasible(pair, succ, t, i);
        if (!rep.feasible[i][idx]) {
          rep.violated_constraints.push_back(describe(i, pair) + ": prescribed successor infeasible");
        }

        const double v_pres = mine.V(succ.own, succ.other);
        const double u_pres = theirs.U(succ.other, succ.own);
        bool optimal = true;
        for (int p2 = 0; p2 < k && optimal; ++p2) {
          for (int q2 = 0; q2 < k; ++q2) {
            const OwnPair alt{p2, q2};
            if (alt == succ || !check_feasible(pair, alt, t, i)) continue;
            const double v_alt = mine.V(p2, q2);
            const double u_alt = theirs.U(q2, p2);
            const bool beaten = v_alt > v_pres + kVerifyMargin ||
                                (v_alt >= v_pres - kVerifyMargin && u_alt > u_pres + kVerifyMargin);
            if (beaten) {
              optimal = false;
              std::ostringstream os;
              os << describe(i, pair) << ": successor (" << p2 << "," << q2 << ") beats the prescribed ("
                 << succ.own << "," << succ.other << ")";
              rep.violated_constraints.push_back(os.str());
              break;
            }
          }
        }
        rep.optimal[i][idx] = optimal;
      }
    }
  }

  // Both sellers may move first, so every orbit start is checked.
  rep.values_above_competitive = true;
  rep.values_reach_monopoly_bound = true;
  for (int c = 0; c < 2; ++c) {
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        const ValueBoundFlags f = value_bound_check(transition_value_path(phi, t, c, {a, b}), table, beta);
        rep.values_above_competitive = rep.values_above_competitive && f.both_above_competitive;
        rep.values_reach_monopoly_bound = rep.values_reach_monopoly_bound && f.one_eventually_near_monopoly;
      }
    }
  }
  if (!rep.values_above_competitive) rep.violated_constraints.push_back("a continuation value falls below pi(p_C,p_C)");
  if (!rep.values_reach_monopoly_bound) rep.violated_constraints.push_back("no seller's eventual value reaches the monopoly bound");
  return rep;
}

Algorithm recover_algorithm(OwnPair pair, OwnPair succ, const std::vector<int>& worst_response) {
  const int k = static_cast<int>(worst_response.size());
  auto valid = [k](OwnPair p) { return p.own >= 0 && p.own < k && p.other >= 0 && p.other < k; };
  if (!valid(pair) || !valid(succ)) throw DomainError("pair outside the grid");
  if (succ.other == pair.other && !(succ == pair)) {
    throw InfeasibleSuccessorError("successor keeps the opponent price but changes the own price");
  }
  Algorithm s = worst_response;
  s[pair.other] = pair.own;
  s[succ.other] = succ.own;
  return s;
}

namespace {

std::optional<BestPair> constrained_best(const PayoffTables& t, int i, std::optional<int> exclude_q) {
  const SellerTables& mine = t.seller[i];
  const SellerTables& theirs = t.seller[1 - i];
  const int k = mine.V.size();
  std::optional<BestPair> best;
  double best_u = 0.0;
  for (int p = 0; p < k; ++p) {
    for (int q = 0; q < k; ++q) {
      if (exclude_q && q == *exclude_q) continue;
      const double u = theirs.U(q, p);
      if (!ge(u, theirs.u_lower)) continue;
      const double v = mine.V(p, q);
      const bool better = !best || v > best->value + kVerifyMargin ||
                          (v >= best->value - kVerifyMargin && u > best_u + kVerifyMargin);
      if (better) {
        best = BestPair{{p, q}, v};
        best_u = u;
      }
    }
  }
  return best;
}

}  // namespace

BestPair first_best(const PayoffTables& t, int i) {
  auto b = constrained_best(t, i, std::nullopt);
  if (!b) throw ConsistencyError("no pair meets the opponent's guaranteed payoff");
  return *b;
}

std::optional<BestPair> second_best(const PayoffTables& t, int i, int q_star) {
  return constrained_best(t, i, q_star);
}

}  // namespace algoprice
