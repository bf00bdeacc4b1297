#include "algoprice/two_price.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "algoprice/demand.hpp"
#include "algoprice/errors.hpp"
#include "algoprice/parallel.hpp"

namespace algoprice {

namespace {

constexpr int kC = 0;
constexpr int kM = 1;

void check_pd(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0) || !(y > x - 1.0)) {
    throw InvalidPdError("need x > 0, y > 0 and y > x - 1");
  }
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
}

int state_index(int seller, TwoPriceAlgo opp) { return seller * 4 + static_cast<int>(opp); }

struct StateGraph {
  std::vector<int> next = std::vector<int>(8);
  std::vector<double> ra = std::vector<double>(8);
  std::vector<double> rb = std::vector<double>(8);
};

StateGraph build_graph(const MarkovProfile& profile, const OutcomeMap& stages) {
  StateGraph g;
  for (int i = 0; i < 2; ++i) {
    for (TwoPriceAlgo s : kTwoPriceAlgos) {
      const TwoPriceAlgo resp = profile.response(i, s);
      const StageOutcome& st = stages[static_cast<int>(resp)][static_cast<int>(s)];
      if (!st.feasible) {
        throw CycleForbiddenError(std::string("profile answers ") + algo_name(s) + " with " +
                                  algo_name(resp) + ", which cycles");
      }
      const int x = state_index(i, s);
      g.next[x] = state_index(1 - i, resp);
      g.ra[x] = i == 0 ? st.own : st.opp;
      g.rb[x] = i == 0 ? st.opp : st.own;
    }
  }
  return g;
}

double stage_scale(const OutcomeMap& stages) {
  double scale = 1.0;
  for (const auto& row : stages) {
    for (const auto& st : row) {
      if (st.feasible) scale = std::max({scale, std::abs(st.own), std::abs(st.opp)});
    }
  }
  return scale;
}

bool check_profile(const MarkovProfile& profile, const OutcomeMap& stages, double beta, double tol) {
  StateGraph g;
  try {
    g = build_graph(profile, stages);
  } catch (const CycleForbiddenError&) {
    return false;
  }
  const OrbitValues w = discounted_orbit_values(g.next, g.ra, g.rb, beta);
  const double keep = 1.0 - beta;
  for (int i = 0; i < 2; ++i) {
    const std::vector<double>& own_w = i == 0 ? w.a : w.b;
    const std::vector<double>& opp_w = i == 0 ? w.b : w.a;
    for (TwoPriceAlgo s : kTwoPriceAlgos) {
      double value_own[4], value_opp[4];
      bool ok[4];
      double best = -INFINITY;
      for (TwoPriceAlgo a : kTwoPriceAlgos) {
        const int ai = static_cast<int>(a);
        const StageOutcome& st = stages[ai][static_cast<int>(s)];
        ok[ai] = st.feasible;
        if (!ok[ai]) continue;
        const int succ = state_index(1 - i, a);
        value_own[ai] = keep * st.own + beta * own_w[succ];
        value_opp[ai] = keep * st.opp + beta * opp_w[succ];
        best = std::max(best, value_own[ai]);
      }
      const int p = static_cast<int>(profile.response(i, s));
      if (value_own[p] < best - tol) return false;
      // Among the adjuster's optimal responses the opponent-preferred one is taken.
      for (int a = 0; a < 4; ++a) {
        if (ok[a] && value_own[a] >= best - tol && value_opp[a] > value_opp[p] + tol) return false;
      }
    }
  }
  return true;
}

bool in(TwoPriceAlgo s, std::initializer_list<TwoPriceAlgo> set) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

std::optional<EquilibriumType> seller_shape(const std::array<TwoPriceAlgo, 4>& f) {
  using A = TwoPriceAlgo;
  const A m = f[0], c = f[1], t = f[2], r = f[3];
  if (c != A::T) return std::nullopt;
  if (r == A::C && m == A::C && t == A::T) return EquilibriumType::TypeII;
  if (r == A::R && m == A::R && t == A::T) return EquilibriumType::TypeIII;
  if (in(t, {A::T, A::M}) && in(m, {A::T, A::M})) {
    if (r == A::C) return EquilibriumType::TypeI;
    if (r == A::T) return EquilibriumType::TypeIPrime;
  }
  return std::nullopt;
}

}  // namespace

const char* algo_name(TwoPriceAlgo s) {
  switch (s) {
    case TwoPriceAlgo::M: return "s_M";
    case TwoPriceAlgo::C: return "s_C";
    case TwoPriceAlgo::T: return "s_T";
    case TwoPriceAlgo::R: return "s_R";
  }
  return "?";
}

TwoPriceAlgo algo_from_name(const std::string& name) {
  for (TwoPriceAlgo s : kTwoPriceAlgos) {
    if (name == algo_name(s)) return s;
  }
  throw DomainError("unknown two-price algorithm '" + name + "'");
}

Algorithm to_algorithm(TwoPriceAlgo s) {
  switch (s) {
    case TwoPriceAlgo::M: return {kM, kM};
    case TwoPriceAlgo::C: return {kC, kC};
    case TwoPriceAlgo::T: return {kC, kM};
    case TwoPriceAlgo::R: return {kM, kC};
  }
  return {};
}

StageOutcome stage_outcome(TwoPriceAlgo own, TwoPriceAlgo opp, const Matrix& table, CyclePolicy policy) {
  if (table.size() != 2) throw DomainError("two-price stage outcomes need a 2x2 table");
  const Algorithm so = to_algorithm(own), sp = to_algorithm(opp);
  StageOutcome out;
  if (consistent_pairs(so, sp).empty()) {
    out.cycle = true;
    out.pairs = iterate(so, sp, kC, kC).outcome.pairs;
    if (policy == CyclePolicy::Forbidden) {
      out.feasible = false;
    } else {
      std::tie(out.own, out.opp) = cycle_value(out.pairs, table, policy);
    }
    return out;
  }
  out.pair = select_pair(sp, so, immediate_payoffs(table));
  out.own = table(out.pair.own, out.pair.opp);
  out.opp = table(out.pair.opp, out.pair.own);
  return out;
}

OutcomeMap outcome_map(const Matrix& table, CyclePolicy policy) {
  OutcomeMap map;
  for (TwoPriceAlgo own : kTwoPriceAlgos) {
    for (TwoPriceAlgo opp : kTwoPriceAlgos) {
      map[static_cast<int>(own)][static_cast<int>(opp)] = stage_outcome(own, opp, table, policy);
    }
  }
  return map;
}

const char* type_name(EquilibriumType t) {
  switch (t) {
    case EquilibriumType::TypeI: return "TypeI";
    case EquilibriumType::TypeII: return "TypeII";
    case EquilibriumType::TypeIII: return "TypeIII";
    case EquilibriumType::TypeIPrime: return "TypeIPrime";
  }
  return "?";
}

std::vector<EquilibriumType> classify_mpe(double x, double y, double beta, CyclePolicy policy) {
  check_pd(x, y);
  check_beta(beta);
  std::vector<EquilibriumType> out;
  if (x > beta) {
    out.push_back(EquilibriumType::TypeII);
    if (y < beta * (x - beta)) out.push_back(EquilibriumType::TypeIII);
    return out;
  }
  if (policy != CyclePolicy::AveragePayoff) return {EquilibriumType::TypeI};
  const double threshold = 4.0 * beta - 2.0 - 3.0 * x;
  if (y >= threshold) out.push_back(EquilibriumType::TypeI);
  if (y <= threshold) out.push_back(EquilibriumType::TypeIPrime);
  return out;
}

OutcomeDescriptor outcome_of(EquilibriumType t) {
  if (t == EquilibriumType::TypeIII) {
    return {OutcomeDescriptor::Kind::Alternating, "alternating (p_C,p_M) -> (p_M,p_C)"};
  }
  return {OutcomeDescriptor::Kind::Monopoly, "monopoly (p_M,p_M)"};
}

std::optional<std::pair<double, double>> type3_beta_window(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw InvalidPdError("need x > 0 and y > 0");
  if (!(x < 2.0) || !(y < 0.25 * x * x)) return std::nullopt;
  const double half = 0.5 * x;
  const double root = std::sqrt(half * half - y);
  const double lo = std::max(half - root, 0.0);
  const double hi = std::min(half + root, 1.0);
  if (!(lo < hi)) return std::nullopt;
  return std::make_pair(lo, hi);
}

bool monopoly_unique_sufficient(double x, double y) {
  check_pd(x, y);
  return y > x;
}

ProfileValues evaluate_profile(const MarkovProfile& profile, const OutcomeMap& stages, double beta) {
  check_beta(beta);
  const StateGraph g = build_graph(profile, stages);
  const OrbitValues w = discounted_orbit_values(g.next, g.ra, g.rb, beta);
  ProfileValues pv{};
  for (int i = 0; i < 2; ++i) {
    for (TwoPriceAlgo s : kTwoPriceAlgos) {
      const int si = static_cast<int>(s);
      pv.u[i][si] = (i == 0 ? w.a : w.b)[state_index(i, s)];
      pv.v[i][si] = (i == 0 ? w.a : w.b)[state_index(1 - i, s)];
    }
  }
  return pv;
}

bool is_markov_equilibrium(const MarkovProfile& profile, const OutcomeMap& stages, double beta) {
  check_beta(beta);
  return check_profile(profile, stages, beta, 1e-12 * stage_scale(stages));
}

std::vector<MarkovProfile> enumerate_mpe(const Matrix& table, double beta, CyclePolicy policy,
                                         int threads) {
  check_beta(beta);
  normalize_two_price(table);
  const OutcomeMap stages = outcome_map(table, policy);
  const double tol = 1e-12 * stage_scale(stages);

  // All response maps of one seller that avoid infeasible (cycling) answers.
  std::vector<std::array<TwoPriceAlgo, 4>> maps;
  std::array<TwoPriceAlgo, 4> f{};
  auto build = [&](auto&& self, int s) -> void {
    if (s == 4) {
      maps.push_back(f);
      return;
    }
    for (TwoPriceAlgo a : kTwoPriceAlgos) {
      if (!stages[static_cast<int>(a)][s].feasible) continue;
      f[s] = a;
      self(self, s + 1);
    }
  };
  build(build, 0);

  const int n = static_cast<int>(maps.size());
  std::vector<std::vector<MarkovProfile>> found(n);
  parallel_for(n, threads, [&](int ia) {
    for (int ib = 0; ib < n; ++ib) {
      MarkovProfile p{{maps[ia], maps[ib]}};
      if (check_profile(p, stages, beta, tol)) found[ia].push_back(p);
    }
  });
  std::vector<MarkovProfile> out;
  for (auto& v : found) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::optional<EquilibriumType> profile_shape(const MarkovProfile& profile) {
  auto a = seller_shape(profile.f[0]);
  auto b = seller_shape(profile.f[1]);
  if (a && b && *a == *b) return a;
  return std::nullopt;
}

ValuePath profile_value_path(const MarkovProfile& profile, const OutcomeMap& stages, double beta,
                             int first_adjuster, TwoPriceAlgo opp_algorithm) {
  check_beta(beta);
  const StateGraph g = build_graph(profile, stages);
  const OrbitValues w = discounted_orbit_values(g.next, g.ra, g.rb, beta);
  const Orbit orbit = follow_orbit(g.next, state_index(first_adjuster, opp_algorithm));
  ValuePath path;
  path.cycle_start = orbit.cycle_start;
  for (int x : orbit.states) {
    const int adj = x / 4;
    path.moments.push_back({adj, adj == 0 ? w.a[x] : w.b[x], adj == 0 ? w.b[x] : w.a[x]});
  }
  return path;
}

std::uint8_t region_code(const std::vector<EquilibriumType>& types) {
  auto has = [&](EquilibriumType t) { return std::find(types.begin(), types.end(), t) != types.end(); };
  if (has(EquilibriumType::TypeII)) {
    return has(EquilibriumType::TypeIII) ? kRegionTypeIIAndIII : kRegionTypeII;
  }
  if (has(EquilibriumType::TypeIPrime)) {
    return has(EquilibriumType::TypeI) ? kRegionTypeIAndIPrime : kRegionTypeIPrime;
  }
  return has(EquilibriumType::TypeI) ? kRegionTypeI : kRegionOutside;
}

RegionRaster scan_region(double beta, std::pair<double, double> x_range, std::pair<double, double> y_range,
                         int res, CyclePolicy policy, int threads) {
  check_beta(beta);
  if (res < 2) throw DomainError("scan resolution must be at least 2");
  if (!(x_range.first < x_range.second) || !(y_range.first < y_range.second) || x_range.first < 0.0 ||
      y_range.first < 0.0) {
    throw DomainError("scan ranges must be non-empty and non-negative");
  }
  RegionRaster r{x_range.first, x_range.second, y_range.first, y_range.second, res, beta, {}};
  r.code.assign(static_cast<size_t>(res) * res, kRegionOutside);
  parallel_for(res, threads, [&](int j) {
    const double y = r.y_center(j);
    for (int i = 0; i < res; ++i) {
      const double x = r.x_center(i);
      if (!(y > x - 1.0)) continue;
      r.code[static_cast<size_t>(j) * res + i] = region_code(classify_mpe(x, y, beta, policy));
    }
  });
  return r;
}

std::string region_csv(const RegionRaster& r) {
  std::ostringstream os;
  os.precision(10);
  os << "# codes: 0=outside (y<=x-1), 1=TypeI, 2=TypeII, 3=TypeII+TypeIII, 4=TypeIPrime, "
        "5=TypeI+TypeIPrime\n";
  os << "# beta=" << r.beta << " x=[" << r.x_lo << "," << r.x_hi << "] y=[" << r.y_lo << "," << r.y_hi
     << "] res=" << r.res << "; row j is the y cell centred at y_lo+(j+0.5)*(y_hi-y_lo)/res\n";
  for (int j = 0; j < r.res; ++j) {
    for (int i = 0; i < r.res; ++i) {
      if (i) os << ',';
      os << static_cast<int>(r.at(i, j));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace algoprice
