#include "algoprice/market_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "algoprice/errors.hpp"
#include "algoprice/orbit.hpp"
#include "algoprice/parallel.hpp"

namespace algoprice {

namespace {

void check_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive");
}

void check_algorithm(const Algorithm& s, int k) {
  if (static_cast<int>(s.size()) != k) throw DomainError("algorithm size differs from the payoff table");
  for (int p : s) {
    if (p < 0 || p >= k) throw DomainError("algorithm maps outside the price grid");
  }
}

// Own/opponent price per tick of one epoch, up to the first repeated pair.
struct EpochPath {
  std::vector<Selection> ticks;
  std::size_t fixed_at = 0;
};

EpochPath run_epoch(const Algorithm& own_alg, const Algorithm& opp_alg, const std::vector<int>& initial,
                    Selection before) {
  EpochPath path;
  std::map<std::pair<int, int>, std::size_t> seen;
  Selection cur{initial[0], opp_alg[before.own]};
  for (std::size_t n = 0;; ++n) {
    if (n >= initial.size()) {
      // From here on the pair alone determines the future.
      auto [it, fresh] = seen.try_emplace({cur.own, cur.opp}, n);
      if (!fresh) {
        if (n - it->second > 1) throw CycleForbiddenError("an epoch of the schedule ends in a price cycle");
        path.fixed_at = it->second;
        const Selection lim = path.ticks[path.fixed_at];
        while (path.fixed_at > 0 && path.ticks[path.fixed_at - 1] == lim) --path.fixed_at;
        return path;
      }
    }
    path.ticks.push_back(cur);
    const int own = n + 1 < initial.size() ? initial[n + 1] : own_alg[cur.opp];
    cur = Selection{own, opp_alg[cur.own]};
  }
}

std::uint64_t seed_for(std::uint64_t seed, int run) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

// std::exponential_distribution is implementation-defined, so draws are
// built from the raw 64-bit stream to keep runs identical across platforms.
double exp_draw(std::mt19937_64& rng, double rate) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return -std::log1p(-u) / rate;
}

}  // namespace

std::vector<std::string> validate(const SimConfig& c) {
  check_positive(c.lambda, "lambda");
  check_positive(c.mu, "mu");
  check_positive(c.r, "r");
  check_positive(c.dt, "dt");
  check_positive(c.horizon, "horizon");
  std::vector<std::string> warnings;
  if (c.dt * (c.r + c.mu) > 0.01) {
    std::ostringstream os;
    os << "dt*(r+mu) = " << c.dt * (c.r + c.mu) << " is not small; the reduced model may be inaccurate";
    warnings.push_back(os.str());
  }
  return warnings;
}

double effective_beta(double mu, double r) {
  check_positive(mu, "mu");
  check_positive(r, "r");
  return mu / (r + mu);
}

double precise_beta(double mu, double r, double dt) {
  check_positive(mu, "mu");
  check_positive(r, "r");
  check_positive(dt, "dt");
  return std::expm1(-mu * dt) / std::expm1(-(mu + r) * dt);
}

double experimentation_bound(int k, double dt, double r, double lambda, double d_pi_max) {
  if (k < 0) throw DomainError("K must be non-negative");
  check_positive(dt, "dt");
  check_positive(r, "r");
  check_positive(lambda, "lambda");
  if (!(d_pi_max >= 0.0)) throw DomainError("payoff spread must be non-negative");
  return -(lambda / r) * std::expm1(-r * k * dt) * d_pi_max;
}

double payoff_spread(const Matrix& table) { return table.max() - table.min(); }

Schedule profile_schedule(const MarkovProfile& profile, const Matrix& table, int first_adjuster,
                          TwoPriceAlgo opp_algorithm) {
  if (first_adjuster != 0 && first_adjuster != 1) throw DomainError("first adjuster must be 0 or 1");
  const OutcomeMap stages = outcome_map(table, CyclePolicy::Forbidden);
  Schedule sch;
  sch.first_adjuster = first_adjuster;
  sch.initial_opponent = to_algorithm(opp_algorithm);
  std::map<std::pair<int, int>, std::size_t> seen;
  int adj = first_adjuster;
  TwoPriceAlgo opp = opp_algorithm;
  for (;;) {
    auto [it, fresh] = seen.try_emplace({adj, static_cast<int>(opp)}, sch.epochs.size());
    if (!fresh) {
      sch.cycle_start = it->second;
      break;
    }
    const TwoPriceAlgo resp = profile.response(adj, opp);
    const StageOutcome& st = stages[static_cast<int>(resp)][static_cast<int>(opp)];
    if (st.cycle) throw CycleForbiddenError("the profile responds with a cycle-creating algorithm");
    if (sch.epochs.empty()) sch.initial_pair = st.pair;
    sch.epochs.push_back({to_algorithm(resp), {st.pair.own, st.pair.own}});
    adj = 1 - adj;
    opp = resp;
  }
  return sch;
}

PreciseResult precise_payoffs(const Schedule& sch, const Matrix& table, const SimConfig& config) {
  validate(config);
  const int k = table.size();
  if (sch.first_adjuster != 0 && sch.first_adjuster != 1) throw DomainError("first adjuster must be 0 or 1");
  if (sch.epochs.empty() || sch.cycle_start >= sch.epochs.size()) throw DomainError("schedule has no repeating part");
  check_algorithm(sch.initial_opponent, k);
  if (sch.initial_pair.own < 0 || sch.initial_pair.own >= k || sch.initial_pair.opp < 0 || sch.initial_pair.opp >= k) {
    throw DomainError("initial pair outside the price grid");
  }
  for (const auto& e : sch.epochs) {
    check_algorithm(e.algorithm, k);
    if (e.initial_prices.empty()) throw DomainError("an epoch needs at least one initial price");
    for (int p : e.initial_prices) {
      if (p < 0 || p >= k) throw DomainError("initial price outside the grid");
    }
  }

  PreciseResult res;
  res.beta = effective_beta(config.mu, config.r);
  res.beta_tilde = precise_beta(config.mu, config.r, config.dt);
  const double w = std::exp(-(config.r + config.mu) * config.dt);

  // Unroll epoch instances until the entry state of the repeating part recurs.
  struct Instance {
    std::size_t epoch;
    int adjuster;
    EpochPayoffs pay;
  };
  std::vector<Instance> inst;
  // (adjuster, prices, opponent algorithm) on entering the repeating part
  std::map<std::tuple<int, int, int, Algorithm>, std::size_t> entries;
  Selection before = sch.initial_pair;
  const Algorithm* opp_alg = &sch.initial_opponent;
  int adj = sch.first_adjuster;
  std::size_t e = 0;
  std::size_t loop_to = 0;
  for (;;) {
    if (e == sch.cycle_start) {
      auto [it, fresh] = entries.try_emplace({adj, before.own, before.opp, *opp_alg}, inst.size());
      if (!fresh) {
        loop_to = it->second;
        break;
      }
    }
    const ScheduleEpoch& ep = sch.epochs[e];
    const EpochPath path = run_epoch(ep.algorithm, *opp_alg, ep.initial_prices, before);
    EpochPayoffs p;
    p.adjuster = adj;
    const Selection lim = path.ticks[path.fixed_at];
    p.transient = static_cast<int>(path.fixed_at);
    p.limit_pi = table(lim.own, lim.opp);
    p.limit_pi_bar = table(lim.opp, lim.own);
    double wn = 1.0;
    for (std::size_t n = 0; n < path.fixed_at; ++n) {
      p.pi += wn * table(path.ticks[n].own, path.ticks[n].opp);
      p.pi_bar += wn * table(path.ticks[n].opp, path.ticks[n].own);
      wn *= w;
    }
    p.pi = (1.0 - w) * p.pi + wn * p.limit_pi;
    p.pi_bar = (1.0 - w) * p.pi_bar + wn * p.limit_pi_bar;
    inst.push_back({e, adj, p});

    before = Selection{lim.opp, lim.own};
    opp_alg = &ep.algorithm;
    adj = 1 - adj;
    e = e + 1 == sch.epochs.size() ? sch.cycle_start : e + 1;
  }

  const int n = static_cast<int>(inst.size());
  std::vector<int> next(n);
  std::vector<double> ra(n), rb(n), la(n), lb(n);
  for (int j = 0; j < n; ++j) {
    next[j] = j + 1 < n ? j + 1 : static_cast<int>(loop_to);
    const EpochPayoffs& p = inst[j].pay;
    ra[j] = p.adjuster == 0 ? p.pi : p.pi_bar;
    rb[j] = p.adjuster == 0 ? p.pi_bar : p.pi;
    la[j] = p.adjuster == 0 ? p.limit_pi : p.limit_pi_bar;
    lb[j] = p.adjuster == 0 ? p.limit_pi_bar : p.limit_pi;
  }
  const OrbitValues precise = discounted_orbit_values(next, ra, rb, res.beta_tilde);
  const OrbitValues limit = discounted_orbit_values(next, la, lb, res.beta);
  const std::size_t first_pass = std::min<std::size_t>(sch.epochs.size(), inst.size());
  for (std::size_t j = 0; j < first_pass; ++j) {
    EpochPayoffs p = inst[j].pay;
    const bool a = p.adjuster == 0;
    p.u_tilde = a ? precise.a[j] : precise.b[j];
    p.v_tilde = a ? precise.b[j] : precise.a[j];
    p.u_limit = a ? limit.a[j] : limit.b[j];
    p.v_limit = a ? limit.b[j] : limit.a[j];
    res.epochs.push_back(p);
  }
  return res;
}

std::pair<double, double> analytic_values(const SimPolicy& policy, const Matrix& table, double beta) {
  if (const auto* pp = std::get_if<ProfilePolicy>(&policy)) {
    const ProfileValues pv = evaluate_profile(pp->profile, outcome_map(table, pp->cycles), beta);
    const int i = pp->first_adjuster;
    const int s = static_cast<int>(pp->opp_algorithm);
    return {pv.u[i][s], pv.v[1 - i][s]};
  }
  const auto& tp = std::get<TransitionPolicy>(policy);
  const PayoffTables t = payoffs_from_transitions(tp.phi, table, beta);
  const int i = tp.first_adjuster;
  const OwnPair mine = own_view(i, tp.start);
  const OwnPair theirs = own_view(1 - i, tp.start);
  return {t.seller[i].u(mine.own, mine.other), t.seller[1 - i].v(theirs.own, theirs.other)};
}

namespace {

// Simulated market state. Prices are indexed by seller.
class Market {
 public:
  Market(const SimPolicy& policy, const Matrix& table) : policy_(policy), table_(table) {
    if (const auto* pp = std::get_if<ProfilePolicy>(&policy)) {
      stages_ = outcome_map(table, pp->cycles);
      first_ = pp->first_adjuster;
      algo_[1 - first_] = pp->opp_algorithm;
      // Prices before the first revision only matter for a zero-length
      // interval; start from the opponent's fixed reply to p_C.
      price_[first_] = 0;
      price_[1 - first_] = to_algorithm(pp->opp_algorithm)[0];
    } else {
      const auto& tp = std::get<TransitionPolicy>(policy);
      if (tp.phi.k != table.size()) throw DomainError("transition matrix and payoff table differ in K");
      first_ = tp.first_adjuster;
      price_[0] = tp.start.a;
      price_[1] = tp.start.b;
    }
    if (first_ != 0 && first_ != 1) throw DomainError("first adjuster must be 0 or 1");
    last_ = 1 - first_;
  }

  // Returns true when the prices may still move at the next tick.
  bool revise() {
    const int i = 1 - last_;
    if (const auto* pp = std::get_if<ProfilePolicy>(&policy_)) {
      const TwoPriceAlgo resp = pp->profile.response(i, algo_[1 - i]);
      const StageOutcome& st = stages_[static_cast<int>(resp)][static_cast<int>(algo_[1 - i])];
      if (!st.feasible) throw CycleForbiddenError("the profile responds with a cycle-creating algorithm");
      const int p = st.cycle ? st.pairs.front().a : st.pair.own;
      algo_[i] = resp;
      price_[i] = p;
      pending_[i] = p;
      last_ = i;
      return true;
    }
    const auto& tp = std::get<TransitionPolicy>(policy_);
    const PricePair succ = tp.phi.successor(last_, {price_[0], price_[1]});
    price_[0] = succ.a;
    price_[1] = succ.b;
    last_ = i;
    return false;
  }

  bool tick() {
    const Algorithm a = to_algorithm(algo_[0]), b = to_algorithm(algo_[1]);
    const int na = pending_[0] >= 0 ? pending_[0] : a[price_[1]];
    const int nb = pending_[1] >= 0 ? pending_[1] : b[price_[0]];
    price_[0] = na;
    price_[1] = nb;
    pending_ = {-1, -1};
    return !(a[price_[1]] == price_[0] && b[price_[0]] == price_[1]);
  }

  double payoff(int seller) const { return table_(price_[seller], price_[1 - seller]); }
  int first() const { return first_; }

 private:
  const SimPolicy& policy_;
  const Matrix& table_;
  OutcomeMap stages_{};
  std::array<TwoPriceAlgo, 2> algo_{TwoPriceAlgo::M, TwoPriceAlgo::M};
  std::array<int, 2> price_{0, 0};
  std::array<int, 2> pending_{-1, -1};
  int first_ = 0;
  int last_ = 1;
};

RunRecord simulate_run(const SimPolicy& policy, const Matrix& table, const SimConfig& c, int run) {
  std::mt19937_64 rng(seed_for(c.seed, run));
  Market m(policy, table);
  const double inf = std::numeric_limits<double>::infinity();
  RunRecord rec;
  rec.run = run;
  double acc[2] = {0.0, 0.0};

  std::int64_t tick_index = 0;
  double next_tick = inf;
  auto schedule_tick = [&](double t) {
    tick_index = static_cast<std::int64_t>(std::floor(t / c.dt)) + 1;
    next_tick = tick_index * c.dt;
  };
  if (m.revise()) schedule_tick(0.0);
  ++rec.revisions;
  double next_rev = exp_draw(rng, c.mu);
  double next_cust = exp_draw(rng, c.lambda);

  // Coinciding times resolve as revision, then customer, then tick.
  for (;;) {
    const double t = std::min({next_rev, next_cust, next_tick});
    if (t > c.horizon) break;
    if (next_rev <= t) {
      if (m.revise()) schedule_tick(t);
      ++rec.revisions;
      next_rev = t + exp_draw(rng, c.mu);
    } else if (next_cust <= t) {
      const double d = std::exp(-c.r * t);
      acc[0] += d * m.payoff(0);
      acc[1] += d * m.payoff(1);
      ++rec.customers;
      next_cust = t + exp_draw(rng, c.lambda);
    } else if (m.tick()) {
      ++tick_index;
      next_tick = tick_index * c.dt;
    } else {
      next_tick = inf;
    }
  }
  const double scale = c.r / c.lambda;
  rec.u_hat = acc[m.first()] * scale;
  rec.v_hat = acc[1 - m.first()] * scale;
  return rec;
}

}  // namespace

MonteCarloResult monte_carlo(const SimPolicy& policy, const Matrix& table, const SimConfig& config, int n_runs,
                             int threads) {
  validate(config);
  if (n_runs < 1) throw DomainError("at least one run is required");
  if (const auto* pp = std::get_if<ProfilePolicy>(&policy)) {
    if (table.size() != 2) throw DomainError("profiles are defined for 2x2 tables only");
    evaluate_profile(pp->profile, outcome_map(table, pp->cycles), 0.5);  // rejects forbidden cycles up front
  }
  MonteCarloResult res;
  res.runs.resize(n_runs);
  parallel_for(n_runs, threads, [&](int run) { res.runs[run] = simulate_run(policy, table, config, run); });

  double su = 0.0, sv = 0.0;
  for (const auto& r : res.runs) {
    su += r.u_hat;
    sv += r.v_hat;
  }
  res.u_mean = su / n_runs;
  res.v_mean = sv / n_runs;
  if (n_runs > 1) {
    double qu = 0.0, qv = 0.0;
    for (const auto& r : res.runs) {
      qu += (r.u_hat - res.u_mean) * (r.u_hat - res.u_mean);
      qv += (r.v_hat - res.v_mean) * (r.v_hat - res.v_mean);
    }
    res.u_half_width = 1.96 * std::sqrt(qu / (n_runs - 1) / n_runs);
    res.v_half_width = 1.96 * std::sqrt(qv / (n_runs - 1) / n_runs);
  } else {
    res.u_half_width = res.v_half_width = std::numeric_limits<double>::infinity();
  }
  res.truncation_bound = std::exp(-config.r * config.horizon) * std::max(std::abs(table.max()), std::abs(table.min()));
  return res;
}

}  // namespace algoprice
