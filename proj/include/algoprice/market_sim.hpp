#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "algoprice/dynamics.hpp"
#include "algoprice/matrix.hpp"
#include "algoprice/multi_price.hpp"
#include "algoprice/two_price.hpp"

namespace algoprice {

struct SimConfig {
  double lambda = 100.0;  // customer arrivals per unit time
  double mu = 5.0;        // revision opportunities per unit time
  double r = 0.05;        // continuous discount rate
  double dt = 1e-3;       // price tick interval
  double horizon = 200.0;
  std::uint64_t seed = 1;
};

// Throws DomainError on non-positive rates. Returns warnings, e.g. when
// dt * (r + mu) is not small.
std::vector<std::string> validate(const SimConfig& c);

double effective_beta(double mu, double r);
double precise_beta(double mu, double r, double dt);

// (lambda / r) * (1 - exp(-r K dt)) * d_pi_max
double experimentation_bound(int k, double dt, double r, double lambda, double d_pi_max);

// One adjustment epoch: the adjuster switches to `algorithm` and sets its own
// price for the first initial_prices.size() ticks.
struct ScheduleEpoch {
  Algorithm algorithm;
  std::vector<int> initial_prices;
};

// Adjusters alternate starting with first_adjuster. Before epoch 0 the
// opponent holds initial_opponent and the prices are initial_pair
// (first adjuster, opponent). epochs[cycle_start..] repeat forever.
struct Schedule {
  int first_adjuster = 0;
  Algorithm initial_opponent;
  Selection initial_pair{0, 0};
  std::vector<ScheduleEpoch> epochs;
  std::size_t cycle_start = 0;
};

// Path of algorithm choices produced by a profile, each epoch opening with
// the adjuster's price of the selected pair held for two ticks.
Schedule profile_schedule(const MarkovProfile& profile, const Matrix& table, int first_adjuster,
                          TwoPriceAlgo opp_algorithm);

struct EpochPayoffs {
  int adjuster = 0;
  double pi = 0.0;      // tick-weighted average payoff of the adjuster
  double pi_bar = 0.0;  // same for the opponent
  double limit_pi = 0.0;
  double limit_pi_bar = 0.0;
  int transient = 0;  // ticks before the limit pair is reached
  double u_tilde = 0.0;
  double v_tilde = 0.0;
  double u_limit = 0.0;  // same recursion with limit payoffs and mu / (r + mu)
  double v_limit = 0.0;
};

struct PreciseResult {
  double beta = 0.0;
  double beta_tilde = 0.0;
  std::vector<EpochPayoffs> epochs;  // first pass through the schedule
};

// Throws CycleForbiddenError when an epoch ends in a price cycle.
PreciseResult precise_payoffs(const Schedule& schedule, const Matrix& table, const SimConfig& config);

// max |pi(p,q) - pi(p',q')|
double payoff_spread(const Matrix& table);

struct ProfilePolicy {
  MarkovProfile profile;
  CyclePolicy cycles = CyclePolicy::Forbidden;
  int first_adjuster = 0;
  TwoPriceAlgo opp_algorithm = TwoPriceAlgo::M;
};

// The first adjuster faces `start`, created by the other seller.
struct TransitionPolicy {
  TransitionMatrix phi;
  int first_adjuster = 0;
  PricePair start{0, 0};
};

using SimPolicy = std::variant<ProfilePolicy, TransitionPolicy>;

struct RunRecord {
  int run = 0;
  double u_hat = 0.0;  // first adjuster
  double v_hat = 0.0;  // other seller
  std::int64_t customers = 0;
  std::int64_t revisions = 0;
};

struct MonteCarloResult {
  std::vector<RunRecord> runs;
  double u_mean = 0.0;
  double v_mean = 0.0;
  double u_half_width = 0.0;  // 95% normal approximation
  double v_half_width = 0.0;
  double truncation_bound = 0.0;  // exp(-r horizon) * pi_max, normalized
};

MonteCarloResult monte_carlo(const SimPolicy& policy, const Matrix& table, const SimConfig& config, int n_runs,
                             int threads = 1);

// Normalized values at the first revision in the reduced model with
// beta = mu / (r + mu): first adjuster, then the other seller.
std::pair<double, double> analytic_values(const SimPolicy& policy, const Matrix& table, double beta);

}  // namespace algoprice
