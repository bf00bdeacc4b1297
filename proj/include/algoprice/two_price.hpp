#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algoprice/dynamics.hpp"
#include "algoprice/matrix.hpp"
#include "algoprice/orbit.hpp"

namespace algoprice {

// The four algorithms of the two-price game, in the order of the outcome map:
// always monopoly, always competitive, tit-for-tat, reverse tit-for-tat.
// Price index 0 is p_C and 1 is p_M.
enum class TwoPriceAlgo : int { M = 0, C = 1, T = 2, R = 3 };

inline constexpr std::array<TwoPriceAlgo, 4> kTwoPriceAlgos = {TwoPriceAlgo::M, TwoPriceAlgo::C,
                                                               TwoPriceAlgo::T, TwoPriceAlgo::R};

const char* algo_name(TwoPriceAlgo s);
TwoPriceAlgo algo_from_name(const std::string& name);
Algorithm to_algorithm(TwoPriceAlgo s);

// What happens when the adjuster switches to `own` against `opp`.
struct StageOutcome {
  bool cycle = false;
  bool feasible = true;          // false only for cycles under CyclePolicy::Forbidden
  Selection pair{0, 0};          // selected fixed pair when !cycle
  std::vector<PricePair> pairs;  // cycle from (p_C, p_C), oriented (adjuster, opponent)
  double own = 0.0;
  double opp = 0.0;
};

StageOutcome stage_outcome(TwoPriceAlgo own, TwoPriceAlgo opp, const Matrix& table, CyclePolicy policy);

// [own][opp] map over the four algorithms.
using OutcomeMap = std::array<std::array<StageOutcome, 4>, 4>;
OutcomeMap outcome_map(const Matrix& table, CyclePolicy policy);

enum class EquilibriumType { TypeI, TypeII, TypeIII, TypeIPrime };

const char* type_name(EquilibriumType t);

// Sorted, duplicate-free.
std::vector<EquilibriumType> classify_mpe(double x, double y, double beta, CyclePolicy policy);

struct OutcomeDescriptor {
  enum class Kind { Monopoly, Alternating } kind;
  std::string description;
};

OutcomeDescriptor outcome_of(EquilibriumType t);

std::optional<std::pair<double, double>> type3_beta_window(double x, double y);

bool monopoly_unique_sufficient(double x, double y);

struct MarkovProfile {
  // f[seller][opponent algorithm] = response, seller 0 = A, 1 = B.
  std::array<std::array<TwoPriceAlgo, 4>, 2> f;

  TwoPriceAlgo response(int seller, TwoPriceAlgo opp) const {
    return f[seller][static_cast<int>(opp)];
  }
  friend bool operator==(const MarkovProfile&, const MarkovProfile&) = default;
};

struct ProfileValues {
  // u[i][s]: seller i's value when adjusting against opponent algorithm s.
  // v[i][s]: seller i's value when the opponent adjusts against i's algorithm s.
  std::array<std::array<double, 4>, 2> u;
  std::array<std::array<double, 4>, 2> v;
};

// Exact values of a profile; throws CycleForbiddenError when the profile
// prescribes a cycle under the forbidden policy.
ProfileValues evaluate_profile(const MarkovProfile& profile, const OutcomeMap& stages, double beta);

bool is_markov_equilibrium(const MarkovProfile& profile, const OutcomeMap& stages, double beta);

std::vector<MarkovProfile> enumerate_mpe(const Matrix& table, double beta, CyclePolicy policy,
                                         int threads = 1);

// Type whose response pattern both sellers follow, if any.
std::optional<EquilibriumType> profile_shape(const MarkovProfile& profile);

// Continuation values at each revision starting with `first_adjuster`
// responding to `opp_algorithm`.
ValuePath profile_value_path(const MarkovProfile& profile, const OutcomeMap& stages, double beta,
                             int first_adjuster, TwoPriceAlgo opp_algorithm);

// Raster codes; cells where the payoffs cannot form a prisoner's dilemma
// (y <= x - 1) are coded as outside.
enum RegionCode : std::uint8_t {
  kRegionOutside = 0,
  kRegionTypeI = 1,
  kRegionTypeII = 2,
  kRegionTypeIIAndIII = 3,
  kRegionTypeIPrime = 4,
  kRegionTypeIAndIPrime = 5,
};

struct RegionRaster {
  double x_lo, x_hi, y_lo, y_hi;
  int res;
  double beta;
  std::vector<std::uint8_t> code;  // row-major, row = y cell ascending

  double x_center(int i) const { return x_lo + (i + 0.5) * (x_hi - x_lo) / res; }
  double y_center(int j) const { return y_lo + (j + 0.5) * (y_hi - y_lo) / res; }
  std::uint8_t at(int i, int j) const { return code[static_cast<size_t>(j) * res + i]; }
};

std::uint8_t region_code(const std::vector<EquilibriumType>& types);

RegionRaster scan_region(double beta, std::pair<double, double> x_range, std::pair<double, double> y_range,
                         int res, CyclePolicy policy, int threads = 1);

std::string region_csv(const RegionRaster& raster);

}  // namespace algoprice
