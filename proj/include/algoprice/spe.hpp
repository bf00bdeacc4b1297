#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "algoprice/dynamics.hpp"
#include "algoprice/matrix.hpp"
#include "algoprice/raster_kernels.hpp"
#include "algoprice/two_price.hpp"

namespace algoprice {

// Continuation-payoff sets of the two-price game, one per opponent
// algorithm. u is the payoff of the seller about to adjust, v the
// opponent's. Cell (iu, iv) covers [lo + iu*h, lo + (iu+1)*h] x [lo + iv*h, ...].
struct PayoffSet {
  double lo = 0.0;
  double hi = 0.0;
  int res = 0;
  double eps_cell = 1.0;  // dilation in cells
  std::array<std::vector<std::uint8_t>, 4> cells;  // by TwoPriceAlgo, row-major [iu][iv]

  double cell() const { return (hi - lo) / res; }
  double margin() const { return eps_cell * cell(); }
  bool at(TwoPriceAlgo s, int iu, int iv) const {
    return cells[static_cast<int>(s)][static_cast<std::size_t>(iu) * res + iv] != 0;
  }
  std::size_t count(TwoPriceAlgo s) const;

  // Chebyshev distance from (u, v) to the nearest true cell, with the
  // closest point; nullopt when the set is empty.
  std::optional<std::pair<double, std::pair<double, double>>> nearest(TwoPriceAlgo s, double u, double v) const;
  bool contains(TwoPriceAlgo s, double u, double v, double slack = 0.0) const;

  // Smallest and largest u (resp. v) over true cells, cell edges included.
  std::optional<std::array<double, 4>> bounds(TwoPriceAlgo s) const;
};

// Full squares [pi_min, pi_max]^2.
PayoffSet initial_payoff_set(const Matrix& table, int res, double eps_cell);

// One response with one consistent pair; own/opp are the stage payoffs of
// the adjuster and of the opponent.
struct SpeAction {
  TwoPriceAlgo response;
  Selection pair;
  double own;
  double opp;
};

// Responses to `opp` that settle on a fixed pair, every consistent pair
// listed, responses in the order s_C, s_M, s_T, s_R.
std::vector<SpeAction> spe_actions(const Matrix& table, TwoPriceAlgo opp);

// Guaranteed payoff of the adjuster against each opponent algorithm;
// -inf when no response has a non-empty continuation set.
std::array<double, 4> guaranteed_payoffs(const PayoffSet& h, const Matrix& table, double beta);

// kernel_table = nullptr uses kernels::active_kernels().
PayoffSet step(const PayoffSet& h, const Matrix& table, double beta, int threads = 1,
               const kernels::KernelTable* kernel_table = nullptr);

struct SpeOptions {
  int resolution = 200;
  double eps_cell = 1.0;
  int max_iter = 10000;
  int threads = 1;
  const kernels::KernelTable* kernels = nullptr;
};

struct SpeResult {
  PayoffSet sets;
  int iterations = 0;
  bool converged = false;
};

SpeResult solve(const Matrix& table, double beta, const SpeOptions& opt = {});

// Starts with s0 and appends the chosen responses until the sequence holds
// max_len algorithms.
std::vector<TwoPriceAlgo> extract_sequence(const PayoffSet& h, const Matrix& table, double beta, TwoPriceAlgo s0,
                                           double u, double v, int max_len);

// Alternating run lengths over the row-major raster, starting with a run of
// false cells (possibly 0).
std::vector<int> run_lengths(const std::vector<std::uint8_t>& cells);
std::vector<std::uint8_t> from_run_lengths(const std::vector<int>& runs, std::size_t n);

// Binary PGM, u to the right and v upward.
void write_pgm(std::ostream& os, const PayoffSet& h, TwoPriceAlgo s);

}  // namespace algoprice
