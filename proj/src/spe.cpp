#include "algoprice/spe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "algoprice/errors.hpp"
#include "algoprice/parallel.hpp"
#include "algoprice/raster_kernels.hpp"

namespace algoprice {

namespace {

constexpr std::array<TwoPriceAlgo, 4> kResponseOrder = {TwoPriceAlgo::C, TwoPriceAlgo::M, TwoPriceAlgo::T,
                                                        TwoPriceAlgo::R};

void check_table(const Matrix& table) {
  if (table.size() != 2) throw DomainError("payoff sets are computed for 2x2 tables only");
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
}

int idx(TwoPriceAlgo s) { return static_cast<int>(s); }

// Source index range [first, last] of cells whose image, scaled by beta,
// shifted by c and dilated by eps, meets [t0, t1]. Empty when first > last.
std::pair<int, int> source_range(const PayoffSet& h, double beta, double c, double t0, double t1) {
  const double cell = h.cell();
  const double eps = h.margin();
  const double scale = beta * cell;
  const double base = c + beta * h.lo;
  const double a = (t0 - eps - base) / scale - 1.0;
  const double b = (t1 + eps - base) / scale;
  const double slack = 1e-9;
  int first = static_cast<int>(std::ceil(a - slack));
  int last = static_cast<int>(std::floor(b + slack));
  first = std::max(first, 0);
  last = std::min(last, h.res - 1);
  return {first, last};
}

// Lowest column (v index) holding a true cell.
int lowest_column(const PayoffSet& h, TwoPriceAlgo s) {
  const auto& c = h.cells[idx(s)];
  int best = h.res;
  for (int iu = 0; iu < h.res; ++iu) {
    const std::uint8_t* row = c.data() + static_cast<std::size_t>(iu) * h.res;
    for (int iv = 0; iv < best; ++iv) {
      if (row[iv]) {
        best = iv;
        break;
      }
    }
  }
  return best;
}

}  // namespace

std::size_t PayoffSet::count(TwoPriceAlgo s) const {
  const auto& c = cells[idx(s)];
  return kernels::active_kernels().count_set(c.data(), c.size());
}

std::optional<std::pair<double, std::pair<double, double>>> PayoffSet::nearest(TwoPriceAlgo s, double u,
                                                                               double v) const {
  const double h = cell();
  std::optional<std::pair<double, std::pair<double, double>>> best;
  for (int iu = 0; iu < res; ++iu) {
    const double u0 = lo + iu * h, u1 = u0 + h;
    const double pu = std::clamp(u, u0, u1);
    const double du = std::abs(pu - u);
    if (best && du >= best->first) continue;
    for (int iv = 0; iv < res; ++iv) {
      if (!at(s, iu, iv)) continue;
      const double v0 = lo + iv * h;
      const double pv = std::clamp(v, v0, v0 + h);
      const double d = std::max(du, std::abs(pv - v));
      if (!best || d < best->first) best = {{d, {pu, pv}}};
    }
  }
  return best;
}

bool PayoffSet::contains(TwoPriceAlgo s, double u, double v, double slack) const {
  const auto n = nearest(s, u, v);
  return n && n->first <= slack + 1e-12;
}

std::optional<std::array<double, 4>> PayoffSet::bounds(TwoPriceAlgo s) const {
  int ulo = res, uhi = -1, vlo = res, vhi = -1;
  for (int iu = 0; iu < res; ++iu) {
    for (int iv = 0; iv < res; ++iv) {
      if (!at(s, iu, iv)) continue;
      ulo = std::min(ulo, iu);
      uhi = std::max(uhi, iu);
      vlo = std::min(vlo, iv);
      vhi = std::max(vhi, iv);
    }
  }
  if (uhi < 0) return std::nullopt;
  const double h = cell();
  return std::array<double, 4>{lo + ulo * h, lo + (uhi + 1) * h, lo + vlo * h, lo + (vhi + 1) * h};
}

PayoffSet initial_payoff_set(const Matrix& table, int res, double eps_cell) {
  check_table(table);
  if (res < 1) throw DomainError("raster resolution must be positive");
  if (!(eps_cell >= 0.0)) throw DomainError("margin must be non-negative");
  PayoffSet h;
  h.lo = table.min();
  h.hi = table.max();
  if (!(h.hi > h.lo)) throw DomainError("payoff table is constant");
  h.res = res;
  h.eps_cell = eps_cell;
  for (auto& c : h.cells) c.assign(static_cast<std::size_t>(res) * res, 1);
  return h;
}

std::vector<SpeAction> spe_actions(const Matrix& table, TwoPriceAlgo opp) {
  check_table(table);
  std::vector<SpeAction> out;
  for (TwoPriceAlgo r : kResponseOrder) {
    // No consistent pair means a cycle, which is never a permitted response.
    for (const PricePair& p : consistent_pairs(to_algorithm(r), to_algorithm(opp))) {
      out.push_back({r, {p.a, p.b}, table(p.a, p.b), table(p.b, p.a)});
    }
  }
  return out;
}

std::array<double, 4> guaranteed_payoffs(const PayoffSet& h, const Matrix& table, double beta) {
  std::array<int, 4> low;
  for (TwoPriceAlgo s : kTwoPriceAlgos) low[idx(s)] = lowest_column(h, s);
  std::array<double, 4> g;
  for (TwoPriceAlgo s : kTwoPriceAlgos) {
    double best = -std::numeric_limits<double>::infinity();
    for (const SpeAction& a : spe_actions(table, s)) {
      const int j = low[idx(a.response)];
      if (j >= h.res) continue;  // empty continuation set: skipped
      const double lowest = (1.0 - beta) * a.own + beta * (h.lo + j * h.cell()) - h.margin();
      best = std::max(best, lowest);
    }
    g[idx(s)] = best;
  }
  return g;
}

PayoffSet step(const PayoffSet& h, const Matrix& table, double beta, int threads,
               const kernels::KernelTable* kernel_table) {
  check_table(table);
  check_beta(beta);
  const int R = h.res;
  const double cell = h.cell();
  const kernels::KernelTable& k = kernel_table ? *kernel_table : kernels::active_kernels();

  // Row prefix counts over v' for each source set.
  std::array<std::vector<std::int32_t>, 4> prefix;
  for (TwoPriceAlgo s : kTwoPriceAlgos) {
    auto& p = prefix[idx(s)];
    p.resize(static_cast<std::size_t>(R) * (R + 1));
    for (int r = 0; r < R; ++r) {
      kernels::prefix_counts(h.cells[idx(s)].data() + static_cast<std::size_t>(r) * R, R,
                             p.data() + static_cast<std::size_t>(r) * (R + 1));
    }
  }
  const std::array<double, 4> floor = guaranteed_payoffs(h, table, beta);

  PayoffSet out = h;
  parallel_for(4, threads, [&](int si) {
    const TwoPriceAlgo s = kTwoPriceAlgos[si];
    std::vector<std::uint8_t> acc(static_cast<std::size_t>(R) * R, 0);
    std::vector<std::uint8_t> row_any(R), row_out(R);
    std::vector<std::int32_t> q(R + 1), col_lo(R), col_hi(R);
    // Rows entirely below the guaranteed payoff are dropped.
    int first_row = 0;
    while (first_row < R && h.lo + (first_row + 1) * cell < floor[si] - 1e-12) ++first_row;

    for (const SpeAction& a : spe_actions(table, s)) {
      const int src = idx(a.response);
      const double cu = (1.0 - beta) * a.own;
      const double cv = (1.0 - beta) * a.opp;
      // v in target column iv comes from u' rows [col_lo, col_hi).
      for (int iv = 0; iv < R; ++iv) {
        const auto [f, l] = source_range(h, beta, cv, h.lo + iv * cell, h.lo + (iv + 1) * cell);
        col_lo[iv] = f <= l ? f : 0;
        col_hi[iv] = f <= l ? l + 1 : 0;
      }
      for (int iu = first_row; iu < R; ++iu) {
        const auto [f, l] = source_range(h, beta, cu, h.lo + iu * cell, h.lo + (iu + 1) * cell);
        if (f > l) continue;
        k.range_any_strided(prefix[src].data(), R + 1, R, f, l + 1, row_any.data());
        kernels::prefix_counts(row_any.data(), R, q.data());
        k.range_any_indexed(q.data(), col_lo.data(), col_hi.data(), R, row_out.data());
        k.or_into(acc.data() + static_cast<std::size_t>(iu) * R, row_out.data(), R);
      }
    }
    k.and_into(acc.data(), h.cells[si].data(), acc.size());
    out.cells[si] = std::move(acc);
  });
  return out;
}

SpeResult solve(const Matrix& table, double beta, const SpeOptions& opt) {
  check_beta(beta);
  if (opt.resolution < 50) throw DomainError("raster resolution must be at least 50");
  if (opt.max_iter < 1) throw DomainError("max_iter must be at least 1");
  SpeResult r;
  r.sets = initial_payoff_set(table, opt.resolution, opt.eps_cell);
  const kernels::KernelTable& k = opt.kernels ? *opt.kernels : kernels::active_kernels();
  while (r.iterations < opt.max_iter) {
    PayoffSet next = step(r.sets, table, beta, opt.threads, &k);
    ++r.iterations;
    std::size_t changed = 0;
    for (int s = 0; s < 4; ++s) changed += k.count_diff(next.cells[s].data(), r.sets.cells[s].data(), next.cells[s].size());
    r.sets = std::move(next);
    if (changed == 0) {
      r.converged = true;
      break;
    }
  }
  return r;
}

std::vector<TwoPriceAlgo> extract_sequence(const PayoffSet& h, const Matrix& table, double beta, TwoPriceAlgo s0,
                                           double u, double v, int max_len) {
  check_table(table);
  check_beta(beta);
  if (max_len < 1) throw DomainError("max_len must be at least 1");
  // A true target cell is marked when the dilated image of some true source
  // cell meets it, so preimages land within this distance of a source cell.
  const double slack = (h.cell() + h.margin()) / beta;
  if (!h.contains(s0, u, v, h.cell())) throw ExtractionError("target payoff lies outside the continuation set");
  const std::array<double, 4> floor = guaranteed_payoffs(h, table, beta);

  std::vector<TwoPriceAlgo> seq{s0};
  TwoPriceAlgo s = s0;
  while (static_cast<int>(seq.size()) < max_len) {
    if (u < floor[idx(s)] - h.cell()) throw ExtractionError("payoff falls below the guaranteed payoff");
    bool moved = false;
    for (const SpeAction& a : spe_actions(table, s)) {
      const double vn = (u - (1.0 - beta) * a.own) / beta;
      const double un = (v - (1.0 - beta) * a.opp) / beta;
      const auto near = h.nearest(a.response, un, vn);
      if (!near || near->first > slack + 1e-12) continue;
      s = a.response;
      u = near->second.first;
      v = near->second.second;
      seq.push_back(s);
      moved = true;
      break;
    }
    if (!moved) throw ExtractionError("no response reproduces the payoff; raster margin too coarse");
  }
  return seq;
}

std::vector<int> run_lengths(const std::vector<std::uint8_t>& cells) {
  std::vector<int> runs;
  std::uint8_t cur = 0;
  int n = 0;
  for (std::uint8_t c : cells) {
    const std::uint8_t b = c != 0;
    if (b == cur) {
      ++n;
    } else {
      runs.push_back(n);
      cur = b;
      n = 1;
    }
  }
  runs.push_back(n);
  return runs;
}

std::vector<std::uint8_t> from_run_lengths(const std::vector<int>& runs, std::size_t n) {
  std::vector<std::uint8_t> out;
  out.reserve(n);
  std::uint8_t cur = 0;
  for (int r : runs) {
    if (r < 0) throw DomainError("negative run length");
    out.insert(out.end(), static_cast<std::size_t>(r), cur);
    cur ^= 1;
  }
  if (out.size() != n) throw DomainError("run lengths do not cover the raster");
  return out;
}

void write_pgm(std::ostream& os, const PayoffSet& h, TwoPriceAlgo s) {
  os << "P5\n" << h.res << " " << h.res << "\n255\n";
  for (int iv = h.res - 1; iv >= 0; --iv) {
    for (int iu = 0; iu < h.res; ++iu) os.put(static_cast<char>(h.at(s, iu, iv) ? 0 : 255));
  }
}

}  // namespace algoprice
