#include "algoprice/demand.hpp"

#include <boost/geometry.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "algoprice/errors.hpp"

namespace algoprice {

namespace {

constexpr double kTieTol = 1e-12;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// Root of f on [lo, hi] given f(lo) > 0 > f(hi).
template <class F>
double solve_bracketed(F f, double lo, double hi) {
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
  std::uintmax_t max_iter = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, max_iter);
  return 0.5 * (a + b);
}

// Finds p > 1/b where a first-order condition turns negative, doubling the
// upper end until the sign changes.
template <class F>
double first_root_after(F f, double lo) {
  double hi = 2.0 * lo;
  for (int i = 0; i < 200 && f(hi) > 0.0; ++i) hi *= 2.0;
  if (!(f(lo) > 0.0) || !(f(hi) < 0.0)) {
    throw DomainError("first-order condition has no sign change above 1/b");
  }
  return solve_bracketed(f, lo, hi);
}

}  // namespace

PriceGrid PriceGrid::uniform(double p_competitive, double p_monopoly, int k) {
  if (k < 2) throw DomainError("price grid needs K >= 2");
  if (!(p_competitive < p_monopoly)) throw DomainError("price grid needs p_C < p_M");
  std::vector<double> prices(k);
  const double step = (p_monopoly - p_competitive) / (k - 1);
  for (int i = 0; i < k; ++i) prices[i] = p_competitive + step * i;
  prices[k - 1] = p_monopoly;
  PriceGrid grid;
  grid.prices_ = std::move(prices);
  return grid;
}

PriceGrid PriceGrid::from_prices(std::vector<double> prices) {
  if (prices.size() < 2) throw DomainError("price grid needs K >= 2");
  const double step = prices[1] - prices[0];
  if (!(step > 0.0)) throw DomainError("prices must be strictly increasing");
  for (size_t i = 1; i < prices.size(); ++i) {
    if (std::abs((prices[i] - prices[i - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step))) {
      throw DomainError("prices must be equally spaced");
    }
  }
  PriceGrid grid;
  grid.prices_ = std::move(prices);
  return grid;
}

std::optional<int> PriceGrid::index_of(double p) const {
  const double tol = 1e-9 * std::max(1.0, std::abs(delta()));
  for (int i = 0; i < size(); ++i) {
    if (std::abs(prices_[i] - p) <= tol) return i;
  }
  return std::nullopt;
}

double profit(const ProfitModel& model, double p, double q) {
  return std::visit(
      Overloaded{
          [&](const LinearModel& m) {
            if (!(m.D > 0.0) || !(m.alpha >= 0.0)) throw DomainError("linear model needs D > 0 and alpha >= 0");
            return p * (m.D - p + m.alpha * (q - p)) / (2.0 * m.D);
          },
          [&](const DiscreteChoiceModel& m) {
            if (!(m.a > 0.0) || !(m.b > 0.0)) throw DomainError("discrete-choice model needs a > 0 and b > 0");
            const double ep = std::exp(-m.b * p);
            const double eq = std::exp(-m.b * q);
            return p * ep / (m.a + ep + eq);
          },
          [&](const ExplicitMatrixModel& m) {
            auto i = m.grid.index_of(p);
            auto j = m.grid.index_of(q);
            if (!i || !j) {
              throw DomainError("price " + std::to_string(i ? q : p) + " is not on the model grid");
            }
            return m.table(*i, *j);
          },
      },
      model);
}

Matrix payoff_matrix(const ProfitModel& model, const PriceGrid& grid) {
  if (const auto* m = std::get_if<ExplicitMatrixModel>(&model)) {
    if (m->grid.size() != grid.size()) {
      throw DomainError("explicit table has K=" + std::to_string(m->grid.size()) +
                        " but the grid has K=" + std::to_string(grid.size()));
    }
  }
  const int k = grid.size();
  Matrix table(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) table(i, j) = profit(model, grid.price(i), grid.price(j));
  }
  return table;
}

RegularityReport verify_regularity(const Matrix& t) {
  const int k = t.size();
  RegularityReport rep;

  rep.monotone_in_q = true;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j + 1 < k; ++j) {
      if (t(i, j + 1) - t(i, j) < -kTieTol) rep.monotone_in_q = false;
    }
  }

  // Best response to each opponent price must be unique and weakly increasing.
  rep.unique_best_response = true;
  std::vector<int> best(k, 0);
  for (int j = 0; j < k; ++j) {
    for (int i = 1; i < k; ++i) {
      if (t(i, j) > t(best[j], j)) best[j] = i;
    }
    for (int i = 0; i < k; ++i) {
      if (i != best[j] && t(i, j) >= t(best[j], j) - kTieTol) rep.unique_best_response = false;
    }
    if (j > 0 && best[j] < best[j - 1]) rep.unique_best_response = false;
  }

  auto is_best = [&](int own, int other) {
    for (int i = 0; i < k; ++i) {
      if (t(i, other) > t(own, other) + kTieTol) return false;
    }
    return true;
  };
  int nash_count = 0;
  bool nash_at_c = false;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (is_best(i, j) && is_best(j, i)) {
        ++nash_count;
        if (i == 0 && j == 0) nash_at_c = true;
      }
    }
  }
  rep.static_nash_at_pC = nash_at_c && nash_count == 1;

  const int m = k - 1;
  const double joint_m = 2.0 * t(m, m);
  rep.joint_profit_max_at_pM = true;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if ((i != m || j != m) && t(i, j) + t(j, i) >= joint_m - kTieTol) {
        rep.joint_profit_max_at_pM = false;
      }
    }
  }

  namespace bg = boost::geometry;
  using Point = bg::model::d2::point_xy<double>;
  bg::model::multi_point<Point> cloud;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) bg::append(cloud, Point(t(i, j), t(j, i)));
  }
  bg::model::polygon<Point> hull;
  bg::convex_hull(cloud, hull);
  bg::model::linestring<Point> boundary(hull.outer().begin(), hull.outer().end());
  const double scale = std::max({1.0, std::abs(t.max()), std::abs(t.min())});
  rep.convex_hull_condition = true;
  for (int i = best[m]; i < k; ++i) {
    if (bg::distance(Point(t(i, m), t(m, i)), boundary) > 1e-9 * scale) {
      rep.convex_hull_condition = false;
    }
  }
  return rep;
}

TwoPriceRatios normalize_two_price(const Matrix& t) {
  if (t.size() != 2) throw DomainError("two-price normalization needs a 2x2 table");
  const double cc = t(0, 0), cm = t(0, 1), mc = t(1, 0), mm = t(1, 1);
  if (!(mc < cc && cc < mm && mm < cm)) {
    throw InvalidPdError("payoffs violate pi(M,C) < pi(C,C) < pi(M,M) < pi(C,M)");
  }
  const double x = (cm - mm) / (mm - cc);
  const double y = (cc - mc) / (mm - cc);
  if (!(y > x - 1.0)) {
    throw InvalidPdError("payoffs violate 2 pi(M,M) > pi(C,M) + pi(M,C)");
  }
  return {x, y};
}

Matrix normalized_table(double x, double y) { return Matrix(2, {0.0, 1.0 + x, -y, 1.0}); }

double nash_foc(double a, double b, double p) {
  const double e = std::exp(-b * p);
  const double s = a + 2.0 * e;
  return e * ((1.0 - b * p) * s + b * p * e) / (s * s);
}

double joint_foc(double a, double b, double p) {
  const double e = std::exp(-b * p);
  const double s = a + 2.0 * e;
  return e * ((1.0 - b * p) * s + 2.0 * b * p * e) / (s * s);
}

Calibration calibrate_discrete_choice(double pc, double pm) {
  if (!(0.0 < pc && pc < pm)) throw DomainError("calibration needs 0 < p_C < p_M");
  // Solving the Nash condition at pc for a gives a = e^{-b pc}(2 - b pc)/(b pc - 1),
  // which is positive only for b in (1/pc, 2/pc); that interval is the search box.
  // The joint condition at pm gives a = 2 e^{-b pm}/(b pm - 1).
  auto a_from_nash = [pc](double b) {
    const double z = b * pc;
    return std::exp(-z) * (2.0 - z) / (z - 1.0);
  };
  auto a_from_joint = [pm](double b) {
    const double z = b * pm;
    return 2.0 * std::exp(-z) / (z - 1.0);
  };
  auto gap = [&](double b) { return a_from_nash(b) - a_from_joint(b); };

  const double lo = (1.0 + 1e-9) / pc;
  const double hi = 2.0 / pc;
  const double g_lo = gap(lo), g_hi = gap(hi);
  if (!(g_lo > 0.0) || !(g_hi < 0.0)) {
    throw CalibrationError("no sign change for b in (1/p_C, 2/p_C)", g_lo, g_hi);
  }
  const double b = solve_bracketed(gap, lo, hi);
  const double a = a_from_joint(b);
  Calibration cal{a, b, nash_foc(a, b, pc), joint_foc(a, b, pm)};
  if (!(a > 0.0) || std::abs(cal.residual_nash) >= 1e-9 || std::abs(cal.residual_joint) >= 1e-9) {
    throw CalibrationError("calibration residuals exceed 1e-9", cal.residual_nash, cal.residual_joint);
  }
  return cal;
}

double competitive_price(const ProfitModel& model) {
  return std::visit(
      Overloaded{
          [](const LinearModel& m) { return m.D / (2.0 + m.alpha); },
          [](const DiscreteChoiceModel& m) {
            return first_root_after([&](double p) { return nash_foc(m.a, m.b, p); }, 1.0 / m.b);
          },
          [](const ExplicitMatrixModel& m) { return m.grid.price(m.grid.competitive_index()); },
      },
      model);
}

double monopoly_price(const ProfitModel& model) {
  return std::visit(
      Overloaded{
          [](const LinearModel& m) { return m.D / 2.0; },
          [](const DiscreteChoiceModel& m) {
            return first_root_after([&](double p) { return joint_foc(m.a, m.b, p); }, 1.0 / m.b);
          },
          [](const ExplicitMatrixModel& m) { return m.grid.price(m.grid.monopoly_index()); },
      },
      model);
}

}  // namespace algoprice
