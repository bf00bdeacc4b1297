#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "algoprice/matrix.hpp"

namespace algoprice {

// Equally spaced prices; index 0 is the competitive price, index K-1 the
// monopoly price.
class PriceGrid {
 public:
  PriceGrid() = default;
  static PriceGrid uniform(double p_competitive, double p_monopoly, int k);
  static PriceGrid from_prices(std::vector<double> prices);

  int size() const { return static_cast<int>(prices_.size()); }
  double price(int i) const { return prices_.at(i); }
  const std::vector<double>& prices() const { return prices_; }
  double delta() const { return prices_[1] - prices_[0]; }
  int competitive_index() const { return 0; }
  int monopoly_index() const { return size() - 1; }

  // Index of a grid price, or nullopt when p is not on the grid.
  std::optional<int> index_of(double p) const;

 private:
  std::vector<double> prices_;
};

struct LinearModel {
  double D;
  double alpha;
};

struct DiscreteChoiceModel {
  double a;
  double b;
};

struct ExplicitMatrixModel {
  PriceGrid grid;
  Matrix table;
};

using ProfitModel = std::variant<LinearModel, DiscreteChoiceModel, ExplicitMatrixModel>;

// Expected profit from one customer for the seller charging p against q.
double profit(const ProfitModel& model, double p, double q);

// Entry (i, j) = profit(prices[i], prices[j]).
Matrix payoff_matrix(const ProfitModel& model, const PriceGrid& grid);

struct RegularityReport {
  bool monotone_in_q = false;
  bool unique_best_response = false;
  bool static_nash_at_pC = false;
  bool joint_profit_max_at_pM = false;
  bool convex_hull_condition = false;

  bool all() const {
    return monotone_in_q && unique_best_response && static_nash_at_pC && joint_profit_max_at_pM &&
           convex_hull_condition;
  }
};

RegularityReport verify_regularity(const Matrix& table);

struct TwoPriceRatios {
  double x;
  double y;
};

// Table entries are indexed with 0 = competitive, 1 = monopoly.
TwoPriceRatios normalize_two_price(const Matrix& table);

// The normalized 2x2 table: pi(M,M)=1, pi(C,C)=0, pi(C,M)=1+x, pi(M,C)=-y.
Matrix normalized_table(double x, double y);

struct Calibration {
  double a;
  double b;
  double residual_nash;
  double residual_joint;
};

// Symmetric first-order conditions of the discrete-choice model.
double nash_foc(double a, double b, double p);
double joint_foc(double a, double b, double p);

Calibration calibrate_discrete_choice(double target_pc, double target_pm);

// Symmetric static Nash price and joint-profit maximizing price of a
// parametric model.
double competitive_price(const ProfitModel& model);
double monopoly_price(const ProfitModel& model);

}  // namespace algoprice
