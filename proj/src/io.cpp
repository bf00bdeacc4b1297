#include "algoprice/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "algoprice/errors.hpp"

#ifndef ALGOPRICE_VERSION
#define ALGOPRICE_VERSION "0.0.0"
#endif

namespace algoprice::io {

namespace fs = std::filesystem;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

std::string resolve(const std::string& base_file, const std::string& rel) {
  const fs::path p(rel);
  if (p.is_absolute()) return rel;
  return (fs::path(base_file).parent_path() / p).string();
}

Matrix matrix_from(const json& rows, int k, const std::string& where) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != k) throw DomainError(where + ": matrix must have K rows");
  std::vector<double> flat;
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != k) throw DomainError(where + ": matrix must have K columns");
    for (const auto& x : row) flat.push_back(x.get<double>());
  }
  return Matrix(k, std::move(flat));
}

TwoPriceAlgo algo_at(const json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("profile is missing ") + key);
  return algo_from_name(j.at(key).get<std::string>());
}

const char* seller_key(int i) { return i == 0 ? "A" : "B"; }

}  // namespace

const char* tool_version() { return ALGOPRICE_VERSION; }

double round10(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return std::strtod(buf, nullptr);
}

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round10(x);
}

PayoffFile load_payoffs(const std::string& path) {
  json j = read_json(path);
  if (j.contains("table")) j = j.at("table");
  try {
    const int k = j.at("k").get<int>();
    if (k < 2) throw DomainError(path + ": K must be at least 2");
    PayoffFile f{matrix_from(j.at("matrix"), k, path), {}};
    if (j.contains("prices")) {
      f.prices = j.at("prices").get<std::vector<double>>();
      if (static_cast<int>(f.prices.size()) != k) throw DomainError(path + ": prices must have K entries");
    }
    return f;
  } catch (const json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

json payoffs_json(const Matrix& table, const std::vector<double>& prices) {
  json rows = json::array();
  for (int i = 0; i < table.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < table.size(); ++j) row.push_back(number(table(i, j)));
    rows.push_back(row);
  }
  json out{{"k", table.size()}, {"matrix", rows}};
  if (!prices.empty()) {
    json p = json::array();
    for (double x : prices) p.push_back(number(x));
    out["prices"] = p;
  }
  return out;
}

ModelFile load_model(const std::string& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
    const std::string kind = tree.get<std::string>("model");
    const int k = tree.get<int>("k");
    const double pc = tree.get<double>("pc");
    const double pm = tree.get<double>("pm");
    ModelFile f{LinearModel{1.0, 0.0}, PriceGrid::uniform(pc, pm, k)};
    if (kind == "linear") {
      f.model = LinearModel{tree.get<double>("D"), tree.get<double>("alpha")};
    } else if (kind == "discrete_choice") {
      f.model = DiscreteChoiceModel{tree.get<double>("a"), tree.get<double>("b")};
    } else if (kind == "matrix") {
      std::istringstream in(tree.get<std::string>("matrix"));
      std::vector<double> flat;
      for (double x; in >> x;) flat.push_back(x);
      if (!in.eof()) throw DomainError(path + ": matrix holds a non-numeric entry");
      if (static_cast<int>(flat.size()) != k * k) throw DomainError(path + ": matrix must hold K*K entries");
      f.model = ExplicitMatrixModel{f.grid, Matrix(k, std::move(flat))};
    } else {
      throw DomainError(path + ": unknown model '" + kind + "'");
    }
    return f;
  } catch (const pt::ptree_error& e) {
    throw DomainError(path + ": " + e.what());
  }
}

json model_json(const ProfitModel& model) {
  if (const auto* m = std::get_if<LinearModel>(&model)) {
    return {{"model", "linear"}, {"D", number(m->D)}, {"alpha", number(m->alpha)}};
  }
  if (const auto* m = std::get_if<DiscreteChoiceModel>(&model)) {
    return {{"model", "discrete_choice"}, {"a", number(m->a)}, {"b", number(m->b)}};
  }
  return {{"model", "matrix"}};
}

TransitionMatrix load_transitions(const std::string& path) {
  const json j = read_json(path);
  try {
    TransitionMatrix phi;
    phi.k = j.at("k").get<int>();
    if (phi.k < 2) throw DomainError(path + ": K must be at least 2");
    const char* keys[2] = {"seller_A", "seller_B"};
    for (int i = 0; i < 2; ++i) {
      const json& rows = j.at(keys[i]);
      if (!rows.is_array() || static_cast<int>(rows.size()) != phi.k) throw DomainError(path + ": need K rows per seller");
      phi.next[i].reserve(static_cast<size_t>(phi.k) * phi.k);
      for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != phi.k) throw DomainError(path + ": need K entries per row");
        for (const auto& e : row) {
          const auto pq = e.get<std::vector<int>>();
          if (pq.size() != 2) throw DomainError(path + ": successor entries are [a, b] pairs");
          phi.next[i].push_back({pq[0], pq[1]});
        }
      }
    }
    return phi;
  } catch (const json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

CyclePolicy parse_policy(const std::string& name) {
  if (name == "forbidden") return CyclePolicy::Forbidden;
  if (name == "min-price" || name == "min_price") return CyclePolicy::MinPrice;
  if (name == "average" || name == "average-payoff" || name == "average_payoff") return CyclePolicy::AveragePayoff;
  throw DomainError("unknown cycle policy '" + name + "'");
}

const char* policy_name(CyclePolicy p) {
  switch (p) {
    case CyclePolicy::Forbidden: return "forbidden";
    case CyclePolicy::MinPrice: return "min-price";
    case CyclePolicy::AveragePayoff: return "average";
  }
  return "?";
}

int parse_seller(const std::string& name) {
  if (name == "A" || name == "0") return 0;
  if (name == "B" || name == "1") return 1;
  throw DomainError("seller must be A or B");
}

SimPolicy load_policy(const std::string& path) {
  const json j = read_json(path);
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int first = parse_seller(j.value("first_adjuster", std::string("A")));
    if (kind == "markov") {
      ProfilePolicy p;
      p.first_adjuster = first;
      p.cycles = parse_policy(j.value("cycle_policy", std::string("forbidden")));
      p.opp_algorithm = algo_from_name(j.at("opponent_algorithm").get<std::string>());
      const char* keys[2] = {"seller_A", "seller_B"};
      for (int i = 0; i < 2; ++i) {
        for (TwoPriceAlgo s : kTwoPriceAlgos) p.profile.f[i][static_cast<int>(s)] = algo_at(j.at(keys[i]), algo_name(s));
      }
      return p;
    }
    if (kind == "transition") {
      TransitionPolicy p;
      p.first_adjuster = first;
      p.phi = load_transitions(resolve(path, j.at("phi").get<std::string>()));
      const auto s = j.at("start").get<std::vector<int>>();
      if (s.size() != 2 || s[0] < 0 || s[1] < 0 || s[0] >= p.phi.k || s[1] >= p.phi.k) {
        throw DomainError(path + ": start must be an [a, b] pair on the grid");
      }
      p.start = {s[0], s[1]};
      return p;
    }
    throw DomainError(path + ": unknown profile kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

SimFile load_sim_config(const std::string& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  SimFile f;
  try {
    pt::read_ini(path, tree);
    const pt::ptree& s = tree.get_child("simulation", tree);
    f.config.lambda = s.get("lambda", f.config.lambda);
    f.config.mu = s.get("mu", f.config.mu);
    f.config.r = s.get("r", f.config.r);
    f.config.dt = s.get("dt", f.config.dt);
    f.config.horizon = s.get("horizon", f.config.horizon);
    f.config.seed = s.get("seed", f.config.seed);
    if (auto runs = s.get_optional<int>("runs")) f.runs = *runs;
    if (auto p = s.get_optional<std::string>("payoffs")) f.payoffs = resolve(path, *p);
  } catch (const pt::ptree_error& e) {
    throw DomainError(path + ": " + e.what());
  }
  return f;
}

json regularity_json(const RegularityReport& r) {
  return {{"monotone_in_q", r.monotone_in_q},
          {"unique_best_response", r.unique_best_response},
          {"static_nash_at_pC", r.static_nash_at_pC},
          {"joint_profit_max_at_pM", r.joint_profit_max_at_pM},
          {"convex_hull_condition", r.convex_hull_condition},
          {"all", r.all()}};
}

json algorithm_json(const Algorithm& s) { return json(s); }

Algorithm parse_algorithm(const std::string& list) {
  Algorithm s;
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      s.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("bad price index '" + item + "' in algorithm list");
    }
  }
  if (s.size() < 2) throw DomainError("an algorithm needs at least two entries");
  for (int p : s) {
    if (p < 0 || p >= static_cast<int>(s.size())) throw DomainError("algorithm maps outside the price grid");
  }
  return s;
}

json profile_json(const MarkovProfile& p) {
  json out;
  for (int i = 0; i < 2; ++i) {
    json m = json::object();
    for (TwoPriceAlgo s : kTwoPriceAlgos) m[algo_name(s)] = algo_name(p.response(i, s));
    out[std::string("seller_") + seller_key(i)] = m;
  }
  const auto shape = profile_shape(p);
  out["shape"] = shape ? json(type_name(*shape)) : json(nullptr);
  return out;
}

json verification_json(const VerificationReport& r) {
  json out{{"k", r.k},
           {"confirmed", r.confirmed()},
           {"consistent", r.consistent},
           {"values_above_competitive", r.values_above_competitive},
           {"values_reach_monopoly_bound", r.values_reach_monopoly_bound},
           {"violated_constraints", r.violated_constraints}};
  for (const char* key : {"feasible", "optimal"}) {
    json per = json::object();
    for (int i = 0; i < 2; ++i) {
      const auto& flags = std::string(key) == "feasible" ? r.feasible[i] : r.optimal[i];
      json rows = json::array();
      for (int a = 0; a < r.k; ++a) {
        json row = json::array();
        for (int b = 0; b < r.k; ++b) row.push_back(flags[static_cast<size_t>(a) * r.k + b] != 0);
        rows.push_back(row);
      }
      per[seller_key(i)] = rows;
    }
    out[key] = per;
  }
  return out;
}

json payoff_set_json(const PayoffSet& h, const std::array<double, 4>& guaranteed) {
  json states = json::object();
  for (TwoPriceAlgo s : kTwoPriceAlgos) {
    json st{{"cells", h.count(s)},
            {"guaranteed_u", number(guaranteed[static_cast<int>(s)])},
            {"runs", run_lengths(h.cells[static_cast<int>(s)])}};
    if (auto b = h.bounds(s)) {
      st["bounds"] = {{"u", {number((*b)[0]), number((*b)[1])}}, {"v", {number((*b)[2]), number((*b)[3])}}};
    } else {
      st["bounds"] = nullptr;
    }
    states[algo_name(s)] = st;
  }
  return {{"lo", number(h.lo)},
          {"hi", number(h.hi)},
          {"res", h.res},
          {"eps_cell", number(h.eps_cell)},
          {"layout", "row-major [u index][v index], run lengths alternate starting with empty cells"},
          {"states", states}};
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

json RunManifest::to_json() const {
  json in = json::object();
  for (const auto& [p, d] : inputs) in[p] = {{"sha256", d}};
  return {{"command", command},
          {"parameters", parameters},
          {"inputs", in},
          {"seed", seed ? json(*seed) : json(nullptr)},
          {"tool_version", tool_version()},
          {"schema_version", kSchemaVersion},
          {"duration_seconds", number(duration_seconds)}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace algoprice::io
