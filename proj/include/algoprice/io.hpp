#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "algoprice/demand.hpp"
#include "algoprice/market_sim.hpp"
#include "algoprice/multi_price.hpp"
#include "algoprice/spe.hpp"
#include "algoprice/two_price.hpp"

// File formats shared by the command-line tool and its tests.
namespace algoprice::io {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";
const char* tool_version();

// Rounds to 10 significant digits; non-finite values pass through.
double round10(double x);
json number(double x);

struct PayoffFile {
  Matrix table;
  std::vector<double> prices;  // empty when the file carries none
};

// Accepts {"k", "matrix", ["prices"]} or an object holding it under "table".
PayoffFile load_payoffs(const std::string& path);
json payoffs_json(const Matrix& table, const std::vector<double>& prices = {});

// Key-value descriptor: model = linear|discrete_choice|matrix, pc, pm, k and
// the model parameters; the matrix variant lists K*K row-major decimals.
struct ModelFile {
  ProfitModel model;
  PriceGrid grid;
};
ModelFile load_model(const std::string& path);
json model_json(const ProfitModel& model);

TransitionMatrix load_transitions(const std::string& path);

CyclePolicy parse_policy(const std::string& name);
const char* policy_name(CyclePolicy p);
int parse_seller(const std::string& name);

// Profile files: {"kind": "markov", ...} or {"kind": "transition", "phi": <path>, ...};
// relative paths resolve against the profile's directory.
SimPolicy load_policy(const std::string& path);

struct SimFile {
  SimConfig config;
  std::optional<int> runs;
  std::optional<std::string> payoffs;  // resolved against the config's directory
};
// Reads the [simulation] section; missing keys keep their defaults.
SimFile load_sim_config(const std::string& path);

json regularity_json(const RegularityReport& r);
json algorithm_json(const Algorithm& s);
Algorithm parse_algorithm(const std::string& list);  // "0,1,1"
json profile_json(const MarkovProfile& p);
json verification_json(const VerificationReport& r);
json payoff_set_json(const PayoffSet& h, const std::array<double, 4>& guaranteed);

std::string sha256_file(const std::string& path);

struct RunManifest {
  std::string command;
  json parameters = json::object();
  std::map<std::string, std::string> inputs;  // path -> sha256
  std::optional<std::uint64_t> seed;
  double duration_seconds = 0.0;

  void add_input(const std::string& path) { inputs[path] = sha256_file(path); }
  json to_json() const;
};

void write_json(const std::string& path, const json& j);

}  // namespace algoprice::io
