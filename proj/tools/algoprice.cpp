// Command-line front end. Each subcommand parses its inputs, calls the
// library and serializes the result.
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "algoprice/demand.hpp"
#include "algoprice/dynamics.hpp"
#include "algoprice/errors.hpp"
#include "algoprice/io.hpp"
#include "algoprice/market_sim.hpp"
#include "algoprice/multi_price.hpp"
#include "algoprice/raster_kernels.hpp"
#include "algoprice/spe.hpp"
#include "algoprice/two_price.hpp"

using namespace algoprice;
using io::json;
using io::number;

namespace {

struct Common {
  int threads = 0;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

json pair_json(int a, int b) { return json::array({a, b}); }

// Writes {"manifest": ..., **body} to out when out is set.
void emit(const std::string& out, io::RunManifest& m, Clock::time_point t0, json body) {
  if (out.empty()) return;
  m.duration_seconds = seconds_since(t0);
  json doc{{"manifest", m.to_json()}};
  doc.update(body);
  io::write_json(out, doc);
}

void add_calibrate(CLI::App& app) {
  auto* sub = app.add_subcommand("calibrate", "fit discrete-choice demand to a competitive and a monopoly price");
  auto opt = std::make_shared<std::tuple<double, double, int, std::string>>(4.0, 8.0, 0, "");
  sub->add_option("--pc", std::get<0>(*opt), "target competitive price")->required();
  sub->add_option("--pm", std::get<1>(*opt), "target monopoly price")->required();
  sub->add_option("--k", std::get<2>(*opt), "also tabulate payoffs on K equally spaced prices");
  sub->add_option("--out", std::get<3>(*opt), "JSON output");
  sub->callback([opt] {
    const auto t0 = Clock::now();
    const auto& [pc, pm, k, out] = *opt;
    const Calibration c = calibrate_discrete_choice(pc, pm);
    io::RunManifest m;
    m.command = "calibrate";
    m.parameters = {{"pc", pc}, {"pm", pm}, {"k", k}};
    json body{{"a", number(c.a)},
              {"b", number(c.b)},
              {"residual_nash", c.residual_nash},
              {"residual_joint", c.residual_joint}};
    std::cout << "a = " << io::round10(c.a) << ", b = " << io::round10(c.b) << " (residuals " << c.residual_nash
              << ", " << c.residual_joint << ")\n";
    if (k > 0) {
      const PriceGrid grid = PriceGrid::uniform(pc, pm, k);
      const DiscreteChoiceModel model{c.a, c.b};
      const Matrix t = payoff_matrix(model, grid);
      body["table"] = io::payoffs_json(t, grid.prices());
      body["regularity"] = io::regularity_json(verify_regularity(t));
    }
    emit(out, m, t0, body);
  });
}

void add_table(CLI::App& app) {
  auto* sub = app.add_subcommand("table", "tabulate a profit model on its price grid");
  auto opt = std::make_shared<std::pair<std::string, std::string>>();
  sub->add_option("--model", opt->first, "model descriptor (key = value)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", opt->second, "JSON output");
  sub->callback([opt] {
    const auto t0 = Clock::now();
    const io::ModelFile f = io::load_model(opt->first);
    const Matrix t = payoff_matrix(f.model, f.grid);
    const RegularityReport rep = verify_regularity(t);
    io::RunManifest m;
    m.command = "table";
    m.parameters = {{"model", opt->first}};
    m.add_input(opt->first);
    for (int i = 0; i < t.size(); ++i) {
      for (int j = 0; j < t.size(); ++j) std::cout << (j ? " " : "") << io::round10(t(i, j));
      std::cout << "\n";
    }
    std::cout << "regularity: " << (rep.all() ? "all conditions hold" : "violated") << "\n";
    emit(opt->second, m, t0,
         {{"model", io::model_json(f.model)}, {"table", io::payoffs_json(t, f.grid.prices())},
          {"regularity", io::regularity_json(rep)}});
  });
}

void add_dynamics(CLI::App& app) {
  auto* sub = app.add_subcommand("dynamics", "iterate two algorithms, or print the two-price outcome map");
  struct Opt {
    std::string sa, sb, start = "0,0", payoffs, policy = "forbidden", out;
    bool map = false;
  };
  auto opt = std::make_shared<Opt>();
  sub->add_option("--sa", opt->sa, "seller A algorithm as comma-separated price indices");
  sub->add_option("--sb", opt->sb, "seller B algorithm");
  sub->add_option("--start", opt->start, "initial price indices i,j");
  sub->add_flag("--map", opt->map, "print the 4x4 outcome map of the two-price algorithms");
  sub->add_option("--payoffs", opt->payoffs, "2x2 payoff table for --map")->check(CLI::ExistingFile);
  sub->add_option("--policy", opt->policy, "cycle policy: forbidden|min-price|average");
  sub->add_option("--out", opt->out, "JSON output");
  sub->callback([opt] {
    const auto t0 = Clock::now();
    io::RunManifest m;
    m.command = "dynamics";
    if (opt->map) {
      if (opt->payoffs.empty()) throw CLI::ValidationError("--map", "needs --payoffs");
      const Matrix t = io::load_payoffs(opt->payoffs).table;
      const CyclePolicy pol = io::parse_policy(opt->policy);
      m.parameters = {{"map", true}, {"payoffs", opt->payoffs}, {"policy", io::policy_name(pol)}};
      m.add_input(opt->payoffs);
      const OutcomeMap map = outcome_map(t, pol);
      json cells = json::array();
      std::cout << "own\\opp";
      for (TwoPriceAlgo s : kTwoPriceAlgos) std::cout << "  " << algo_name(s);
      std::cout << "\n";
      for (TwoPriceAlgo own : kTwoPriceAlgos) {
        std::cout << algo_name(own) << "   ";
        for (TwoPriceAlgo opp : kTwoPriceAlgos) {
          const StageOutcome& st = map[static_cast<int>(own)][static_cast<int>(opp)];
          json c{{"own", algo_name(own)}, {"opp", algo_name(opp)}, {"cycle", st.cycle}};
          if (st.cycle) {
            json pairs = json::array();
            for (const auto& p : st.pairs) pairs.push_back(pair_json(p.a, p.b));
            c["pairs"] = pairs;
            std::cout << "  cycle";
          } else {
            c["pair"] = pair_json(st.pair.own, st.pair.opp);
            std::cout << "  (" << st.pair.own << "," << st.pair.opp << ")";
          }
          cells.push_back(c);
        }
        std::cout << "\n";
      }
      emit(opt->out, m, t0, {{"map", cells}, {"orientation", "pairs are (own, opponent); price 0 = p_C"}});
      return;
    }
    if (opt->sa.empty() || opt->sb.empty()) throw CLI::ValidationError("dynamics", "needs --sa and --sb, or --map");
    const Algorithm sa = io::parse_algorithm(opt->sa);
    const Algorithm sb = io::parse_algorithm(opt->sb);
    const Algorithm start = io::parse_algorithm(opt->start.find(',') == std::string::npos ? opt->start + ",0" : opt->start);
    if (start.size() != 2) throw DomainError("--start takes two indices");
    const Trajectory tr = iterate(sa, sb, start[0], start[1]);
    m.parameters = {{"sa", sa}, {"sb", sb}, {"start", start}};
    json transient = json::array(), pairs = json::array(), consistent = json::array();
    for (const auto& p : tr.transient) transient.push_back(pair_json(p.a, p.b));
    for (const auto& p : tr.outcome.pairs) pairs.push_back(pair_json(p.a, p.b));
    for (const auto& p : consistent_pairs(sa, sb)) consistent.push_back(pair_json(p.a, p.b));
    std::cout << (tr.outcome.is_cycle() ? "cycle:" : "fixed pair:");
    for (const auto& p : tr.outcome.pairs) std::cout << " (" << p.a << "," << p.b << ")";
    std::cout << " after " << tr.transient.size() << " transient steps\n";
    emit(opt->out, m, t0,
         {{"sa", sa},
          {"sb", sb},
          {"start", start},
          {"transient", transient},
          {"outcome", {{"kind", tr.outcome.is_cycle() ? "cycle" : "fixed"}, {"pairs", pairs}}},
          {"consistent_pairs", consistent}});
  });
}

std::string join_types(const std::vector<EquilibriumType>& types) {
  std::string out;
  for (auto t : types) out += (out.empty() ? "" : ", ") + std::string(type_name(t));
  return out;
}

void add_classify(CLI::App& app) {
  auto* sub = app.add_subcommand("classify", "Markov equilibrium types of the normalized two-price game");
  struct Opt {
    double x = 0, y = 0, beta = 0;
    std::string policy = "forbidden", out;
  };
  auto opt = std::make_shared<Opt>();
  sub->add_option("--x", opt->x, "normalized undercutting gain")->required();
  sub->add_option("--y", opt->y, "normalized loss from being undercut")->required();
  sub->add_option("--beta", opt->beta, "effective discount factor")->required();
  sub->add_option("--policy", opt->policy, "cycle policy: forbidden|min-price|average");
  sub->add_option("--out", opt->out, "JSON output");
  sub->callback([opt] {
    const auto t0 = Clock::now();
    const CyclePolicy pol = io::parse_policy(opt->policy);
    const auto types = classify_mpe(opt->x, opt->y, opt->beta, pol);
    std::vector<std::string> outcomes;
    for (auto t : types) {
      const std::string d = outcome_of(t).description;
      if (std::find(outcomes.begin(), outcomes.end(), d) == outcomes.end()) outcomes.push_back(d);
    }
    std::string joined;
    for (const auto& d : outcomes) joined += (joined.empty() ? "" : " | ") + d;
    std::cout << join_types(types) << "; outcome: " << joined << "\n";
    io::RunManifest m;
    m.command = "classify";
    m.parameters = {{"x", opt->x}, {"y", opt->y}, {"beta", opt->beta}, {"policy", io::policy_name(pol)}};
    json jt = json::array();
    for (auto t : types) jt.push_back(type_name(t));
    json body{{"types", jt}, {"outcomes", outcomes}};
    if (auto w = type3_beta_window(opt->x, opt->y)) {
      body["type3_beta_window"] = {number(w->first), number(w->second)};
    } else {
      body["type3_beta_window"] = nullptr;
    }
    body["monopoly_unique_sufficient"] = monopoly_unique_sufficient(opt->x, opt->y);
    emit(opt->out, m, t0, body);
  });
}

void add_scan(CLI::App& app, const Common& common) {
  auto* sub = app.add_subcommand("scan", "raster of equilibrium regions over (x, y) at fixed beta");
  struct Opt {
    double beta = 0.5, xmax = 2.0, ymax = 1.0;
    int res = 400;
    std::string policy = "forbidden", out;
  };
  auto opt = std::make_shared<Opt>();
  sub->add_option("--beta", opt->beta, "effective discount factor")->required();
  sub->add_option("--xmax", opt->xmax, "upper x bound (lower bound 0)");
  sub->add_option("--ymax", opt->ymax, "upper y bound (lower bound 0)");
  sub->add_option("--res", opt->res, "cells per axis");
  sub->add_option("--policy", opt->policy, "cycle policy: forbidden|min-price|average");
  sub->add_option("--out", opt->out, "CSV output")->required();
  sub->callback([opt, &common] {
    const auto t0 = Clock::now();
    const CyclePolicy pol = io::parse_policy(opt->policy);
    const RegionRaster r = scan_region(opt->beta, {0.0, opt->xmax}, {0.0, opt->ymax}, opt->res, pol, common.threads);
    std::ofstream out(opt->out);
    if (!out) throw DomainError("cannot write " + opt->out);
    out << region_csv(r);
    out.close();
    std::array<std::size_t, 6> counts{};
    for (auto c : r.code) ++counts[c];
    std::cout << "cells: outside " << counts[0] << ", TypeI " << counts[1] << ", TypeII " << counts[2]
              << ", TypeII+TypeIII " << counts[3] << ", TypeIPrime " << counts[4] << ", TypeI+TypeIPrime "
              << counts[5] << "\n";
    io::RunManifest m;
    m.command = "scan";
    m.parameters = {{"beta", opt->beta}, {"xmax", opt->xmax}, {"ymax", opt->ymax}, {"res", opt->res},
                    {"policy", io::policy_name(pol)}};
    m.duration_seconds = seconds_since(t0);
    io::write_json(opt->out + ".manifest.json", {{"manifest", m.to_json()}});
  });
}

void add_enumerate(CLI::App& app, const Common& common) {
  auto* sub = app.add_subcommand("enumerate", "brute-force Markov equilibria of a 2x2 game");
  struct Opt {
    std::string payoffs, policy = "forbidden", out;
    double beta = 0;
  };
  auto opt = std::make_shared<Opt>();
  sub->add_option("--payoffs", opt->payoffs, "2x2 payoff table")->required()->check(CLI::ExistingFile);
  sub->add_option("--beta", opt->beta, "effective discount factor")->required();
  sub->add_option("--policy", opt->policy, "cycle policy: forbidden|min-price|average");
  sub->add_option("--out", opt->out, "JSON output");
  sub->callback([opt, &common] {
    const auto t0 = Clock::now();
    const Matrix t = io::load_payoffs(opt->payoffs).table;
    const CyclePolicy pol = io::parse_policy(opt->policy);
    const auto profiles = enumerate_mpe(t, opt->beta, pol, common.threads);
    json list = json::array();
    for (const auto& p : profiles) list.push_back(io::profile_json(p));
    std::cout << profiles.size() << " equilibrium profile(s)\n";
    for (const auto& p : profiles) {
      std::cout << "  A:";
      for (TwoPriceAlgo s : kTwoPriceAlgos) std::cout << " " << algo_name(s) << "->" << algo_name(p.response(0, s));
      std::cout << "  B:";
      for (TwoPriceAlgo s : kTwoPriceAlgos) std::cout << " " << algo_name(s) << "->" << algo_name(p.response(1, s));
      const auto shape = profile_shape(p);
      std::cout << "  [" << (shape ? type_name(*shape) : "mixed") << "]\n";
    }
    const TwoPriceRatios xy = normalize_two_price(t);
    io::RunManifest m;
    m.command = "enumerate";
    m.parameters = {{"payoffs", opt->payoffs}, {"beta", opt->beta}, {"policy", io::policy_name(pol)}};
    m.add_input(opt->payoffs);
    emit(opt->out, m, t0, {{"x", number(xy.x)}, {"y", number(xy.y)}, {"profiles", list}});
  });
}

void add_verify(CLI::App& app) {
  auto* sub = app.add_subcommand("verify", "check that transition matrices form a Markov equilibrium");
  struct Opt {
    std::string payoffs, phi, out;
    double beta = 0;
  };
  auto opt = std::make_shared<Opt>();
  sub->add_option("--payoffs", opt->payoffs, "KxK payoff table")->required()->check(CLI::ExistingFile);
  sub->add_option("--phi", opt->phi, "transition matrices")->required()->check(CLI::ExistingFile);
  sub->add_option("--beta", opt->beta, "effective discount factor")->required();
  sub->add_option("--out", opt->out, "JSON output");
  sub->callback([opt] {
    const auto t0 = Clock::now();
    const Matrix t = io::load_payoffs(opt->payoffs).table;
    const TransitionMatrix phi = io::load_transitions(opt->phi);
    const VerificationReport rep = verify_equilibrium(phi, t, opt->beta);
    const PayoffTables tables = payoffs_from_transitions(phi, t, opt->beta);
    if (rep.confirmed()) {
      std::cout << "equilibrium: CONFIRMED\n";
    } else {
      std::cout << "equilibrium: REJECTED (" << rep.violated_constraints.size() << " violated constraints)\n";
      for (const auto& v : rep.violated_constraints) std::cout << "  " << v << "\n";
    }
    io::RunManifest m;
    m.command = "verify";
    m.parameters = {{"payoffs", opt->payoffs}, {"phi", opt->phi}, {"beta", opt->beta}};
    m.add_input(opt->payoffs);
    m.add_input(opt->phi);
    json body = io::verification_json(rep);
    body["u_lower"] = {{"A", number(tables.seller[0].u_lower)}, {"B", number(tables.seller[1].u_lower)}};
    body["monopoly_value_bound"] = number(monopoly_value_bound(t, opt->beta));
    emit(opt->out, m, t0, body);
  });
}

void add_spe(CLI::App& app, const Common& common) {
  auto* sub = app.add_subcommand("spe", "subgame-perfect continuation payoff sets of a 2x2 game");
  struct Opt {
    std::string payoffs, out, pgm, from = "s_T", target;
    double beta = 0, eps = 1.0;
    int res = 200, max_iter = 10000, max_len = 30;
  };
  auto opt = std::make_shared<Opt>();
  sub->add_option("--payoffs", opt->payoffs, "2x2 payoff table")->required()->check(CLI::ExistingFile);
  sub->add_option("--beta", opt->beta, "effective discount factor")->required();
  sub->add_option("--res", opt->res, "raster cells per axis");
  sub->add_option("--eps-cell", opt->eps, "dilation margin in cells");
  sub->add_option("--max-iter", opt->max_iter, "iteration cap");
  sub->add_option("--out", opt->out, "JSON output");
  sub->add_option("--pgm-prefix", opt->pgm, "write <prefix><state>.pgm per state");
  sub->add_option("--target", opt->target, "extract an algorithm sequence reaching payoff u,v");
  sub->add_option("--from", opt->from, "opponent algorithm at the start of the extraction");
  sub->add_option("--max-len", opt->max_len, "length of the extracted sequence");
  sub->callback([opt, &common] {
    const auto t0 = Clock::now();
    const Matrix t = io::load_payoffs(opt->payoffs).table;
    SpeOptions o;
    o.resolution = opt->res;
    o.eps_cell = opt->eps;
    o.max_iter = opt->max_iter;
    o.threads = common.threads;
    const SpeResult r = solve(t, opt->beta, o);
    const auto g = guaranteed_payoffs(r.sets, t, opt->beta);
    std::cout << (r.converged ? "converged" : "NOT converged") << " after " << r.iterations << " iterations ("
              << kernels::active_kernels().name << " kernels)\n";
    for (TwoPriceAlgo s : kTwoPriceAlgos) {
      std::cout << "  H(" << algo_name(s) << "): " << r.sets.count(s) << " cells";
      if (auto b = r.sets.bounds(s)) {
        std::cout << ", u in [" << io::round10((*b)[0]) << ", " << io::round10((*b)[1]) << "], v in ["
                  << io::round10((*b)[2]) << ", " << io::round10((*b)[3]) << "]";
      }
      std::cout << "\n";
    }
    io::RunManifest m;
    m.command = "spe";
    m.parameters = {{"payoffs", opt->payoffs}, {"beta", opt->beta}, {"res", opt->res},
                    {"eps_cell", opt->eps}, {"max_iter", opt->max_iter}};
    m.add_input(opt->payoffs);
    json body = io::payoff_set_json(r.sets, g);
    body["iterations"] = r.iterations;
    body["converged"] = r.converged;
    if (!opt->target.empty()) {
      std::istringstream in(opt->target);
      double u = 0, v = 0;
      char comma = 0;
      if (!(in >> u >> comma >> v) || comma != ',') throw DomainError("--target takes u,v");
      const auto seq = extract_sequence(r.sets, t, opt->beta, algo_from_name(opt->from), u, v, opt->max_len);
      json js = json::array();
      std::cout << "sequence:";
      for (auto s : seq) {
        js.push_back(algo_name(s));
        std::cout << " " << algo_name(s);
      }
      std::cout << "\n";
      body["sequence"] = {{"from", opt->from}, {"target", {number(u), number(v)}}, {"algorithms", js}};
      m.parameters["target"] = opt->target;
      m.parameters["from"] = opt->from;
      m.parameters["max_len"] = opt->max_len;
    }
    if (!opt->pgm.empty()) {
      for (TwoPriceAlgo s : kTwoPriceAlgos) {
        std::ofstream f(opt->pgm + algo_name(s) + ".pgm", std::ios::binary);
        if (!f) throw DomainError("cannot write " + opt->pgm + algo_name(s) + ".pgm");
        write_pgm(f, r.sets, s);
      }
    }
    emit(opt->out, m, t0, body);
  });
}

void add_simulate(CLI::App& app, const Common& common) {
  auto* sub = app.add_subcommand("simulate", "Monte-Carlo of the continuous-time market");
  struct Opt {
    std::string config, profile, payoffs, out;
    std::optional<int> runs;
    std::optional<double> lambda, mu, r, dt, horizon;
    std::optional<std::uint64_t> seed;
  };
  auto opt = std::make_shared<Opt>();
  sub->add_option("--config", opt->config, "[simulation] key = value file")->check(CLI::ExistingFile);
  sub->add_option("--profile", opt->profile, "Markov profile or transition policy")->required()->check(CLI::ExistingFile);
  sub->add_option("--payoffs", opt->payoffs, "payoff table (overrides the config)")->check(CLI::ExistingFile);
  sub->add_option("--runs", opt->runs, "number of runs");
  sub->add_option("--lambda", opt->lambda, "customer arrival rate");
  sub->add_option("--mu", opt->mu, "revision rate");
  sub->add_option("--r", opt->r, "discount rate");
  sub->add_option("--dt", opt->dt, "price tick");
  sub->add_option("--horizon", opt->horizon, "simulated time");
  sub->add_option("--seed", opt->seed, "random seed");
  sub->add_option("--out", opt->out, "CSV output")->required();
  sub->callback([opt, &common] {
    const auto t0 = Clock::now();
    io::SimFile f;
    if (!opt->config.empty()) f = io::load_sim_config(opt->config);
    SimConfig& c = f.config;
    if (opt->lambda) c.lambda = *opt->lambda;
    if (opt->mu) c.mu = *opt->mu;
    if (opt->r) c.r = *opt->r;
    if (opt->dt) c.dt = *opt->dt;
    if (opt->horizon) c.horizon = *opt->horizon;
    if (opt->seed) c.seed = *opt->seed;
    const int runs = opt->runs.value_or(f.runs.value_or(200));
    const std::string payoffs = !opt->payoffs.empty() ? opt->payoffs : f.payoffs.value_or("");
    if (payoffs.empty()) throw CLI::ValidationError("simulate", "no payoff table given by --payoffs or the config");
    for (const auto& w : validate(c)) std::cerr << "warning: " << w << "\n";

    const Matrix t = io::load_payoffs(payoffs).table;
    const SimPolicy policy = io::load_policy(opt->profile);
    const MonteCarloResult mc = monte_carlo(policy, t, c, runs, common.threads);
    const double beta = effective_beta(c.mu, c.r);
    const auto an = analytic_values(policy, t, beta);

    std::ofstream out(opt->out);
    if (!out) throw DomainError("cannot write " + opt->out);
    out << "run,u_hat,v_hat,customers_served,revisions\n";
    out.precision(10);
    for (const auto& r : mc.runs) {
      out << r.run << "," << r.u_hat << "," << r.v_hat << "," << r.customers << "," << r.revisions << "\n";
    }
    out.close();

    std::cout << "u_hat = " << io::round10(mc.u_mean) << " +/- " << io::round10(mc.u_half_width)
              << " (reduced model " << io::round10(an.first) << ")\n";
    std::cout << "v_hat = " << io::round10(mc.v_mean) << " +/- " << io::round10(mc.v_half_width)
              << " (reduced model " << io::round10(an.second) << ")\n";

    io::RunManifest m;
    m.command = "simulate";
    m.parameters = {{"lambda", c.lambda}, {"mu", c.mu}, {"r", c.r}, {"dt", c.dt}, {"horizon", c.horizon},
                    {"runs", runs}, {"payoffs", payoffs}, {"profile", opt->profile}};
    if (!opt->config.empty()) m.add_input(opt->config);
    m.add_input(payoffs);
    m.add_input(opt->profile);
    m.seed = c.seed;
    m.duration_seconds = seconds_since(t0);
    json summary{{"u_mean", number(mc.u_mean)},
                 {"v_mean", number(mc.v_mean)},
                 {"u_half_width", number(mc.u_half_width)},
                 {"v_half_width", number(mc.v_half_width)},
                 {"truncation_bound", number(mc.truncation_bound)},
                 {"beta", number(beta)},
                 {"reduced_u", number(an.first)},
                 {"reduced_v", number(an.second)}};
    io::write_json(opt->out + ".manifest.json", {{"manifest", m.to_json()}, {"summary", summary}});
  });
}

void add_bound(CLI::App& app) {
  auto* sub = app.add_subcommand("bound", "payoff cost of a K-step experimentation phase");
  struct Opt {
    int k = 0;
    double dt = 0, r = 0, lambda = 0;
    std::optional<double> dpi;
    std::string payoffs, out;
  };
  auto opt = std::make_shared<Opt>();
  sub->add_option("--k", opt->k, "experimentation steps")->required();
  sub->add_option("--dt", opt->dt, "price tick")->required();
  sub->add_option("--r", opt->r, "discount rate")->required();
  sub->add_option("--lambda", opt->lambda, "customer arrival rate")->required();
  auto* dpi = sub->add_option("--dpi", opt->dpi, "largest payoff difference");
  sub->add_option("--payoffs", opt->payoffs, "derive the payoff difference from a table")
      ->check(CLI::ExistingFile)
      ->excludes(dpi);
  sub->add_option("--out", opt->out, "JSON output");
  sub->callback([opt] {
    const auto t0 = Clock::now();
    io::RunManifest m;
    m.command = "bound";
    double d = 0;
    if (opt->dpi) {
      d = *opt->dpi;
    } else if (!opt->payoffs.empty()) {
      d = payoff_spread(io::load_payoffs(opt->payoffs).table);
      m.add_input(opt->payoffs);
    } else {
      throw CLI::ValidationError("bound", "needs --dpi or --payoffs");
    }
    const double b = experimentation_bound(opt->k, opt->dt, opt->r, opt->lambda, d);
    std::cout << "bound = " << io::round10(b) << "\n";
    m.parameters = {{"k", opt->k}, {"dt", opt->dt}, {"r", opt->r}, {"lambda", opt->lambda}, {"d_pi_max", d}};
    emit(opt->out, m, t0, {{"d_pi_max", number(d)}, {"bound", number(b)}});
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria of pricing algorithms"};
  app.set_version_flag("--version", std::string("algoprice ") + io::tool_version() + " (schema " + io::kSchemaVersion + ")");
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

  add_calibrate(app);
  add_table(app);
  add_dynamics(app);
  add_classify(app);
  add_scan(app, common);
  add_enumerate(app, common);
  add_verify(app);
  add_spe(app, common);
  add_simulate(app, common);
  add_bound(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const algoprice::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
