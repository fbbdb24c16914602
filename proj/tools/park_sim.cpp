#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parksim/cascade.hpp"
#include "parksim/closed_form.hpp"
#include "parksim/csv.hpp"
#include "parksim/ingest.hpp"
#include "parksim/network_config.hpp"
#include "parksim/observer.hpp"
#include "parksim/presets.hpp"
#include "parksim/rng.hpp"
#include "parksim/scenario.hpp"
#include "parksim/simulator.hpp"

namespace {

using nlohmann::json;
using namespace parksim;

std::string env_out_dir() {
  const char* env = std::getenv("PARKSIM_OUT");
  return env ? env : "";
}

void emit(const json& payload, const std::string& out_dir, const std::string& filename) {
  std::cout << payload.dump(2) << '\n';
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  std::string path = (std::filesystem::path(out_dir) / filename).string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << payload.dump(2) << '\n';
}

Scenario scenario_from_flags(const std::string& config_path, bool synthetic,
                             std::optional<std::uint64_t> seed, int seeds_per_departure,
                             double adoption) {
  if (!config_path.empty()) {
    ConfigFile cfg = load_config(config_path);
    if (seed) cfg.entries["master_seed"] = std::to_string(*seed);
    return load_scenario(cfg, std::filesystem::path(config_path).parent_path().string());
  }
  if (synthetic) {
    return high_demand_scenario(seed.value_or(42), seeds_per_departure, adoption);
  }
  throw std::runtime_error("pass --config with a scenario file or --synthetic");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probability-aware parking selection toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  // closed-form
  std::string cf_config;
  std::vector<int> cf_cluster;
  std::string cf_out = env_out_dir();
  auto* cf = app.add_subcommand("closed-form",
                                "patient/cluster strategy values and the exact MDP solve");
  cf->add_option("--config", cf_config, "network config file")->required();
  cf->add_option("--cluster", cf_cluster, "lot indices to evaluate as a cluster");
  cf->add_option("--out", cf_out, "directory for closed-form.json (default $PARKSIM_OUT)");
  cf->callback([&]() {
    ParkingNetwork net = load_network(cf_config);
    json lots = json::array();
    for (LotIndex j = 1; j <= net.n_lots; ++j) {
      lots.push_back(
          {{"lot", j},
           {"drive_from_origin", net.drive(kOrigin, j)},
           {"walk", net.walk(j)},
           {"p", net.prob(j)},
           {"patient_charge_first_flip",
            patient_expected_time(net, j, WaitConvention::ChargeFirstFlip)},
           {"patient_free_first_flip",
            patient_expected_time(net, j, WaitConvention::FreeFirstFlip)}});
    }
    StrategyValue best = best_patient_lot(net);
    ValueIterationResult vi = value_iteration(net);
    json sens = json::array();
    for (LotIndex i = 1; i <= net.n_lots; ++i) {
      for (LotIndex j = 1; j <= net.n_lots; ++j) {
        if (i == j) continue;
        sens.push_back({{"i_star", i}, {"j", j}, {"holds", sensitivity_holds(net, i, j)}});
      }
    }
    json out = {{"lots", lots},
                {"best_patient", {{"lot", best.target}, {"expected_time", best.expected_time}}},
                {"value_iteration",
                 {{"value", vi.value},
                  {"policy", vi.policy},
                  {"sweeps", vi.sweeps},
                  {"residual", vi.residual}}},
                {"sensitivity", sens}};
    if (!cf_cluster.empty()) {
      Cluster cluster = make_cluster(net, std::vector<LotIndex>(cf_cluster.begin(),
                                                                cf_cluster.end()));
      auto violations = cluster_violations(net, cluster);
      json jc = {{"members", cluster.members},
                 {"cycle_time", cluster.cycle_time},
                 {"to_cluster", cluster.to_cluster},
                 {"to_destination", cluster.to_destination},
                 {"violations", violations}};
      if (violations.empty()) {
        std::vector<double> probs;
        for (LotIndex m : cluster.members) probs.push_back(net.prob(m));
        jc["expected_time"] = cluster_expected_time(cluster, probs, net.wait_time);
      }
      out["cluster"] = jc;
    }
    emit(out, cf_out, "closed-form.json");
  });

  // cascade
  int ca_order = 1;
  std::vector<double> ca_probs;
  int ca_n = 2;
  long long ca_samples = 200000;
  std::uint64_t ca_seed = 42;
  std::string ca_out = env_out_dir();
  auto* ca = app.add_subcommand("cascade", "interaction closed forms vs behavioral simulation");
  ca->add_option("--order", ca_order, "cascade order 1|2|3")->required();
  ca->add_option("--probs", ca_probs, "lot probabilities, ego's lot first")->required();
  ca->add_option("--n", ca_n, "vehicle count for first order")->capture_default_str();
  ca->add_option("--samples", ca_samples, "Monte Carlo samples")->capture_default_str();
  ca->add_option("--seed", ca_seed, "rng seed")->capture_default_str();
  ca->add_option("--out", ca_out, "directory for cascade.json (default $PARKSIM_OUT)");
  ca->callback([&]() {
    json out = {{"order", ca_order}, {"probs", ca_probs}, {"samples", ca_samples},
                {"seed", ca_seed}};
    double formula = 0.0, sim = 0.0;
    if (ca_order == 1) {
      formula = first_order(ca_probs.at(0), ca_n);
      sim = first_order_sim(ca_probs.at(0), ca_n, ca_samples, ca_seed);
      out["n"] = ca_n;
    } else if (ca_order == 2) {
      formula = second_order_formula(ca_probs);
      sim = second_order_sim(ca_probs, ca_samples, ca_seed);
      if (ca_probs.size() > 2) {
        out["note"] = "past two vehicles the series and the behavioral chain differ; "
                      "the gap is reported, not asserted";
      }
    } else if (ca_order == 3) {
      if (ca_probs.size() != 3) throw std::runtime_error("--order 3 needs exactly 3 probs");
      formula = third_order(ca_probs[0], ca_probs[1], ca_probs[2]);
      sim = third_order_sim(ca_probs[0], ca_probs[1], ca_probs[2], ca_samples, ca_seed);
    } else {
      throw std::runtime_error("--order must be 1, 2, or 3");
    }
    out["formula"] = formula;
    out["sim"] = sim;
    out["gap"] = sim - formula;
    emit(out, ca_out, "cascade.json");
  });

  // observe-error
  double oe_m = -1.0, oe_b = -1.0, oe_lambda = 0.0, oe_r = 1.0;
  long long oe_draws = 100000;
  std::uint64_t oe_seed = 42;
  std::string oe_out = env_out_dir();
  auto* oe = app.add_subcommand("observe-error",
                                "per-interval observation error laws vs renewal Monte Carlo");
  oe->add_option("--m", oe_m, "linear slope per minute");
  oe->add_option("--b", oe_b, "growth exponent");
  oe->add_option("--lambda", oe_lambda, "arrival rate per hour")->required();
  oe->add_option("--r", oe_r, "connected-user fraction")->capture_default_str();
  oe->add_option("--draws", oe_draws, "Monte Carlo draws")->capture_default_str();
  oe->add_option("--seed", oe_seed, "rng seed")->capture_default_str();
  oe->add_option("--out", oe_out, "directory for observe-error.json (default $PARKSIM_OUT)");
  oe->callback([&]() {
    if (oe_m < 0.0 && oe_b < 0.0) throw std::runtime_error("pass --m and/or --b");
    json out = {{"lambda_per_hour", oe_lambda}, {"r", oe_r}, {"draws", oe_draws},
                {"seed", oe_seed}};
    if (oe_m >= 0.0) {
      double closed = linear_error_expectation(oe_m, oe_lambda, oe_r);
      double oracle = linear_error_oracle(oe_m, oe_lambda, oe_r, oe_draws,
                                          derive_seed(oe_seed, hash64("linear")));
      out["linear"] = {{"m_per_min", oe_m},
                       {"closed_form", closed},
                       {"oracle", oracle},
                       {"rel_err", std::abs(oracle - closed) / closed}};
    }
    if (oe_b >= 0.0) {
      double printed = exponential_error_expectation(oe_b, oe_lambda, oe_r);
      double moment = exponential_error_expectation_moment(oe_b, oe_lambda, oe_r);
      double oracle = exponential_error_oracle(oe_b, oe_lambda, oe_r, oe_draws,
                                               derive_seed(oe_seed, hash64("exponential")));
      out["exponential"] = {{"b", oe_b},
                            {"printed_value", printed},
                            {"moment_value", moment},
                            {"oracle", oracle}};
    }
    emit(out, oe_out, "observe-error.json");
  });

  // random-walk
  double rw_start = 0.5, rw_lambda = 20.0, rw_r = 0.2;
  int rw_minutes = 720, rw_seeds = 100;
  std::uint64_t rw_seed = 42;
  std::string rw_out = env_out_dir().empty() ? "." : env_out_dir();
  auto* rw = app.add_subcommand("random-walk",
                                "bounded walks, hold-last streams, per-seed MAE distribution");
  rw->add_option("--start", rw_start, "walk start probability")->capture_default_str();
  rw->add_option("--minutes", rw_minutes, "walk length in minutes")->capture_default_str();
  rw->add_option("--seeds", rw_seeds, "number of walks")->capture_default_str();
  rw->add_option("--lambda", rw_lambda, "arrival rate per hour")->capture_default_str();
  rw->add_option("--r", rw_r, "connected-user fraction")->capture_default_str();
  rw->add_option("--seed", rw_seed, "master seed")->capture_default_str();
  rw->add_option("--out", rw_out, "output directory (default $PARKSIM_OUT or .)");
  rw->callback([&]() {
    PresetRequest req;
    req.name = "random-walk";
    req.seed = rw_seed;
    req.out_dir = rw_out;
    req.params = {{"start", fmt_double(rw_start)}, {"minutes", std::to_string(rw_minutes)},
                  {"seeds", std::to_string(rw_seeds)}, {"lambda", fmt_double(rw_lambda)},
                  {"r", fmt_double(rw_r)}};
    PresetOutcome outcome = run_preset(req);
    json out = {{"files", outcome.files}, {"summary", outcome.summary}};
    std::cout << out.dump(2) << '\n';
  });

  // ingest
  std::string in_occupancy, in_transactions, in_columns;
  std::vector<std::string> in_lots;
  double in_r = 0.2;
  std::uint64_t in_seed = 42;
  std::string in_out = env_out_dir().empty() ? "." : env_out_dir();
  auto* in = app.add_subcommand("ingest",
                                "occupancy/transaction exports to traces and streams");
  in->add_option("--occupancy", in_occupancy, "occupancy CSV")->required();
  in->add_option("--transactions", in_transactions, "transactions CSV");
  in->add_option("--lots", in_lots, "lot ids to emit (default: all in the occupancy file)");
  in->add_option("--r", in_r, "connected-user fraction")->capture_default_str();
  in->add_option("--seed", in_seed, "sampling seed")->capture_default_str();
  in->add_option("--columns", in_columns, "config with *_column name overrides");
  in->add_option("--out", in_out, "output directory (default $PARKSIM_OUT or .)");
  in->callback([&]() {
    ColumnMap cols;
    if (!in_columns.empty()) {
      ConfigFile cfg = load_config(in_columns);
      if (cfg.has("timestamp_column")) cols.timestamp = cfg.get_string("timestamp_column");
      if (cfg.has("lot_column")) cols.lot = cfg.get_string("lot_column");
      if (cfg.has("occupied_column")) cols.occupied = cfg.get_string("occupied_column");
      if (cfg.has("capacity_column")) cols.capacity = cfg.get_string("capacity_column");
    }
    auto occupancy = read_occupancy(in_occupancy, cols);
    std::vector<TransactionRecord> txns;
    if (!in_transactions.empty()) txns = read_transactions(in_transactions, cols);
    rebase(occupancy, txns);

    std::vector<std::string> ids = in_lots;
    if (ids.empty()) {
      for (const auto& rec : occupancy) {
        if (std::find(ids.begin(), ids.end(), rec.lot_id) == ids.end()) {
          ids.push_back(rec.lot_id);
        }
      }
    }
    auto kept = sample_connected_users(txns, in_r, derive_seed(in_seed, hash64("connected")));

    std::filesystem::create_directories(in_out);
    std::vector<std::string> warnings;
    json lots = json::array();
    for (const auto& id : ids) {
      ProbabilityTrace trace = occupancy_to_trace(occupancy, id, &warnings);
      ObservationStream stream = stream_from_transactions(trace, kept, id);
      std::string trace_path = (std::filesystem::path(in_out) / ("trace-" + id + ".csv")).string();
      std::string stream_path =
          (std::filesystem::path(in_out) / ("stream-" + id + ".csv")).string();
      write_trace_csv(trace_path, trace);
      write_stream_csv(stream_path, stream);
      lots.push_back({{"id", id},
                      {"samples", trace.samples.size()},
                      {"observations", stream.observations.size()},
                      {"mae", mae(trace, stream)},
                      {"trace_file", trace_path},
                      {"stream_file", stream_path}});
    }
    for (const auto& warning : warnings) std::cerr << "warning: " << warning << '\n';
    emit(json{{"r", in_r}, {"lots", lots}}, in_out, "ingest-summary.json");
  });

  // simulate
  std::string sim_config;
  bool sim_synthetic = false;
  std::uint64_t sim_seed = 42;
  int sim_spd = 5;
  double sim_adoption = 0.2;
  std::string sim_out = env_out_dir().empty() ? "." : env_out_dir();
  auto* sim = app.add_subcommand("simulate", "seeded episode batch over a scenario");
  sim->add_option("--config", sim_config, "scenario config file");
  sim->add_flag("--synthetic", sim_synthetic, "use the generated high-demand scenario");
  auto* sim_seed_opt =
      sim->add_option("--seed", sim_seed, "master seed override")->capture_default_str();
  sim->add_option("--seeds-per-departure", sim_spd, "episodes per departure (synthetic)")
      ->capture_default_str();
  sim->add_option("--adoption", sim_adoption, "connected-user fraction (synthetic)")
      ->capture_default_str();
  sim->add_option("--out", sim_out, "output directory (default $PARKSIM_OUT or .)");
  sim->callback([&]() {
    std::optional<std::uint64_t> seed;
    if (sim_seed_opt->count() > 0 || sim_config.empty()) seed = sim_seed;
    Scenario scenario =
        scenario_from_flags(sim_config, sim_synthetic, seed, sim_spd, sim_adoption);
    BatchResult batch = run_batch(scenario);
    std::filesystem::create_directories(sim_out);
    std::string episodes_path = (std::filesystem::path(sim_out) / "episodes.csv").string();
    std::string aggregates_path = (std::filesystem::path(sim_out) / "aggregates.csv").string();
    write_episodes_csv(episodes_path, batch.episodes);
    write_aggregates_csv(aggregates_path, batch.aggregates);
    emit(json{{"episodes", batch.episodes.size()},
              {"files", json::array({episodes_path, aggregates_path})},
              {"aggregates", aggregates_to_json(batch.aggregates)}},
         sim_out, "simulate-summary.json");
  });

  // compare
  std::string cmp_config;
  bool cmp_synthetic = false;
  std::uint64_t cmp_seed = 42;
  int cmp_spd = 5;
  double cmp_adoption = 0.2;
  double cmp_drive = 10.0, cmp_transit = 20.0;
  std::string cmp_out = env_out_dir().empty() ? "." : env_out_dir();
  auto* cmp = app.add_subcommand("compare",
                                 "mode gaps: time-to-arrive vs direct drive and transit");
  cmp->add_option("--config", cmp_config, "scenario config file");
  cmp->add_flag("--synthetic", cmp_synthetic, "use the generated high-demand scenario");
  auto* cmp_seed_opt =
      cmp->add_option("--seed", cmp_seed, "master seed override")->capture_default_str();
  cmp->add_option("--seeds-per-departure", cmp_spd, "episodes per departure (synthetic)")
      ->capture_default_str();
  cmp->add_option("--adoption", cmp_adoption, "connected-user fraction (synthetic)")
      ->capture_default_str();
  cmp->add_option("--time-to-drive", cmp_drive, "direct drive reference, minutes")
      ->capture_default_str();
  cmp->add_option("--transit", cmp_transit, "public transit reference, minutes")
      ->capture_default_str();
  cmp->add_option("--out", cmp_out, "output directory (default $PARKSIM_OUT or .)");
  cmp->callback([&]() {
    std::optional<std::uint64_t> seed;
    if (cmp_seed_opt->count() > 0 || cmp_config.empty()) seed = cmp_seed;
    Scenario scenario =
        scenario_from_flags(cmp_config, cmp_synthetic, seed, cmp_spd, cmp_adoption);
    BatchResult batch = run_batch(scenario);
    auto gaps = compare_modes(batch.aggregates, cmp_drive, cmp_transit);
    std::filesystem::create_directories(cmp_out);
    std::string gaps_path = (std::filesystem::path(cmp_out) / "gaps.csv").string();
    write_gaps_csv(gaps_path, gaps);
    json rows = json::array();
    for (const auto& gap : gaps) {
      rows.push_back({{"policy", gap.policy},
                      {"mean", gap.mean},
                      {"gap_vs_drive_min", gap.gap_vs_drive_min},
                      {"gap_vs_drive_pct", gap.gap_vs_drive_pct},
                      {"gap_vs_transit_min", gap.gap_vs_transit_min},
                      {"gap_vs_transit_pct", gap.gap_vs_transit_pct}});
    }
    emit(json{{"time_to_drive", cmp_drive},
              {"transit_time", cmp_transit},
              {"files", json::array({gaps_path})},
              {"gaps", rows}},
         cmp_out, "compare-summary.json");
  });

  // preset
  std::string pr_name, pr_config;
  std::vector<std::string> pr_sets;
  std::uint64_t pr_seed = 42;
  bool pr_synthetic = false;
  std::string pr_out = env_out_dir().empty() ? "." : env_out_dir();
  auto* pr = app.add_subcommand("preset", "named desk-scale experiment");
  pr->add_option("--name", pr_name, "preset name (see --list)")->required();
  pr->add_option("--set", pr_sets, "key=value parameter overrides");
  auto* pr_seed_opt =
      pr->add_option("--seed", pr_seed, "master seed")->capture_default_str();
  pr->add_flag("--synthetic", pr_synthetic, "use generated data for the data-driven presets");
  pr->add_option("--config", pr_config, "scenario config for the data-driven presets");
  pr->add_option("--out", pr_out, "output directory (default $PARKSIM_OUT or .)");
  pr->callback([&]() {
    PresetRequest req;
    req.name = pr_name;
    if (pr_seed_opt->count() > 0) {
      req.seed = pr_seed;
    }
    req.out_dir = pr_out;
    req.synthetic = pr_synthetic;
    req.config_path = pr_config;
    for (const auto& kv : pr_sets) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::runtime_error("--set expects key=value, got " + kv);
      req.params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    PresetOutcome outcome = run_preset(req);
    std::cout << json{{"files", outcome.files}, {"summary", outcome.summary}}.dump(2) << '\n';
  });

  // validate
  std::string va_config;
  auto* va = app.add_subcommand("validate", "schema-check a network or scenario config");
  va->add_option("--config", va_config, "config file")->required();
  va->callback([&]() {
    ConfigFile cfg = load_config(va_config);
    std::vector<std::string> violations = network_violations(cfg);
    if (cfg.has("policies")) {
      for (const auto& token : cfg.get_strings("policies")) {
        try {
          parse_policy(token);
        } catch (const std::exception& e) {
          violations.push_back(e.what());
        }
      }
    }
    if (cfg.has("trace_kind")) {
      std::string kind = cfg.get_string("trace_kind");
      if (kind != "constant" && kind != "random-walk") {
        violations.push_back("unknown trace_kind '" + kind + "'");
      }
    }
    if (violations.empty()) {
      std::cout << "ok\n";
    } else {
      for (const auto& violation : violations) std::cout << "violation: " << violation << '\n';
      rc = 1;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
