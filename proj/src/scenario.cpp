#include "parksim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "parksim/rng.hpp"

namespace parksim {
namespace {

void extend_trace(ProbabilityTrace& trace, double t_end) {
  if (trace.end_time() < t_end) trace.samples.push_back({t_end, trace.samples.back().p});
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

std::vector<double> departures_of(const ConfigFile& cfg) {
  if (cfg.has("departures")) return cfg.get_doubles("departures");
  if (cfg.has("departure_start")) {
    double start = cfg.get_double("departure_start");
    double end = cfg.get_double("departure_end");
    double step = cfg.get_double("departure_step", 60.0);
    if (!(step > 0.0)) throw std::invalid_argument("departure_step must be positive");
    std::vector<double> departures;
    for (double t = start; t <= end + 1e-9; t += step) departures.push_back(t);
    return departures;
  }
  throw std::invalid_argument("scenario config needs departures or departure_start/end");
}

ColumnMap columns_of(const ConfigFile& cfg) {
  ColumnMap cols;
  if (cfg.has("timestamp_column")) cols.timestamp = cfg.get_string("timestamp_column");
  if (cfg.has("lot_column")) cols.lot = cfg.get_string("lot_column");
  if (cfg.has("occupied_column")) cols.occupied = cfg.get_string("occupied_column");
  if (cfg.has("capacity_column")) cols.capacity = cfg.get_string("capacity_column");
  return cols;
}

ParkingNetwork three_lot_network() {
  ParkingNetwork net;
  net.n_lots = 3;
  net.drive_time = {{0, 10, 11, 12}, {10, 0, 4, 7}, {11, 4, 0, 4}, {12, 7, 4, 0}};
  net.walk_time = {3, 5, 7};
  net.wait_time = 5;
  net.initial_probs = {0.625, 0.64, 0.75};
  return net;
}

std::vector<PolicySpec> full_policy_list() {
  std::vector<PolicySpec> policies;
  for (const char* token : {"baseline-patient", "baseline-impatient", "pa1", "pa2", "pa3",
                            "pa1-oracle", "pa2-oracle", "pa3-oracle"}) {
    policies.push_back(parse_policy(token));
  }
  return policies;
}

std::vector<double> hourly_departures() {
  std::vector<double> departures;
  for (double t = 480.0; t <= 1080.0; t += 60.0) departures.push_back(t);
  return departures;
}

}  // namespace

Scenario load_scenario(const ConfigFile& cfg, const std::string& base_dir) {
  Scenario scenario;
  scenario.net = network_from_config(cfg);
  scenario.departures = departures_of(cfg);
  scenario.seeds_per_departure = static_cast<int>(cfg.get_int("seeds_per_departure", 5));
  scenario.master_seed = static_cast<std::uint64_t>(cfg.get_int("master_seed", 0));
  double horizon = cfg.get_double("horizon", 360.0);
  double adoption = cfg.get_double("adoption", 0.2);

  for (const auto& token : cfg.get_strings("policies")) {
    scenario.policies.push_back(parse_policy(token));
  }

  double last = *std::max_element(scenario.departures.begin(), scenario.departures.end());
  double t_end = last + horizon;

  if (cfg.has("occupancy_file")) {
    ColumnMap cols = columns_of(cfg);
    auto occupancy = read_occupancy(resolve(base_dir, cfg.get_string("occupancy_file")), cols);
    std::vector<TransactionRecord> txns;
    if (cfg.has("transactions_file")) {
      txns = read_transactions(resolve(base_dir, cfg.get_string("transactions_file")), cols);
    }
    rebase(occupancy, txns);
    auto lot_ids = cfg.get_strings("lot_ids");
    if (static_cast<LotIndex>(lot_ids.size()) != scenario.net.n_lots) {
      throw std::invalid_argument("lot_ids must list one id per lot");
    }
    auto kept = sample_connected_users(txns, adoption,
                                       derive_seed(scenario.master_seed, hash64("connected")));
    for (LotIndex j = 1; j <= scenario.net.n_lots; ++j) {
      const std::string& id = lot_ids[static_cast<std::size_t>(j - 1)];
      ProbabilityTrace trace = occupancy_to_trace(occupancy, id);
      extend_trace(trace, t_end);
      scenario.streams.push_back(stream_from_transactions(trace, kept, id));
      scenario.traces.push_back(std::move(trace));
    }
  } else {
    std::string kind = cfg.get_string("trace_kind", "constant");
    double lambda = cfg.get_double("observe_lambda", 20.0);
    for (LotIndex j = 1; j <= scenario.net.n_lots; ++j) {
      double p0 = scenario.net.prob(j);
      ProbabilityTrace trace;
      if (kind == "constant") {
        trace = constant_trace(p0, 0.0, t_end);
      } else if (kind == "random-walk") {
        int minutes = static_cast<int>(std::ceil(t_end));
        trace = bounded_random_walk(
            p0, minutes,
            derive_seed(scenario.master_seed, hash64("walk"), static_cast<std::uint64_t>(j)));
      } else {
        throw std::invalid_argument("unknown trace_kind '" + kind + "'");
      }
      scenario.streams.push_back(observe(
          trace, lambda, adoption,
          derive_seed(scenario.master_seed, hash64("observe"), static_cast<std::uint64_t>(j))));
      scenario.traces.push_back(std::move(trace));
    }
  }

  scenario.validate();
  return scenario;
}

Scenario load_scenario_file(const std::string& path) {
  ConfigFile cfg = load_config(path);
  return load_scenario(cfg, std::filesystem::path(path).parent_path().string());
}

SynthProfile high_demand_profile() {
  SynthProfile profile;
  profile.lots = {
      {"a", 40, 20.0, 150.0, 45.0, 15},
      {"b", 50, 25.0, 110.0, 45.0, 18},
      {"c", 60, 20.0, 80.0, 45.0, 15},
  };
  profile.window_start = 480.0;
  profile.window_end = 1440.0;
  profile.peak_start = 660.0;
  profile.peak_end = 900.0;
  profile.record_every = 5.0;
  return profile;
}

Scenario high_demand_scenario(std::uint64_t master_seed, int seeds_per_departure,
                              double adoption) {
  Scenario scenario;
  scenario.net = three_lot_network();
  scenario.policies = full_policy_list();
  scenario.departures = hourly_departures();
  scenario.seeds_per_departure = seeds_per_departure;
  scenario.master_seed = master_seed;

  SynthProfile profile = high_demand_profile();
  SynthDataset dataset = synth_dataset(profile, derive_seed(master_seed, hash64("synth")));
  auto kept = sample_connected_users(dataset.transactions, adoption,
                                     derive_seed(master_seed, hash64("connected")));
  for (const auto& lot : profile.lots) {
    ProbabilityTrace trace = occupancy_to_trace(dataset.occupancy, lot.id);
    scenario.streams.push_back(stream_from_transactions(trace, kept, lot.id));
    scenario.traces.push_back(std::move(trace));
  }
  scenario.validate();
  return scenario;
}

Scenario easy_scenario(std::uint64_t master_seed, double p, int seeds_per_departure,
                       double adoption) {
  Scenario scenario;
  scenario.net = three_lot_network();
  scenario.net.initial_probs = {p, p, p};
  scenario.policies = full_policy_list();
  scenario.departures = hourly_departures();
  scenario.seeds_per_departure = seeds_per_departure;
  scenario.master_seed = master_seed;
  for (LotIndex j = 1; j <= scenario.net.n_lots; ++j) {
    ProbabilityTrace trace = constant_trace(p, 0.0, 1440.0);
    scenario.streams.push_back(observe(
        trace, 30.0, adoption,
        derive_seed(master_seed, hash64("observe"), static_cast<std::uint64_t>(j))));
    scenario.traces.push_back(std::move(trace));
  }
  scenario.validate();
  return scenario;
}

}  // namespace parksim
