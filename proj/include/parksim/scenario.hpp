#pragma once

#include <cstdint>
#include <string>

#include "parksim/ingest.hpp"
#include "parksim/network_config.hpp"
#include "parksim/simulator.hpp"

namespace parksim {

// Scenario config files extend the network format with:
//   departures = 480 540 600          (or departure_start/end/step)
//   seeds_per_departure = 5
//   master_seed = 42
//   horizon = 360                     minutes of search room past the last departure
//   policies = baseline-patient baseline-impatient pa1 pa2 pa3 pa1-oracle
//   adoption = 0.2                    connected-user fraction r
// and one trace source:
//   trace_kind = constant | random-walk   (starts from initial_probs)
//   observe_lambda = 20                    arrivals/hour feeding observe()
// or data files:
//   occupancy_file = occ.csv
//   transactions_file = txn.csv
//   lot_ids = a b c                        lot j reads records with the j-th id
//   timestamp_column / lot_column / occupied_column / capacity_column overrides
// Relative file paths resolve against base_dir.
Scenario load_scenario(const ConfigFile& cfg, const std::string& base_dir = ".");
Scenario load_scenario_file(const std::string& path);

// Three-lot synthetic day with a midday crunch: every lot dips under 0.2 at
// the peak, the two closest saturate outright, the farthest keeps just enough
// churn to reward re-planning. Streams come from connected-user sampling of
// the synthetic transactions.
SynthProfile high_demand_profile();
Scenario high_demand_scenario(std::uint64_t master_seed, int seeds_per_departure = 20,
                              double adoption = 0.2);

// Same network with roomy constant probabilities everywhere.
Scenario easy_scenario(std::uint64_t master_seed, double p = 0.97,
                       int seeds_per_departure = 20, double adoption = 0.2);

}  // namespace parksim
