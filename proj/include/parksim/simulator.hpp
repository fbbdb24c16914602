#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parksim/core_model.hpp"
#include "parksim/observer.hpp"
#include "parksim/policies.hpp"

namespace parksim {

// Believed probabilities are floored here so 1/p stays finite even when a
// trace sits at zero.
inline constexpr double kBeliefFloor = 1e-3;

struct EpisodeLeg {
  LotIndex lot = 0;
  bool parked = false;
  RewardBreakdown reward;
  double clock_at_attempt = 0.0;
};

struct EpisodeResult {
  std::vector<EpisodeLeg> legs;
  double total_minutes = 0.0;
  bool capped = false;
  std::string policy;
  double departure = 0.0;
  int episode_index = 0;
  std::uint64_t seed = 0;
};

// One simulation setting: a network, the true per-lot probability traces,
// and the hold-last observation streams the non-oracle policies see.
struct Scenario {
  ParkingNetwork net;
  std::vector<ProbabilityTrace> traces;    // traces[j-1] for lot j
  std::vector<ObservationStream> streams;  // streams[j-1] for lot j
  std::vector<PolicySpec> policies;
  std::vector<double> departures;
  int seeds_per_departure = 5;
  std::uint64_t master_seed = 0;

  void validate() const;
};

// Belief snapshot a policy sees at the given clock: the true trace values
// for oracle policies, the stream hold-last values otherwise.
Belief belief_at(const Scenario& scenario, const PolicySpec& policy, double clock);

std::uint64_t episode_seed(std::uint64_t master, const PolicySpec& policy,
                           double departure, int episode_index);

EpisodeResult run_episode(const Scenario& scenario, const PolicySpec& policy,
                          double departure, int episode_index);

struct AggregateRow {
  std::string policy;
  int n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  int capped = 0;
  std::optional<double> gain_vs_patient_pct;
  std::optional<double> gain_vs_impatient_pct;
  std::optional<double> perf_vs_oracle_pct;
};

struct BatchResult {
  std::vector<EpisodeResult> episodes;
  std::vector<AggregateRow> aggregates;  // sorted by policy name
};

// Full (policy x departure x seed) grid. Every episode draws from its own
// stream derived from (master, policy base name, departure, index), so
// results do not depend on listing order and oracle twins are paired.
BatchResult run_batch(const Scenario& scenario);

std::vector<AggregateRow> aggregate(std::span<const EpisodeResult> episodes);

struct ModeGapRow {
  std::string policy;
  double mean = 0.0;
  double gap_vs_drive_min = 0.0;
  double gap_vs_drive_pct = 0.0;
  double gap_vs_transit_min = 0.0;
  double gap_vs_transit_pct = 0.0;
};

// Absolute and percentage gaps of each policy's mean time-to-arrive against
// a direct-drive reference and a transit reference.
std::vector<ModeGapRow> compare_modes(std::span<const AggregateRow> rows,
                                      double time_to_drive, double transit_time);

}  // namespace parksim
