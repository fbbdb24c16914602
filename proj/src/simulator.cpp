#include "parksim/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "parksim/csv.hpp"
#include "parksim/rng.hpp"

namespace parksim {

void Scenario::validate() const {
  net.validate();
  if (static_cast<LotIndex>(traces.size()) != net.n_lots) {
    throw std::invalid_argument("scenario needs one trace per lot");
  }
  bool any_observed = false;
  for (const auto& policy : policies) {
    if (!policy.oracle) any_observed = true;
  }
  if (any_observed && static_cast<LotIndex>(streams.size()) != net.n_lots) {
    throw std::invalid_argument("non-oracle policies need one observation stream per lot");
  }
  if (policies.empty()) throw std::invalid_argument("scenario has no policies");
  if (departures.empty()) throw std::invalid_argument("scenario has no departures");
  if (seeds_per_departure <= 0) {
    throw std::invalid_argument("seeds_per_departure must be positive");
  }
  double first = *std::min_element(departures.begin(), departures.end());
  double last = *std::max_element(departures.begin(), departures.end());
  for (const auto& trace : traces) {
    if (trace.start_time() > first || trace.end_time() < last) {
      throw std::invalid_argument("traces must span every departure time");
    }
  }
}

Belief belief_at(const Scenario& scenario, const PolicySpec& policy, double clock) {
  if (!policy.oracle &&
      static_cast<LotIndex>(scenario.streams.size()) < scenario.net.n_lots) {
    throw std::invalid_argument("scenario has no observation streams");
  }
  Belief belief;
  belief.source = policy.oracle ? BeliefSource::OracleTrue : BeliefSource::Observed;
  belief.probs.reserve(static_cast<std::size_t>(scenario.net.n_lots));
  for (LotIndex j = 1; j <= scenario.net.n_lots; ++j) {
    double raw = policy.oracle ? scenario.traces[static_cast<std::size_t>(j - 1)].value_at(clock)
                               : scenario.streams[static_cast<std::size_t>(j - 1)].estimate_at(clock);
    belief.probs.push_back(std::clamp(raw, kBeliefFloor, 1.0));
  }
  return belief;
}

std::uint64_t episode_seed(std::uint64_t master, const PolicySpec& policy,
                           double departure, int episode_index) {
  return derive_seed(master, hash64(policy.base_name()),
                     std::bit_cast<std::uint64_t>(departure),
                     static_cast<std::uint64_t>(episode_index));
}

EpisodeResult run_episode(const Scenario& scenario, const PolicySpec& policy,
                          double departure, int episode_index) {
  const ParkingNetwork& net = scenario.net;
  if (static_cast<LotIndex>(scenario.traces.size()) != net.n_lots) {
    throw std::invalid_argument("scenario needs one trace per lot");
  }

  EpisodeResult result;
  result.policy = policy.name();
  result.departure = departure;
  result.episode_index = episode_index;
  result.seed = episode_seed(scenario.master_seed, policy, departure, episode_index);

  Rng rng(result.seed);
  VehicleState state;
  state.location = kOrigin;
  state.clock = departure;

  std::vector<RewardBreakdown> rewards;
  for (int step = 0;; ++step) {
    if (step >= 100000) {
      throw std::runtime_error("episode did not terminate within 100000 attempts (policy " +
                               result.policy + ")");
    }
    Belief belief = belief_at(scenario, policy, state.clock);
    LotIndex target = decide(policy, state, net, belief);
    double travel = state.location == target ? net.wait_time : net.drive(state.location, target);
    double attempt_clock = state.clock + travel;

    if (policy.kind == PolicyKind::BaselinePatient &&
        attempt_clock - departure > policy.cap_minutes) {
      result.capped = true;
      result.total_minutes = policy.cap_minutes + net.walk(target);
      break;
    }

    const ProbabilityTrace& trace = scenario.traces[static_cast<std::size_t>(target - 1)];
    if (attempt_clock > trace.end_time()) {
      throw std::runtime_error(
          "trace for lot " + std::to_string(target) + " ends at minute " +
          fmt_double(trace.end_time()) + " but policy " + result.policy +
          " departing at " + fmt_double(departure) + " is still searching at minute " +
          fmt_double(attempt_clock));
    }

    bool parked = rng.bernoulli(trace.value_at(attempt_clock));
    RewardBreakdown leg = reward(state.location, target, parked, net);
    rewards.push_back(leg);
    result.legs.push_back({target, parked, leg, attempt_clock});

    state.visited.insert(target);
    state.location = target;
    state.clock = attempt_clock;

    if (parked) {
      state.status = ParkStatus::Parked;
      result.total_minutes = time_to_arrive(rewards);
      break;
    }
    if (policy.kind == PolicyKind::BaselineImpatient &&
        static_cast<LotIndex>(state.visited.size()) == net.n_lots) {
      // search cycle reset; the new cycle remembers only where the car stands
      state.visited.clear();
      state.visited.insert(state.location);
    }
  }
  return result;
}

BatchResult run_batch(const Scenario& scenario) {
  scenario.validate();
  std::vector<PolicySpec> unique;
  for (const auto& policy : scenario.policies) {
    bool seen = false;
    for (const auto& kept : unique) {
      if (kept.name() == policy.name()) seen = true;
    }
    if (!seen) unique.push_back(policy);
  }

  BatchResult batch;
  for (const auto& policy : unique) {
    for (double departure : scenario.departures) {
      for (int idx = 0; idx < scenario.seeds_per_departure; ++idx) {
        batch.episodes.push_back(run_episode(scenario, policy, departure, idx));
      }
    }
  }
  batch.aggregates = aggregate(batch.episodes);
  return batch;
}

std::vector<AggregateRow> aggregate(std::span<const EpisodeResult> episodes) {
  struct Bucket {
    std::vector<double> totals;
    int capped = 0;
  };
  std::map<std::string, Bucket> buckets;
  for (const auto& ep : episodes) {
    auto& bucket = buckets[ep.policy];
    bucket.totals.push_back(ep.total_minutes);
    if (ep.capped) ++bucket.capped;
  }

  std::vector<AggregateRow> rows;
  for (const auto& [name, bucket] : buckets) {
    AggregateRow row;
    row.policy = name;
    row.n = static_cast<int>(bucket.totals.size());
    row.capped = bucket.capped;
    double sum = 0.0;
    for (double x : bucket.totals) sum += x;
    row.mean = sum / row.n;
    if (row.n > 1) {
      double ss = 0.0;
      for (double x : bucket.totals) ss += (x - row.mean) * (x - row.mean);
      row.stddev = std::sqrt(ss / (row.n - 1));
    }
    rows.push_back(std::move(row));
  }

  auto mean_of = [&rows](const std::string& name) -> std::optional<double> {
    for (const auto& row : rows) {
      if (row.policy == name) return row.mean;
    }
    return std::nullopt;
  };
  auto patient = mean_of("baseline-patient");
  auto impatient = mean_of("baseline-impatient");
  for (auto& row : rows) {
    if (patient && row.policy != "baseline-patient") {
      row.gain_vs_patient_pct = (1.0 - row.mean / *patient) * 100.0;
    }
    if (impatient && row.policy != "baseline-impatient" &&
        row.policy != "baseline-patient") {
      row.gain_vs_impatient_pct = (1.0 - row.mean / *impatient) * 100.0;
    }
    if (row.policy.find("-oracle") == std::string::npos) {
      if (auto oracle = mean_of(row.policy + "-oracle")) {
        row.perf_vs_oracle_pct = (1.0 - row.mean / *oracle) * 100.0;
      }
    }
  }
  return rows;
}

std::vector<ModeGapRow> compare_modes(std::span<const AggregateRow> rows,
                                      double time_to_drive, double transit_time) {
  if (!(time_to_drive > 0.0) || !(transit_time > 0.0)) {
    throw std::invalid_argument("reference times must be positive");
  }
  if (rows.empty()) throw std::invalid_argument("no aggregate rows to compare");
  std::vector<ModeGapRow> gaps;
  gaps.reserve(rows.size());
  for (const auto& row : rows) {
    ModeGapRow gap;
    gap.policy = row.policy;
    gap.mean = row.mean;
    gap.gap_vs_drive_min = row.mean - time_to_drive;
    gap.gap_vs_drive_pct = gap.gap_vs_drive_min / time_to_drive * 100.0;
    gap.gap_vs_transit_min = row.mean - transit_time;
    gap.gap_vs_transit_pct = gap.gap_vs_transit_min / transit_time * 100.0;
    gaps.push_back(std::move(gap));
  }
  return gaps;
}

}  // namespace parksim
