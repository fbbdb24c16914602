#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parksim/observer.hpp"

namespace parksim {

// Occupancy below this clamps to it so probabilities stay positive.
inline constexpr double kProbFloor = 1e-3;

// Times are minutes on the scenario clock: minutes since the dataset's
// first midnight after rebasing (so 8am is 480).
struct OccupancyRecord {
  double minutes = 0.0;
  std::string lot_id;
  long long occupied = 0;
  long long capacity = 0;
};

struct TransactionRecord {
  double minutes = 0.0;
  std::string lot_id;
};

// Maps the documented logical fields onto whatever column names a data
// export uses.
struct ColumnMap {
  std::string timestamp = "timestamp";
  std::string lot = "lot_id";
  std::string occupied = "occupied";
  std::string capacity = "capacity";
};

// ISO-8601 "YYYY-MM-DD[T ]HH:MM[:SS[.fff]]" to minutes since the epoch.
double parse_iso_minutes(const std::string& text);
std::string format_iso_minutes(double epoch_minutes);

// Midnight of the day containing the given epoch minute.
double midnight_base(double epoch_minutes);

// Readers return absolute epoch minutes; rebase against the earliest
// occupancy record's midnight before building traces.
std::vector<OccupancyRecord> read_occupancy(const std::string& path,
                                            const ColumnMap& cols = {});
std::vector<TransactionRecord> read_transactions(const std::string& path,
                                                 const ColumnMap& cols = {});

void rebase(std::vector<OccupancyRecord>& occupancy,
            std::vector<TransactionRecord>& transactions);

void write_occupancy_csv(const std::string& path,
                         std::span<const OccupancyRecord> records,
                         const std::string& start_date);
void write_transactions_csv(const std::string& path,
                            std::span<const TransactionRecord> records,
                            const std::string& start_date);

// Inverse-occupancy proxy: p = clamp(1 - occupied/capacity, floor, 1),
// piecewise constant between records. Over-capacity records clamp to the
// floor and append to `warnings` when given.
ProbabilityTrace occupancy_to_trace(std::span<const OccupancyRecord> records,
                                    const std::string& lot_id,
                                    std::vector<std::string>* warnings = nullptr);

// Bernoulli thinning: each transaction kept with probability r.
std::vector<TransactionRecord> sample_connected_users(
    std::span<const TransactionRecord> txns, double r, std::uint64_t seed);

ObservationStream stream_from_transactions(const ProbabilityTrace& trace,
                                           std::span<const TransactionRecord> txns,
                                           const std::string& lot_id);

struct SynthLot {
  std::string id;
  long long capacity = 50;
  double base_rate_per_hour = 20.0;
  double peak_rate_per_hour = 60.0;
  double stay_minutes_mean = 60.0;
  long long initial_occupied = 0;
};

struct SynthProfile {
  std::vector<SynthLot> lots;
  double window_start = 480.0;  // 8am
  double window_end = 1200.0;   // 8pm
  double peak_start = 660.0;
  double peak_end = 900.0;
  double record_every = 5.0;
  std::string start_date = "2026-03-07";
};

struct SynthDataset {
  std::vector<OccupancyRecord> occupancy;
  std::vector<TransactionRecord> transactions;
};

// Arrivals form an inhomogeneous Poisson process (triangular bump between
// peak_start and peak_end), stays are exponential, full lots turn arrivals
// away without a transaction. Occupancy is sampled every record_every
// minutes. Deterministic per seed.
SynthDataset synth_dataset(const SynthProfile& profile, std::uint64_t seed);

void write_trace_csv(const std::string& path, const ProbabilityTrace& trace);
void write_stream_csv(const std::string& path, const ObservationStream& stream);

}  // namespace parksim
