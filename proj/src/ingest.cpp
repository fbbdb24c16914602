#include "parksim/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

#include "parksim/csv.hpp"
#include "parksim/rng.hpp"

namespace parksim {
namespace {

constexpr double kMsPerMinute = 60000.0;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

double parse_iso_minutes(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double sec = 0.0;
  std::size_t tpos = text.find_first_of("T ");
  std::string date = tpos == std::string::npos ? text : text.substr(0, tpos);
  std::string clock = tpos == std::string::npos ? "" : text.substr(tpos + 1);
  if (std::sscanf(date.c_str(), "%d-%d-%d", &y, &mo, &d) != 3) {
    throw std::invalid_argument("bad timestamp '" + text + "'");
  }
  if (!clock.empty()) {
    int got = std::sscanf(clock.c_str(), "%d:%d:%lf", &h, &mi, &sec);
    if (got < 2) throw std::invalid_argument("bad timestamp '" + text + "'");
  }
  using namespace std::chrono;
  year_month_day ymd = year{y} / mo / d;
  if (!ymd.ok()) throw std::invalid_argument("bad date in '" + text + "'");
  long long days = sys_days{ymd}.time_since_epoch().count();
  return days * 1440.0 + h * 60.0 + mi + sec / 60.0;
}

std::string format_iso_minutes(double epoch_minutes) {
  long long total_ms = std::llround(epoch_minutes * kMsPerMinute);
  long long day_ms = 86400000;
  long long days = total_ms >= 0 ? total_ms / day_ms : (total_ms - day_ms + 1) / day_ms;
  long long rem = total_ms - days * day_ms;
  int h = static_cast<int>(rem / 3600000);
  int mi = static_cast<int>(rem / 60000 % 60);
  int s = static_cast<int>(rem / 1000 % 60);
  int ms = static_cast<int>(rem % 1000);
  using namespace std::chrono;
  year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[40];
  if (ms == 0) {
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), h, mi, s);
  } else {
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03d", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), h, mi, s, ms);
  }
  return buf;
}

double midnight_base(double epoch_minutes) {
  return std::floor(epoch_minutes / 1440.0) * 1440.0;
}

std::vector<OccupancyRecord> read_occupancy(const std::string& path, const ColumnMap& cols) {
  CsvTable table = read_csv_file(path);
  std::size_t c_time = table.column(cols.timestamp);
  std::size_t c_lot = table.column(cols.lot);
  std::size_t c_occ = table.column(cols.occupied);
  std::size_t c_cap = table.column(cols.capacity);
  std::vector<OccupancyRecord> records;
  records.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    OccupancyRecord rec;
    rec.minutes = parse_iso_minutes(row.at(c_time));
    rec.lot_id = row.at(c_lot);
    rec.occupied = parse_int(row.at(c_occ));
    rec.capacity = parse_int(row.at(c_cap));
    if (rec.occupied < 0) throw std::invalid_argument(path + ": negative occupancy");
    if (rec.capacity < 1) throw std::invalid_argument(path + ": capacity below 1");
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<TransactionRecord> read_transactions(const std::string& path,
                                                 const ColumnMap& cols) {
  CsvTable table = read_csv_file(path);
  std::size_t c_time = table.column(cols.timestamp);
  std::size_t c_lot = table.column(cols.lot);
  std::vector<TransactionRecord> records;
  records.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    records.push_back({parse_iso_minutes(row.at(c_time)), row.at(c_lot)});
  }
  return records;
}

void rebase(std::vector<OccupancyRecord>& occupancy,
            std::vector<TransactionRecord>& transactions) {
  double first = std::numeric_limits<double>::infinity();
  for (const auto& rec : occupancy) first = std::min(first, rec.minutes);
  if (occupancy.empty()) {
    for (const auto& rec : transactions) first = std::min(first, rec.minutes);
  }
  if (!std::isfinite(first)) return;
  double base = midnight_base(first);
  for (auto& rec : occupancy) rec.minutes -= base;
  for (auto& rec : transactions) rec.minutes -= base;
}

void write_occupancy_csv(const std::string& path, std::span<const OccupancyRecord> records,
                         const std::string& start_date) {
  double base = parse_iso_minutes(start_date + "T00:00");
  auto out = open_out(path);
  out << "timestamp,lot_id,occupied,capacity\n";
  for (const auto& rec : records) {
    std::vector<std::string> fields = {format_iso_minutes(base + rec.minutes), rec.lot_id,
                                       std::to_string(rec.occupied),
                                       std::to_string(rec.capacity)};
    write_csv_row(out, fields);
  }
}

void write_transactions_csv(const std::string& path,
                            std::span<const TransactionRecord> records,
                            const std::string& start_date) {
  double base = parse_iso_minutes(start_date + "T00:00");
  auto out = open_out(path);
  out << "timestamp,lot_id\n";
  for (const auto& rec : records) {
    std::vector<std::string> fields = {format_iso_minutes(base + rec.minutes), rec.lot_id};
    write_csv_row(out, fields);
  }
}

ProbabilityTrace occupancy_to_trace(std::span<const OccupancyRecord> records,
                                    const std::string& lot_id,
                                    std::vector<std::string>* warnings) {
  ProbabilityTrace trace;
  trace.kind = TraceKind::Empirical;
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& rec : records) {
    if (rec.lot_id != lot_id) continue;
    if (rec.minutes < prev) {
      throw std::invalid_argument("occupancy timestamps for lot " + lot_id + " go backwards");
    }
    prev = rec.minutes;
    if (rec.occupied > rec.capacity && warnings) {
      warnings->push_back("lot " + lot_id + " at minute " + fmt_double(rec.minutes) +
                          ": occupied " + std::to_string(rec.occupied) + " exceeds capacity " +
                          std::to_string(rec.capacity) + ", clamped");
    }
    double p = 1.0 - static_cast<double>(rec.occupied) / static_cast<double>(rec.capacity);
    p = std::clamp(p, kProbFloor, 1.0);
    if (!trace.samples.empty() && trace.samples.back().time == rec.minutes) {
      trace.samples.back().p = p;
    } else {
      trace.samples.push_back({rec.minutes, p});
    }
  }
  if (trace.samples.empty()) {
    throw std::invalid_argument("no occupancy records for lot " + lot_id);
  }
  return trace;
}

std::vector<TransactionRecord> sample_connected_users(std::span<const TransactionRecord> txns,
                                                      double r, std::uint64_t seed) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("adoption rate must lie in (0,1]");
  Rng rng(seed);
  std::vector<TransactionRecord> kept;
  for (const auto& txn : txns) {
    if (rng.bernoulli(r)) kept.push_back(txn);
  }
  return kept;
}

ObservationStream stream_from_transactions(const ProbabilityTrace& trace,
                                           std::span<const TransactionRecord> txns,
                                           const std::string& lot_id) {
  std::vector<double> times;
  for (const auto& txn : txns) {
    if (txn.lot_id == lot_id) times.push_back(txn.minutes);
  }
  return stream_at_times(trace, times);
}

SynthDataset synth_dataset(const SynthProfile& profile, std::uint64_t seed) {
  if (profile.lots.empty()) throw std::invalid_argument("profile has no lots");
  if (!(profile.window_end > profile.window_start)) {
    throw std::invalid_argument("window must have positive span");
  }
  if (!(profile.record_every > 0.0)) throw std::invalid_argument("record_every must be positive");
  std::set<std::string> ids;
  for (const auto& lot : profile.lots) {
    if (lot.id.empty()) throw std::invalid_argument("lot id must be nonempty");
    if (!ids.insert(lot.id).second) throw std::invalid_argument("duplicate lot id " + lot.id);
    if (lot.capacity < 1) throw std::invalid_argument("capacity below 1 for lot " + lot.id);
    if (lot.base_rate_per_hour < 0.0 || lot.peak_rate_per_hour < 0.0) {
      throw std::invalid_argument("negative arrival rate for lot " + lot.id);
    }
    if (!(lot.stay_minutes_mean > 0.0)) {
      throw std::invalid_argument("stay mean must be positive for lot " + lot.id);
    }
    if (lot.initial_occupied < 0 || lot.initial_occupied > lot.capacity) {
      throw std::invalid_argument("initial occupancy out of range for lot " + lot.id);
    }
  }

  double mid = (profile.peak_start + profile.peak_end) / 2.0;
  auto bump = [&](double t) {
    if (t <= profile.peak_start || t >= profile.peak_end) return 0.0;
    if (t <= mid) return (t - profile.peak_start) / (mid - profile.peak_start);
    return (profile.peak_end - t) / (profile.peak_end - mid);
  };

  SynthDataset dataset;
  for (const auto& lot : profile.lots) {
    Rng rng(derive_seed(seed, hash64(lot.id)));
    auto rate_per_min = [&](double t) {
      return (lot.base_rate_per_hour +
              (lot.peak_rate_per_hour - lot.base_rate_per_hour) * bump(t)) /
             60.0;
    };
    double rate_max = std::max(lot.base_rate_per_hour, lot.peak_rate_per_hour) / 60.0;

    std::priority_queue<double, std::vector<double>, std::greater<>> departures;
    long long occupied = lot.initial_occupied;
    for (long long i = 0; i < lot.initial_occupied; ++i) {
      departures.push(profile.window_start + rng.exponential(1.0 / lot.stay_minutes_mean));
    }

    double inf = std::numeric_limits<double>::infinity();
    double next_arrival =
        rate_max > 0.0 ? profile.window_start + rng.exponential(rate_max) : inf;
    double next_record = profile.window_start;
    const double grid_end = profile.window_end + 1e-9;

    while (true) {
      if (next_arrival > profile.window_end) next_arrival = inf;
      if (next_record > grid_end && next_arrival == inf) break;
      if (next_record <= next_arrival && next_record <= grid_end) {
        while (!departures.empty() && departures.top() <= next_record) {
          departures.pop();
          --occupied;
        }
        dataset.occupancy.push_back({next_record, lot.id, occupied, lot.capacity});
        next_record += profile.record_every;
      } else {
        double t = next_arrival;
        while (!departures.empty() && departures.top() <= t) {
          departures.pop();
          --occupied;
        }
        if (rng.bernoulli(rate_per_min(t) / rate_max)) {
          if (occupied < lot.capacity) {
            ++occupied;
            departures.push(t + rng.exponential(1.0 / lot.stay_minutes_mean));
            dataset.transactions.push_back({t, lot.id});
          }
          // a full lot turns the car away without a payment record
        }
        next_arrival = t + rng.exponential(rate_max);
      }
    }
  }

  std::stable_sort(dataset.occupancy.begin(), dataset.occupancy.end(),
                   [](const OccupancyRecord& a, const OccupancyRecord& b) {
                     return a.minutes < b.minutes;
                   });
  std::stable_sort(dataset.transactions.begin(), dataset.transactions.end(),
                   [](const TransactionRecord& a, const TransactionRecord& b) {
                     return a.minutes < b.minutes;
                   });
  return dataset;
}

void write_trace_csv(const std::string& path, const ProbabilityTrace& trace) {
  auto out = open_out(path);
  out << "time_min,p\n";
  for (const auto& pt : trace.samples) {
    out << fmt_double(pt.time) << ',' << fmt_double(pt.p) << '\n';
  }
}

void write_stream_csv(const std::string& path, const ObservationStream& stream) {
  auto out = open_out(path);
  out << "time_min,p\n";
  for (const auto& ob : stream.observations) {
    out << fmt_double(ob.time) << ',' << fmt_double(ob.p) << '\n';
  }
}

}  // namespace parksim
