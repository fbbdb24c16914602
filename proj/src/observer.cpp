#include "parksim/observer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parksim/rng.hpp"

namespace parksim {
namespace {

double rate_per_min_of(double lambda_per_hour, double adoption) {
  double product = lambda_per_hour * adoption;
  if (!(product > 0.0)) {
    throw std::invalid_argument("observation rate lambda*r must be positive");
  }
  return product / 60.0;
}

}  // namespace

double ProbabilityTrace::start_time() const {
  if (samples.empty()) throw std::logic_error("empty trace");
  return samples.front().time;
}

double ProbabilityTrace::end_time() const {
  if (samples.empty()) throw std::logic_error("empty trace");
  return samples.back().time;
}

double ProbabilityTrace::initial_value() const {
  if (samples.empty()) throw std::logic_error("empty trace");
  return samples.front().p;
}

double ProbabilityTrace::value_at(double t) const {
  if (samples.empty()) throw std::logic_error("empty trace");
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double lhs, const TracePoint& pt) { return lhs < pt.time; });
  if (it == samples.begin()) return samples.front().p;
  return std::prev(it)->p;
}

double ObservationStream::estimate_at(double t) const {
  auto it = std::upper_bound(observations.begin(), observations.end(), t,
                             [](double lhs, const Observation& ob) { return lhs < ob.time; });
  if (it == observations.begin()) return initial_estimate;
  return std::prev(it)->p;
}

ProbabilityTrace bounded_random_walk(double start, int minutes, std::uint64_t seed) {
  if (!(start >= 0.0 && start <= 1.0)) {
    throw std::invalid_argument("random walk start must lie in [0,1]");
  }
  if (minutes < 0) throw std::invalid_argument("minutes must be nonnegative");
  Rng rng(seed);
  long long h = std::llround(start * 100.0);  // integer percentage points
  ProbabilityTrace trace;
  trace.kind = TraceKind::RandomWalk;
  trace.samples.reserve(static_cast<std::size_t>(minutes) + 1);
  trace.samples.push_back({0.0, h / 100.0});
  for (int minute = 1; minute <= minutes; ++minute) {
    if (h == 0) {
      h = 1;
    } else if (h == 100) {
      h = 99;
    } else {
      h += rng.bernoulli(0.5) ? 1 : -1;
    }
    trace.samples.push_back({static_cast<double>(minute), h / 100.0});
  }
  return trace;
}

ProbabilityTrace constant_trace(double p, double t0, double t1) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
  if (!(t1 > t0)) throw std::invalid_argument("trace needs a positive span");
  ProbabilityTrace trace;
  trace.kind = TraceKind::Empirical;
  trace.samples = {{t0, p}, {t1, p}};
  return trace;
}

ProbabilityTrace linear_trace(double p0, double slope_per_min, double t0, double t1,
                              double dt) {
  if (!(t1 > t0)) throw std::invalid_argument("trace needs a positive span");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  ProbabilityTrace trace;
  trace.kind = TraceKind::Linear;
  for (double t = t0; t < t1; t += dt) {
    double p = std::clamp(p0 + slope_per_min * (t - t0), 0.0, 1.0);
    trace.samples.push_back({t, p});
  }
  double p_end = std::clamp(p0 + slope_per_min * (t1 - t0), 0.0, 1.0);
  trace.samples.push_back({t1, p_end});
  return trace;
}

ObservationStream observe(const ProbabilityTrace& trace, double lambda_per_hour,
                          double adoption, std::uint64_t seed) {
  ObservationStream stream;
  stream.rate_per_min = rate_per_min_of(lambda_per_hour, adoption);
  stream.initial_estimate = trace.initial_value();
  Rng rng(seed);
  double t = trace.start_time();
  double end = trace.end_time();
  while (true) {
    t += rng.exponential(stream.rate_per_min);
    if (t > end) break;
    stream.observations.push_back({t, trace.value_at(t)});
  }
  return stream;
}

ObservationStream stream_at_times(const ProbabilityTrace& trace,
                                  std::span<const double> times) {
  ObservationStream stream;
  stream.initial_estimate = trace.initial_value();
  std::vector<double> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  for (double t : sorted) {
    if (t < trace.start_time() || t > trace.end_time()) continue;
    stream.observations.push_back({t, trace.value_at(t)});
  }
  double span = trace.end_time() - trace.start_time();
  if (span > 0.0) {
    stream.rate_per_min = static_cast<double>(stream.observations.size()) / span;
  }
  return stream;
}

double mae(const ProbabilityTrace& trace, const ObservationStream& stream) {
  double start = trace.start_time();
  double end = trace.end_time();
  if (!(end > start)) return std::abs(trace.initial_value() - stream.estimate_at(start));

  std::vector<double> breaks;
  breaks.reserve(trace.samples.size() + stream.observations.size() + 2);
  breaks.push_back(start);
  breaks.push_back(end);
  for (const auto& pt : trace.samples) {
    if (pt.time > start && pt.time < end) breaks.push_back(pt.time);
  }
  for (const auto& ob : stream.observations) {
    if (ob.time > start && ob.time < end) breaks.push_back(ob.time);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = breaks[i];
    double b = breaks[i + 1];
    integral += std::abs(trace.value_at(a) - stream.estimate_at(a)) * (b - a);
  }
  return integral / (end - start);
}

double linear_error_expectation(double slope_per_min, double lambda_per_hour,
                                double adoption) {
  if (slope_per_min < 0.0) throw std::invalid_argument("slope must be nonnegative");
  double rho = rate_per_min_of(lambda_per_hour, adoption);
  return slope_per_min / (rho * rho);
}

double exponential_error_expectation(double exponent, double lambda_per_hour,
                                     double adoption) {
  if (exponent < 1.0) throw std::invalid_argument("exponent must be at least 1");
  double rho = rate_per_min_of(lambda_per_hour, adoption);
  return exponent / std::pow(rho, exponent + 1.0);
}

double exponential_error_expectation_moment(double exponent, double lambda_per_hour,
                                            double adoption) {
  if (exponent < 1.0) throw std::invalid_argument("exponent must be at least 1");
  double rho = rate_per_min_of(lambda_per_hour, adoption);
  return std::tgamma(exponent + 1.0) / std::pow(rho, exponent + 1.0);
}

double linear_error_oracle(double slope_per_min, double lambda_per_hour, double adoption,
                           std::int64_t draws, std::uint64_t seed) {
  if (slope_per_min < 0.0) throw std::invalid_argument("slope must be nonnegative");
  if (draws <= 0) throw std::invalid_argument("draws must be positive");
  double rho = rate_per_min_of(lambda_per_hour, adoption);
  Rng rng(seed);
  double sum = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) {
    double interval = rng.exponential(rho);
    sum += slope_per_min * interval * interval / 2.0;
  }
  return sum / static_cast<double>(draws);
}

double exponential_error_oracle(double exponent, double lambda_per_hour, double adoption,
                                std::int64_t draws, std::uint64_t seed) {
  if (exponent < 1.0) throw std::invalid_argument("exponent must be at least 1");
  if (draws <= 0) throw std::invalid_argument("draws must be positive");
  double rho = rate_per_min_of(lambda_per_hour, adoption);
  Rng rng(seed);
  double sum = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) {
    double interval = rng.exponential(rho);
    sum += std::pow(interval, exponent + 1.0) / (exponent + 1.0);
  }
  return sum / static_cast<double>(draws);
}

double expected_time_error(double p_true, double p_observed, const ParkingNetwork& net,
                           LotIndex lot) {
  if (!(p_true > 0.0 && p_true <= 1.0) || !(p_observed > 0.0 && p_observed <= 1.0)) {
    throw std::invalid_argument("probabilities must lie in (0,1]");
  }
  if (lot < 1 || lot > net.n_lots) throw std::invalid_argument("lot out of range");
  return net.wait_time * std::abs(1.0 / p_true - 1.0 / p_observed);
}

}  // namespace parksim
