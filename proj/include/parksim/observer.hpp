#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "parksim/core_model.hpp"

namespace parksim {

enum class TraceKind { Linear, Exponential, RandomWalk, Empirical };

struct TracePoint {
  double time = 0.0;  // minutes
  double p = 0.0;
};

// Piecewise-constant time series of a lot's true parking probability.
// Sample times are strictly increasing; the value holds until the next
// sample (and beyond the last).
struct ProbabilityTrace {
  std::vector<TracePoint> samples;
  TraceKind kind = TraceKind::Empirical;

  double start_time() const;
  double end_time() const;
  double initial_value() const;
  // Previous-sample lookup; the first value applies before start_time().
  double value_at(double t) const;
};

struct Observation {
  double time = 0.0;
  double p = 0.0;
};

// Hold-last view of a trace as seen through intermittent observations.
struct ObservationStream {
  std::vector<Observation> observations;
  double rate_per_min = 0.0;     // lambda * r after unit conversion
  double initial_estimate = 0.0; // estimate before the first observation

  double estimate_at(double t) const;
};

// Walk in exact +/-1 percentage-point steps per minute, reflected inward at
// 0 and 1. Emits minutes + 1 samples at t = 0..minutes. Deterministic.
ProbabilityTrace bounded_random_walk(double start, int minutes, std::uint64_t seed);

ProbabilityTrace constant_trace(double p, double t0, double t1);
ProbabilityTrace linear_trace(double p0, double slope_per_min, double t0, double t1,
                              double dt = 1.0);

// Connected-user sampling: observation instants drawn as a Poisson process
// with rate lambda*r over the trace's span, each reading the true value at
// that instant.
ObservationStream observe(const ProbabilityTrace& trace, double lambda_per_hour,
                          double adoption, std::uint64_t seed);

// Builds the hold-last stream from externally supplied observation instants
// (e.g. connected-user arrivals taken from transaction data).
ObservationStream stream_at_times(const ProbabilityTrace& trace,
                                  std::span<const double> times);

// Time-weighted mean absolute error between the trace and the stream's
// hold-last estimate over the trace's span.
double mae(const ProbabilityTrace& trace, const ObservationStream& stream);

// Expected integrated error per renewal interval for a linearly varying
// probability observed at Poisson rate lambda*r: m / (lambda*r)^2, rates
// converted to per-minute.
double linear_error_expectation(double slope_per_min, double lambda_per_hour,
                                double adoption);

// Same for p growing like t^b. The printed constant is b; the moment-based
// derivation gives Gamma(b+1). Both are exposed; they coincide for b = 1, 2.
double exponential_error_expectation(double exponent, double lambda_per_hour,
                                     double adoption);
double exponential_error_expectation_moment(double exponent, double lambda_per_hour,
                                            double adoption);

// Renewal-interval Monte Carlo companions: average the integrated error over
// draws of the interval length T ~ Exp(lambda*r).
double linear_error_oracle(double slope_per_min, double lambda_per_hour, double adoption,
                           std::int64_t draws, std::uint64_t seed);
double exponential_error_oracle(double exponent, double lambda_per_hour, double adoption,
                                std::int64_t draws, std::uint64_t seed);

// Gap in the patient expected time induced by believing p_observed instead
// of p_true at the given lot: t_wait * |1/p_true - 1/p_observed|.
double expected_time_error(double p_true, double p_observed, const ParkingNetwork& net,
                           LotIndex lot);

}  // namespace parksim
