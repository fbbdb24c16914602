#include "parksim/cascade.hpp"

#include <cmath>
#include <stdexcept>

#include "parksim/rng.hpp"

namespace parksim {

namespace {

void check_prob(double p, const char* what) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(what) + ": probabilities must lie in (0,1]");
}

void check_samples(std::int64_t samples) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
}

}  // namespace

double first_order(double p1, int n) {
  check_prob(p1, "first_order");
  if (n < 1) throw std::invalid_argument("first_order: n must be >= 1");
  return std::pow(p1, n);
}

double second_order_formula(std::span<const double> probs) {
  const std::size_t n = probs.size();
  if (n < 2) throw std::invalid_argument("second_order_formula: needs n >= 2");
  for (double p : probs) check_prob(p, "second_order_formula");

  double all = 1.0;
  for (double p : probs) all *= p;

  const double p1 = probs[0];
  double sum = 0.0;
  for (std::size_t k = 2; k <= n; ++k) {
    double tail = 1.0;  // empty product at k = n
    for (std::size_t l = k + 1; l <= n; ++l) tail *= probs[l - 1];
    sum += std::pow(p1, static_cast<double>(k)) * (1.0 - probs[k - 1]) * tail;
  }
  return all + sum;
}

double third_order(double p1, double p2, double p3) {
  check_prob(p1, "third_order");
  check_prob(p2, "third_order");
  check_prob(p3, "third_order");
  const double one_parks = 1.0 - p2 * p2 - (1.0 - p2) * (1.0 - p2);
  return p3 * (p2 * p1 + (1.0 - p2) * p1 * p1) +
         (1.0 - p3) * (p1 * p2 * p2 + p1 * p1 * one_parks +
                       (1.0 - p2) * (1.0 - p2) * p1 * p1 * p1);
}

double first_order_sim(double p1, int n, std::int64_t samples, std::uint64_t seed) {
  check_prob(p1, "first_order_sim");
  if (n < 1) throw std::invalid_argument("first_order_sim: n must be >= 1");
  check_samples(samples);
  Rng rng(seed);
  std::int64_t parked = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    bool ok = true;
    for (int i = 0; i < n; ++i) ok = rng.bernoulli(p1) && ok;
    if (ok) ++parked;
  }
  return static_cast<double>(parked) / static_cast<double>(samples);
}

double second_order_sim(std::span<const double> probs, std::int64_t samples,
                        std::uint64_t seed) {
  const std::size_t n = probs.size();
  if (n < 2) throw std::invalid_argument("second_order_sim: needs n >= 2");
  for (double p : probs) check_prob(p, "second_order_sim");
  check_samples(samples);

  const double p1 = probs[0];
  Rng rng(seed);
  std::int64_t parked = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    // Vehicles 2..n flip at their first-choice lots; failures divert to
    // lot 1 and flip there ahead of the ego.
    bool ego_ok = true;
    for (std::size_t k = 2; k <= n; ++k) {
      if (!rng.bernoulli(probs[k - 1])) {
        ego_ok = rng.bernoulli(p1) && ego_ok;
      }
    }
    ego_ok = rng.bernoulli(p1) && ego_ok;  // the ego's own flip, last
    if (ego_ok) ++parked;
  }
  return static_cast<double>(parked) / static_cast<double>(samples);
}

double third_order_sim(double p1, double p2, double p3, std::int64_t samples,
                       std::uint64_t seed) {
  check_prob(p1, "third_order_sim");
  check_prob(p2, "third_order_sim");
  check_prob(p3, "third_order_sim");
  check_samples(samples);

  Rng rng(seed);
  std::int64_t parked = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    int at_lot1 = 0;  // diverted arrivals reaching lot 1 before the ego
    // Vehicle 3: lot 3, then lot 2 on failure.
    const bool v3_diverts = !rng.bernoulli(p3);
    if (v3_diverts && !rng.bernoulli(p2)) ++at_lot1;
    // Vehicle 2: lot 2 (its own flip), then lot 1 on failure.
    if (!rng.bernoulli(p2)) ++at_lot1;
    bool ego_ok = rng.bernoulli(p1);
    for (int i = 0; i < at_lot1; ++i) ego_ok = rng.bernoulli(p1) && ego_ok;
    if (ego_ok) ++parked;
  }
  return static_cast<double>(parked) / static_cast<double>(samples);
}

}  // namespace parksim
