#pragma once

#include <cstdint>
#include <span>

namespace parksim {

enum class CascadeCase { FirstOrder, SecondOrder, ThirdOrder };

// Effective ego probability when n vehicles in total (the ego last) flip at
// the same lot within one wait period: p1^n.
double first_order(double p1, int n);

// Effective ego probability at lot 1 when vehicles 2..n flip first at their
// own lots and divert to lot 1 on failure. probs[0] is p1. Requires n >= 2.
// The empty tail product at k = n is 1.
double second_order_formula(std::span<const double> probs);

// Effective ego probability at lot 1 under the two-vehicle knock-on chain:
// vehicle 3 tries lot 3 then lot 2, vehicle 2 tries lot 2 then lot 1, the ego
// arrives last at lot 1.
double third_order(double p1, double p2, double p3);

// Behavioral Monte Carlo oracles for the closed forms above. Each fixes one
// concrete arrival ordering: non-ego vehicles flip at their first-choice lots
// independently, failures divert down the chain, and the ego parks iff its
// own flip and every earlier flip at the ego's lot succeed. Deterministic
// given the seed.
double first_order_sim(double p1, int n, std::int64_t samples, std::uint64_t seed);
double second_order_sim(std::span<const double> probs, std::int64_t samples,
                        std::uint64_t seed);
double third_order_sim(double p1, double p2, double p3, std::int64_t samples,
                       std::uint64_t seed);

}  // namespace parksim
