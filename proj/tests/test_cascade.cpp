#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "parksim/cascade.hpp"

using namespace parksim;

namespace {

double standard_error(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace

TEST_CASE("first_order compounds same-lot flips") {
  CHECK(first_order(0.5, 1) == doctest::Approx(0.5));
  CHECK(first_order(0.5, 3) == doctest::Approx(0.125));
  CHECK(first_order(1.0, 7) == doctest::Approx(1.0));
  CHECK(first_order(0.9, 2) == doctest::Approx(0.81));
  // more competitors never help
  CHECK(first_order(0.7, 4) < first_order(0.7, 3));
  CHECK_THROWS_AS(first_order(0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(first_order(0.0, 2), std::invalid_argument);
}

TEST_CASE("second_order_formula on two vehicles") {
  std::vector<double> even = {0.5, 0.5};
  CHECK(second_order_formula(even) == doctest::Approx(0.375));

  // a hopeless second lot sends the rival straight at the ego
  std::vector<double> hopeless = {0.5, 1e-6};
  CHECK(second_order_formula(hopeless) == doctest::Approx(0.25).epsilon(1e-4));

  // a sure second lot absorbs the rival entirely
  std::vector<double> sure = {0.5, 1.0};
  CHECK(second_order_formula(sure) == doctest::Approx(0.5));

  // diverted competition hurts less than a same-lot pile-up
  CHECK(second_order_formula(even) > first_order(0.5, 2));

  std::vector<double> single = {0.5};
  CHECK_THROWS_AS(second_order_formula(single), std::invalid_argument);
}

TEST_CASE("third_order knock-on chain") {
  CHECK(third_order(0.5, 0.5, 0.5) == doctest::Approx(0.328125));
  CHECK(third_order(0.5, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK(third_order(0.5, 0.5, 0.5) > first_order(0.5, 3));
  CHECK(third_order(0.5, 0.5, 0.5) < 0.5);
}

TEST_CASE("behavioral oracles track the closed forms") {
  const std::int64_t n = 200000;

  double f = first_order(0.5, 3);
  double fs = first_order_sim(0.5, 3, n, 1001);
  CHECK(std::abs(f - fs) < 4.0 * standard_error(f, static_cast<double>(n)));

  std::vector<double> pair = {0.3, 0.8};
  double s = second_order_formula(pair);
  double ss = second_order_sim(pair, n, 1002);
  CHECK(std::abs(s - ss) < 4.0 * standard_error(s, static_cast<double>(n)));

  double t = third_order(0.4, 0.6, 0.7);
  double ts = third_order_sim(0.4, 0.6, 0.7, n, 1003);
  CHECK(std::abs(t - ts) < 4.0 * standard_error(t, static_cast<double>(n)));
}

TEST_CASE("oracles are seed-deterministic") {
  CHECK(first_order_sim(0.5, 2, 1000, 5) == first_order_sim(0.5, 2, 1000, 5));
  CHECK(third_order_sim(0.5, 0.5, 0.5, 1000, 5) ==
        third_order_sim(0.5, 0.5, 0.5, 1000, 5));
}

TEST_CASE("longer second-order chains stay probabilities; agreement unasserted") {
  // for three or more vehicles the closed form and the behavioral oracle are
  // not known to coincide; both must still be valid probabilities
  std::vector<double> triple = {0.5, 0.5, 0.5};
  double formula = second_order_formula(triple);
  double sim = second_order_sim(triple, 50000, 9);
  CHECK(formula > 0.0);
  CHECK(formula <= 1.0);
  CHECK(sim > 0.0);
  CHECK(sim <= 1.0);
}
