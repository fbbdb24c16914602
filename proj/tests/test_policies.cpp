#include <doctest.h>

#include <stdexcept>

#include "fixture_net.hpp"
#include "parksim/policies.hpp"

using namespace parksim;

TEST_CASE("belief wraps per-lot probabilities") {
  ParkingNetwork net = spec_network();
  Belief belief = Belief::from_network(net);
  CHECK(belief.prob(1) == 0.5);
  CHECK(belief.prob(2) == 0.9);
  CHECK(belief.source == BeliefSource::OracleTrue);
  CHECK_THROWS_AS(belief.prob(3), std::invalid_argument);
}

TEST_CASE("policy specs print and parse round trip") {
  const char* tokens[] = {"pa1",         "pa2",       "pa3",
                          "pa1-oracle",  "pa3-oracle", "baseline-patient",
                          "baseline-impatient", "baseline-patient-oracle"};
  for (const char* token : tokens) {
    PolicySpec spec = parse_policy(token);
    CHECK(spec.name() == token);
  }
  CHECK(parse_policy("pa2").steps == 2);
  CHECK(parse_policy("pa2-oracle").oracle);
  CHECK(parse_policy("pa2-oracle").base_name() == "pa2");
  CHECK(parse_policy("baseline-patient").kind == PolicyKind::BaselinePatient);
  CHECK(parse_policy("baseline-impatient").kind == PolicyKind::BaselineImpatient);
  CHECK_THROWS_AS(parse_policy("pa4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy(""), std::invalid_argument);
}

TEST_CASE("pa_cost one step: risk-scaled travel plus the walk") {
  ParkingNetwork net = spec_network();
  Belief belief = Belief::from_network(net);
  CHECK(pa_cost(1, kOrigin, 1, net, belief) == doctest::Approx(25.0));
  CHECK(pa_cost(1, kOrigin, 2, net, belief) == doctest::Approx(10.0 / 0.9 + 8.0));
  // staying put is charged one wait period
  CHECK(pa_cost(1, 1, 1, net, belief) == doctest::Approx(15.0));
  CHECK(pa_cost(1, 1, 2, net, belief) == doctest::Approx(6.0 / 0.9 + 8.0));
}

TEST_CASE("pa_cost deeper steps recurse on the failure branch") {
  ParkingNetwork net = spec_network();
  Belief belief = Belief::from_network(net);

  // c2(i,j) = t(i,j) + p_j walk_j + (1-p_j) min_k c1(j,k)
  double c1_12 = 6.0 / 0.9 + 8.0;   // 14.666...
  double c1_22 = 5.0 / 0.9 + 8.0;   // 13.555...
  CHECK(pa_cost(2, kOrigin, 1, net, belief) ==
        doctest::Approx(10.0 + 0.5 * 5.0 + 0.5 * c1_12));
  CHECK(pa_cost(2, kOrigin, 2, net, belief) ==
        doctest::Approx(10.0 + 0.9 * 8.0 + 0.1 * c1_22));
  CHECK(pa_cost(2, 1, 1, net, belief) == doctest::Approx(5.0 + 2.5 + 0.5 * c1_12));
  CHECK(pa_cost(2, 1, 2, net, belief) == doctest::Approx(6.0 + 7.2 + 0.1 * c1_22));

  // waiting at the roomy lot is a fixed point of the recursion
  CHECK(pa_cost(2, 2, 2, net, belief) == doctest::Approx(c1_22));
  CHECK(pa_cost(3, 2, 2, net, belief) == doctest::Approx(c1_22));

  double c2_11 = 5.0 + 2.5 + 0.5 * c1_12;
  double c2_12 = 6.0 + 7.2 + 0.1 * c1_22;
  CHECK(pa_cost(3, kOrigin, 1, net, belief) ==
        doctest::Approx(10.0 + 2.5 + 0.5 * std::min(c2_11, c2_12)));

  CHECK_THROWS_AS(pa_cost(0, kOrigin, 1, net, belief), std::invalid_argument);
  CHECK_THROWS_AS(pa_cost(4, kOrigin, 1, net, belief), std::invalid_argument);
  CHECK_THROWS_AS(pa_cost(1, kOrigin, 3, net, belief), std::invalid_argument);

  Belief zeroed = belief;
  zeroed.probs[0] = 0.0;
  CHECK_THROWS_AS(pa_cost(1, kOrigin, 1, net, zeroed), std::invalid_argument);
}

TEST_CASE("sure probabilities collapse every depth to drive plus walk") {
  ParkingNetwork net = spec_network();
  Belief sure;
  sure.probs = {1.0, 1.0};
  for (int steps = 1; steps <= 3; ++steps) {
    CHECK(pa_cost(steps, kOrigin, 1, net, sure) == doctest::Approx(15.0));
    CHECK(pa_cost(steps, kOrigin, 2, net, sure) == doctest::Approx(18.0));
  }
}

TEST_CASE("PA decide takes the cheapest lot, ties to the lowest index") {
  ParkingNetwork net = spec_network();
  Belief belief = Belief::from_network(net);
  VehicleState state;

  for (int steps = 1; steps <= 3; ++steps) {
    PolicySpec spec = parse_policy("pa" + std::to_string(steps));
    CHECK(decide(spec, state, net, belief) == 2);
  }

  // identical lots: lowest index wins at every depth
  ParkingNetwork twin = spec_network();
  twin.walk_time = {5, 5};
  twin.drive_time = {{0, 10, 10}, {10, 0, 6}, {10, 6, 0}};
  Belief even;
  even.probs = {0.5, 0.5};
  for (int steps = 1; steps <= 3; ++steps) {
    PolicySpec spec = parse_policy("pa" + std::to_string(steps));
    CHECK(decide(spec, state, twin, even) == 1);
  }
}

TEST_CASE("patient baseline heads for the shortest walk and stays") {
  ParkingNetwork net = spec_network();
  Belief belief = Belief::from_network(net);
  PolicySpec patient = parse_policy("baseline-patient");

  VehicleState at_origin;
  CHECK(decide(patient, at_origin, net, belief) == 1);

  VehicleState waiting;
  waiting.location = 1;
  waiting.visited = {1};
  CHECK(decide(patient, waiting, net, belief) == 1);
}

TEST_CASE("impatient baseline drives to the nearest unvisited lot") {
  ParkingNetwork net;
  net.n_lots = 3;
  net.wait_time = 5.0;
  net.drive_time = {{0, 9, 8, 7}, {9, 0, 6, 4}, {8, 6, 0, 3}, {7, 4, 3, 0}};
  net.walk_time = {2, 2, 2};
  net.initial_probs = {0.5, 0.5, 0.5};
  Belief belief = Belief::from_network(net);
  PolicySpec impatient = parse_policy("baseline-impatient");

  VehicleState state;
  CHECK(decide(impatient, state, net, belief) == 3);  // drives 9/8/7

  state.location = 1;
  state.visited = {1};
  CHECK(decide(impatient, state, net, belief) == 3);  // drives 6/4 to go

  state.location = 3;
  state.visited = {1, 3};
  CHECK(decide(impatient, state, net, belief) == 2);

  // the full-cycle fallback restarts everywhere but the lot it just failed at
  state.location = 2;
  state.visited = {1, 2, 3};
  CHECK(decide(impatient, state, net, belief) == 3);  // nearest of {1, 3}

  PolicySpec sticky = impatient;
  sticky.reset_excludes_current = false;
  VehicleState stuck;
  stuck.location = 2;
  stuck.visited = {1, 2, 3};
  // staying is free to "reach", so the current lot wins the reset
  CHECK(decide(sticky, stuck, net, belief) == 2);
}

TEST_CASE("decide refuses a parked vehicle") {
  ParkingNetwork net = spec_network();
  Belief belief = Belief::from_network(net);
  VehicleState parked;
  parked.status = ParkStatus::Parked;
  CHECK_THROWS_AS(decide(parse_policy("pa1"), parked, net, belief),
                  std::invalid_argument);
}
