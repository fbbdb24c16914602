#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "fixture_net.hpp"
#include "parksim/closed_form.hpp"
#include "parksim/rng.hpp"

using namespace parksim;

TEST_CASE("patient_expected_time under both wait conventions") {
  ParkingNetwork net = spec_network();
  CHECK(patient_expected_time(net, 1) == doctest::Approx(25.0));
  CHECK(patient_expected_time(net, 2) == doctest::Approx(10.0 + 8.0 + 5.0 / 0.9));
  CHECK(patient_expected_time(net, 1, WaitConvention::FreeFirstFlip) ==
        doctest::Approx(20.0));
  CHECK(patient_expected_time(net, 2, WaitConvention::FreeFirstFlip) ==
        doctest::Approx(13.0 + 5.0 / 0.9));
}

TEST_CASE("patient Monte Carlo matches the between-attempts convention") {
  // drive out, flip every wait period, walk at success; the first attempt
  // happens on arrival, so only failures buy waits
  ParkingNetwork net = spec_network();
  Rng rng(99);
  const int episodes = 20000;
  double sum = 0.0;
  for (int e = 0; e < episodes; ++e) {
    double t = net.drive(kOrigin, 1);
    while (!rng.bernoulli(net.prob(1))) t += net.wait_time;
    sum += t + net.walk(1);
  }
  double mc = sum / episodes;
  CHECK(mc == doctest::Approx(patient_expected_time(net, 1, WaitConvention::FreeFirstFlip))
                  .epsilon(0.02));
  CHECK(mc + net.wait_time == doctest::Approx(patient_expected_time(net, 1)).epsilon(0.02));
}

TEST_CASE("best_patient_lot prefers the roomier far lot and breaks ties low") {
  ParkingNetwork net = spec_network();
  StrategyValue best = best_patient_lot(net);
  CHECK(best.target == 2);
  CHECK(best.expected_time == doctest::Approx(10.0 + 8.0 + 5.0 / 0.9));

  // p2 = 5/7 makes lot 2 cost exactly 25 too; the tie goes to lot 1
  net.initial_probs[1] = 5.0 / 7.0;
  CHECK(best_patient_lot(net).target == 1);
}

TEST_CASE("make_cluster takes maxima and validates membership") {
  ParkingNetwork net = cluster_network();
  Cluster cluster = make_cluster(net, {1, 2});
  CHECK(cluster.to_cluster == 10.0);
  CHECK(cluster.to_destination == 5.0);
  CHECK(cluster.cycle_time == 1.0);
  CHECK(cluster_violations(net, cluster).empty());
  CHECK_THROWS_AS(make_cluster(net, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_cluster(net, {1, 3}), std::invalid_argument);
}

TEST_CASE("cluster_violations flags loose or tiny clusters") {
  ParkingNetwork spread = spec_network();  // pairwise hop 6 >= wait 5
  Cluster loose = make_cluster(spread, {1, 2});
  CHECK(!cluster_violations(spread, loose).empty());

  ParkingNetwork net = cluster_network();
  Cluster single = make_cluster(net, {1});
  CHECK(!cluster_violations(net, single).empty());
}

TEST_CASE("cycling two thin lots beats waiting at either") {
  ParkingNetwork net = cluster_network();
  Cluster cluster = make_cluster(net, {1, 2});
  std::vector<double> probs = {0.3, 0.3};
  double cycling = cluster_expected_time(cluster, probs, net.wait_time);
  CHECK(cycling == doctest::Approx(15.0 + 1.0 / 0.51));
  CHECK(best_patient_lot(net).expected_time == doctest::Approx(15.0 + 5.0 / 0.3));
  CHECK(cycling < best_patient_lot(net).expected_time);

  // a slow cycle is still bounded by the wait period
  Cluster slow = cluster;
  slow.cycle_time = 7.0;
  CHECK(cluster_expected_time(slow, probs, net.wait_time) ==
        doctest::Approx(15.0 + 5.0 / 0.51));

  std::vector<double> bad = {0.3};
  CHECK_THROWS_AS(cluster_expected_time(cluster, bad, net.wait_time),
                  std::invalid_argument);
}

TEST_CASE("sensitivity of patient-at-best against a rival lot") {
  ParkingNetwork net = spec_network();
  CHECK(sensitivity_holds(net, 2, 1));
  CHECK(!sensitivity_holds(net, 1, 2));
}

TEST_CASE("value_iteration solves the fixture exactly") {
  ParkingNetwork net = spec_network();
  ValueIterationResult vi = value_iteration(net);
  REQUIRE(vi.value.size() == 3);
  CHECK(vi.value[0] == doctest::Approx(-18.0 - 5.0 / 9.0));
  CHECK(vi.value[1] == doctest::Approx(-14.0 - 5.0 / 9.0));
  CHECK(vi.value[2] == doctest::Approx(-13.0 - 5.0 / 9.0));
  CHECK(vi.policy == std::vector<LotIndex>{2, 2, 2});
  CHECK(vi.residual < 1e-9);
  CHECK(vi.sweeps > 0);
  CHECK(bellman_residual(net, vi.value) < 1e-9);

  std::vector<double> zeros(3, 0.0);
  CHECK(bellman_residual(net, zeros) > 1.0);
}

TEST_CASE("value_iteration on a single sure lot") {
  ParkingNetwork net;
  net.n_lots = 1;
  net.wait_time = 5.0;
  net.drive_time = {{0, 10}, {10, 0}};
  net.walk_time = {5};
  net.initial_probs = {1.0};
  ValueIterationResult vi = value_iteration(net);
  CHECK(vi.value[0] == doctest::Approx(-15.0));
  CHECK(vi.policy[0] == 1);
}

TEST_CASE("value_iteration alternates across a tight cluster") {
  ValueIterationResult vi = value_iteration(cluster_network());
  CHECK(vi.policy[1] == 2);
  CHECK(vi.policy[2] == 1);
  CHECK(vi.value[1] == doctest::Approx(-2.5 / 0.3));
}

TEST_CASE("value_iteration rejects broken inputs") {
  ParkingNetwork net = spec_network();
  net.initial_probs[0] = 0.0;
  CHECK_THROWS_AS(value_iteration(net), std::invalid_argument);
  net = spec_network();
  CHECK_THROWS_AS(value_iteration(net, 0.0), std::invalid_argument);
}
