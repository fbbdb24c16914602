#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fixture_net.hpp"
#include "parksim/ingest.hpp"
#include "parksim/observer.hpp"

using namespace parksim;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("bounded_random_walk steps by exact hundredths and reflects inward") {
  ProbabilityTrace walk = bounded_random_walk(0.5, 300, 7);
  REQUIRE(walk.samples.size() == 301);
  CHECK(walk.kind == TraceKind::RandomWalk);
  CHECK(walk.samples.front().time == 0.0);
  CHECK(walk.samples.back().time == 300.0);
  for (std::size_t i = 0; i < walk.samples.size(); ++i) {
    double p = walk.samples[i].p;
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    double hundredths = p * 100.0;
    CHECK(std::abs(hundredths - std::llround(hundredths)) < 1e-9);
    if (i > 0) {
      CHECK(std::abs(std::abs(p - walk.samples[i - 1].p) - 0.01) < 1e-9);
    }
  }

  // boundary always steps back toward the interior
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    CHECK(bounded_random_walk(1.0, 1, seed).samples[1].p == doctest::Approx(0.99));
    CHECK(bounded_random_walk(0.0, 1, seed).samples[1].p == doctest::Approx(0.01));
  }

  CHECK_THROWS_AS(bounded_random_walk(1.5, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(bounded_random_walk(0.5, -1, 1), std::invalid_argument);
}

TEST_CASE("bounded_random_walk is seed-deterministic") {
  ProbabilityTrace a = bounded_random_walk(0.5, 200, 11);
  ProbabilityTrace b = bounded_random_walk(0.5, 200, 11);
  ProbabilityTrace c = bounded_random_walk(0.5, 200, 12);
  REQUIRE(a.samples.size() == b.samples.size());
  bool all_equal_b = true, any_diff_c = false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    all_equal_b = all_equal_b && a.samples[i].p == b.samples[i].p;
    any_diff_c = any_diff_c || a.samples[i].p != c.samples[i].p;
  }
  CHECK(all_equal_b);
  CHECK(any_diff_c);
}

TEST_CASE("golden walk file pins the generator and the csv format") {
  ProbabilityTrace walk = bounded_random_walk(0.5, 720, 7);
  auto tmp = std::filesystem::temp_directory_path() / "parksim-walk-regen.csv";
  write_trace_csv(tmp.string(), walk);
  std::string golden = slurp(std::string(PARKSIM_FIXTURE_DIR) + "/walk-seed7.csv");
  std::string regen = slurp(tmp.string());
  CHECK(golden == regen);
  std::filesystem::remove(tmp);
}

TEST_CASE("trace value_at holds the previous sample") {
  ProbabilityTrace trace;
  trace.samples = {{0.0, 0.5}, {10.0, 0.7}, {20.0, 0.2}};
  CHECK(trace.value_at(-5.0) == 0.5);
  CHECK(trace.value_at(0.0) == 0.5);
  CHECK(trace.value_at(9.999) == 0.5);
  CHECK(trace.value_at(10.0) == 0.7);
  CHECK(trace.value_at(19.0) == 0.7);
  CHECK(trace.value_at(25.0) == 0.2);
  CHECK(trace.start_time() == 0.0);
  CHECK(trace.end_time() == 20.0);
  CHECK(trace.initial_value() == 0.5);
}

TEST_CASE("constant and linear trace helpers") {
  ProbabilityTrace flat = constant_trace(0.6, 100.0, 200.0);
  CHECK(flat.value_at(150.0) == 0.6);
  CHECK(flat.start_time() == 100.0);
  CHECK(flat.end_time() == 200.0);

  ProbabilityTrace ramp = linear_trace(0.1, 0.01, 0.0, 50.0);
  CHECK(ramp.value_at(0.0) == doctest::Approx(0.1));
  CHECK(ramp.value_at(30.0) == doctest::Approx(0.4));
  CHECK(ramp.value_at(1e9) <= 1.0);

  CHECK_THROWS_AS(constant_trace(1.5, 0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(constant_trace(0.5, 10.0, 10.0), std::invalid_argument);
}

TEST_CASE("observe reads the true value at Poisson instants") {
  ProbabilityTrace walk = bounded_random_walk(0.5, 720, 3);
  ObservationStream stream = observe(walk, 20.0, 0.2, 99);

  // rate 4/h over 12h: expect around 48 observations
  CHECK(stream.observations.size() > 20);
  CHECK(stream.observations.size() < 80);
  CHECK(stream.rate_per_min == doctest::Approx(20.0 * 0.2 / 60.0));
  CHECK(stream.initial_estimate == doctest::Approx(walk.initial_value()));

  double prev = walk.start_time();
  for (const auto& ob : stream.observations) {
    CHECK(ob.time > prev);
    CHECK(ob.time <= walk.end_time());
    CHECK(ob.p == walk.value_at(ob.time));
    prev = ob.time;
  }

  CHECK_THROWS_AS(observe(walk, 0.0, 0.2, 1), std::invalid_argument);
}

TEST_CASE("observation rate depends only on the product lambda*r") {
  ProbabilityTrace walk = bounded_random_walk(0.5, 720, 3);
  ObservationStream a = observe(walk, 20.0, 0.2, 7);
  ObservationStream b = observe(walk, 10.0, 0.4, 7);
  REQUIRE(a.observations.size() == b.observations.size());
  for (std::size_t i = 0; i < a.observations.size(); ++i) {
    CHECK(a.observations[i].time == b.observations[i].time);
    CHECK(a.observations[i].p == b.observations[i].p);
  }
}

TEST_CASE("stream estimate holds the last observation") {
  ObservationStream stream;
  stream.initial_estimate = 0.5;
  stream.observations = {{10.0, 0.7}, {20.0, 0.3}};
  CHECK(stream.estimate_at(5.0) == 0.5);
  CHECK(stream.estimate_at(10.0) == 0.7);
  CHECK(stream.estimate_at(19.0) == 0.7);
  CHECK(stream.estimate_at(1000.0) == 0.3);
}

TEST_CASE("stream_at_times samples the trace at the given instants") {
  ProbabilityTrace trace;
  trace.samples = {{0.0, 0.5}, {10.0, 0.7}, {20.0, 0.2}};
  std::vector<double> times = {15.0, 5.0};  // unsorted on purpose
  ObservationStream stream = stream_at_times(trace, times);
  REQUIRE(stream.observations.size() == 2);
  CHECK(stream.observations[0].time == 5.0);
  CHECK(stream.observations[0].p == 0.5);
  CHECK(stream.observations[1].time == 15.0);
  CHECK(stream.observations[1].p == 0.7);
}

TEST_CASE("mae integrates the hold-last gap exactly") {
  ProbabilityTrace trace;
  trace.samples = {{0.0, 0.5}, {10.0, 0.7}, {20.0, 0.7}};

  SUBCASE("perfect stream gives zero error") {
    std::vector<double> times = {0.0, 10.0};
    ObservationStream stream = stream_at_times(trace, times);
    CHECK(mae(trace, stream) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("never observing leaves the initial estimate everywhere") {
    ObservationStream stream;
    stream.initial_estimate = 0.5;
    // wrong by 0.2 on the second half of a 20 minute span
    CHECK(mae(trace, stream) == doctest::Approx(0.1));
  }

  SUBCASE("one late observation halves the miss window") {
    ObservationStream stream;
    stream.initial_estimate = 0.5;
    stream.observations = {{15.0, 0.7}};
    CHECK(mae(trace, stream) == doctest::Approx(0.2 * 5.0 / 20.0));
  }

  SUBCASE("redundant observations do not move the integral") {
    ObservationStream one;
    one.initial_estimate = 0.5;
    one.observations = {{10.0, 0.7}};
    ObservationStream two = one;
    two.observations.push_back({13.0, 0.7});
    CHECK(mae(trace, one) == doctest::Approx(mae(trace, two)));
  }
}

TEST_CASE("denser connected-user coverage lowers the mean error") {
  double sparse_sum = 0.0, dense_sum = 0.0;
  const int seeds = 30;
  for (int s = 0; s < seeds; ++s) {
    ProbabilityTrace walk = bounded_random_walk(0.5, 720, 1000 + s);
    sparse_sum += mae(walk, observe(walk, 20.0, 0.05, 2000 + s));
    dense_sum += mae(walk, observe(walk, 20.0, 0.5, 2000 + s));
  }
  CHECK(dense_sum / seeds < sparse_sum / seeds);
}

TEST_CASE("linear error expectation and oracle") {
  // slope 1/min observed at 2/min: m / rho^2
  CHECK(linear_error_expectation(1.0, 120.0, 1.0) == doctest::Approx(0.25));
  CHECK(linear_error_expectation(0.5, 60.0, 1.0) == doctest::Approx(0.5));
  double oracle = linear_error_oracle(1.0, 120.0, 1.0, 200000, 31);
  CHECK(oracle == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("power-growth error expectation: printed and moment constants") {
  // b = 1 and b = 2 coincide because Gamma(b+1) = b there
  CHECK(exponential_error_expectation(1.0, 120.0, 1.0) == doctest::Approx(0.25));
  CHECK(exponential_error_expectation_moment(1.0, 120.0, 1.0) == doctest::Approx(0.25));
  CHECK(exponential_error_expectation(2.0, 60.0, 1.0) == doctest::Approx(2.0));
  CHECK(exponential_error_expectation_moment(2.0, 60.0, 1.0) == doctest::Approx(2.0));

  // b = 3 splits them: 3 vs Gamma(4) = 6; the renewal oracle sides with 6
  CHECK(exponential_error_expectation(3.0, 60.0, 1.0) == doctest::Approx(3.0));
  CHECK(exponential_error_expectation_moment(3.0, 60.0, 1.0) == doctest::Approx(6.0));
  double oracle = exponential_error_oracle(3.0, 60.0, 1.0, 400000, 33);
  CHECK(oracle == doctest::Approx(6.0).epsilon(0.05));
}

TEST_CASE("believing the wrong probability costs wait time") {
  ParkingNetwork net = spec_network();
  CHECK(expected_time_error(0.45, 0.5, net, 1) ==
        doctest::Approx(5.0 * (1.0 / 0.45 - 1.0 / 0.5)));
  CHECK(expected_time_error(0.5, 0.25, net, 1) == doctest::Approx(10.0));
  CHECK(expected_time_error(0.5, 0.5, net, 2) == 0.0);
  CHECK_THROWS_AS(expected_time_error(0.0, 0.5, net, 1), std::invalid_argument);
  CHECK_THROWS_AS(expected_time_error(0.5, 0.5, net, 9), std::invalid_argument);
}
