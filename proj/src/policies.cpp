#include "parksim/policies.hpp"

#include <limits>
#include <stdexcept>

namespace parksim {
namespace {

double travel_time(const ParkingNetwork& net, LotIndex from, LotIndex to) {
  return from == to ? net.wait_time : net.drive(from, to);
}

}  // namespace

double Belief::prob(LotIndex j) const {
  if (j < 1 || j > static_cast<LotIndex>(probs.size())) {
    throw std::invalid_argument("belief lot index out of range");
  }
  return probs[static_cast<std::size_t>(j - 1)];
}

Belief Belief::from_network(const ParkingNetwork& net) {
  Belief belief;
  belief.probs = net.initial_probs;
  belief.source = BeliefSource::OracleTrue;
  return belief;
}

std::string PolicySpec::base_name() const {
  switch (kind) {
    case PolicyKind::PA:
      return "pa" + std::to_string(steps);
    case PolicyKind::BaselinePatient:
      return "baseline-patient";
    case PolicyKind::BaselineImpatient:
      return "baseline-impatient";
  }
  throw std::logic_error("unknown policy kind");
}

std::string PolicySpec::name() const {
  std::string base = base_name();
  return oracle ? base + "-oracle" : base;
}

PolicySpec parse_policy(const std::string& token) {
  PolicySpec spec;
  std::string body = token;
  const std::string suffix = "-oracle";
  if (body.size() > suffix.size() &&
      body.compare(body.size() - suffix.size(), suffix.size(), suffix) == 0) {
    spec.oracle = true;
    body.erase(body.size() - suffix.size());
  }
  if (body == "pa1" || body == "pa2" || body == "pa3") {
    spec.kind = PolicyKind::PA;
    spec.steps = body[2] - '0';
  } else if (body == "baseline-patient") {
    spec.kind = PolicyKind::BaselinePatient;
  } else if (body == "baseline-impatient") {
    spec.kind = PolicyKind::BaselineImpatient;
  } else {
    throw std::invalid_argument("unknown policy '" + token + "'");
  }
  return spec;
}

double pa_cost(int steps, LotIndex from, LotIndex to, const ParkingNetwork& net,
               const Belief& belief) {
  if (steps < 1 || steps > 3) throw std::invalid_argument("lookahead depth must be 1..3");
  if (to < 1 || to > net.n_lots) throw std::invalid_argument("target lot out of range");
  if (from < 0 || from > net.n_lots) throw std::invalid_argument("from out of range");
  double p = belief.prob(to);
  if (!(p > 0.0)) throw std::invalid_argument("believed probability must be positive");
  double travel = travel_time(net, from, to);
  if (steps == 1) return travel / p + net.walk(to);
  double best_next = std::numeric_limits<double>::infinity();
  for (LotIndex k = 1; k <= net.n_lots; ++k) {
    best_next = std::min(best_next, pa_cost(steps - 1, to, k, net, belief));
  }
  return travel + p * net.walk(to) + (1.0 - p) * best_next;
}

LotIndex decide(const PolicySpec& spec, const VehicleState& state,
                const ParkingNetwork& net, const Belief& belief) {
  if (state.status == ParkStatus::Parked) throw std::invalid_argument("vehicle already parked");
  switch (spec.kind) {
    case PolicyKind::PA: {
      LotIndex best = 1;
      double best_cost = pa_cost(spec.steps, state.location, 1, net, belief);
      for (LotIndex j = 2; j <= net.n_lots; ++j) {
        double cost = pa_cost(spec.steps, state.location, j, net, belief);
        if (cost < best_cost) {
          best_cost = cost;
          best = j;
        }
      }
      return best;
    }
    case PolicyKind::BaselinePatient: {
      LotIndex best = 1;
      for (LotIndex j = 2; j <= net.n_lots; ++j) {
        if (net.walk(j) < net.walk(best)) best = j;
      }
      return best;
    }
    case PolicyKind::BaselineImpatient: {
      std::vector<LotIndex> candidates;
      for (LotIndex j = 1; j <= net.n_lots; ++j) {
        if (!state.visited.count(j)) candidates.push_back(j);
      }
      if (candidates.empty()) {
        // search cycle reset
        for (LotIndex j = 1; j <= net.n_lots; ++j) {
          if (spec.reset_excludes_current && j == state.location && net.n_lots > 1) continue;
          candidates.push_back(j);
        }
      }
      LotIndex best = candidates.front();
      for (LotIndex j : candidates) {
        if (net.drive(state.location, j) < net.drive(state.location, best)) best = j;
      }
      return best;
    }
  }
  throw std::logic_error("unknown policy kind");
}

}  // namespace parksim
