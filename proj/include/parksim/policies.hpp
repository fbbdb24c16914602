#pragma once

#include <string>
#include <vector>

#include "parksim/core_model.hpp"

namespace parksim {

enum class BeliefSource { Observed, OracleTrue };

// Believed per-lot parking probabilities at one decision epoch.
struct Belief {
  std::vector<double> probs;  // probs[j-1] for lot j
  BeliefSource source = BeliefSource::Observed;

  double prob(LotIndex j) const;
  static Belief from_network(const ParkingNetwork& net);
};

enum class PolicyKind { PA, BaselinePatient, BaselineImpatient };

struct PolicySpec {
  PolicyKind kind = PolicyKind::PA;
  int steps = 1;              // PA lookahead depth, 1..3
  double cap_minutes = 60.0;  // patient search cap
  bool oracle = false;        // belief bound to the true trace values
  bool reset_excludes_current = true;

  // pa1, pa2-oracle, baseline-patient, ...
  std::string name() const;
  // name without the -oracle suffix; oracle twins share RNG streams
  std::string base_name() const;
};

// Accepts pa1|pa2|pa3|baseline-patient|baseline-impatient, optionally with
// an -oracle suffix.
PolicySpec parse_policy(const std::string& token);

// Risk-adjusted time cost of attempting `to` from `from`. One step charges
// t(i,j)/p_j plus the walk; deeper steps recurse on the failure branch.
// t(i,i) = t_wait.
double pa_cost(int steps, LotIndex from, LotIndex to, const ParkingNetwork& net,
               const Belief& belief);

// Picks the next lot to attempt. Ties break to the lowest index.
LotIndex decide(const PolicySpec& spec, const VehicleState& state,
                const ParkingNetwork& net, const Belief& belief);

}  // namespace parksim
