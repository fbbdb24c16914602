#pragma once

#include <span>
#include <string>
#include <vector>

#include "parksim/core_model.hpp"

namespace parksim {

// How the geometric-wait closed form charges t_wait. ChargeFirstFlip bills a
// wait for every attempt including the first (the printed formula);
// FreeFirstFlip bills waits only between attempts, which is what the reward
// table yields when a move-and-park leg succeeds immediately. The two differ
// by the constant t_wait for every lot, so argmins agree.
enum class WaitConvention { ChargeFirstFlip, FreeFirstFlip };

struct StrategyValue {
  double expected_time = 0.0;  // minutes
  LotIndex target = 0;
  WaitConvention convention = WaitConvention::ChargeFirstFlip;
};

// Expected time-to-arrive of driving to `lot` and waiting there until parked.
double patient_expected_time(const ParkingNetwork& net, LotIndex lot,
                             WaitConvention convention = WaitConvention::ChargeFirstFlip);

// Argmin of patient_expected_time over all lots; ties break to the lowest
// index.
StrategyValue best_patient_lot(const ParkingNetwork& net,
                               WaitConvention convention = WaitConvention::ChargeFirstFlip);

// A set of mutually close lots the vehicle can cycle through while waiting
// out the next attempt at each.
struct Cluster {
  std::vector<LotIndex> members;
  double cycle_time = 0.0;      // t_C: time to hop between cluster lots
  double to_cluster = 0.0;      // t_{0->C}
  double to_destination = 0.0;  // t_{C->D}
};

// Derives the cluster's times from the network as upper bounds (maxima over
// members / member pairs).
Cluster make_cluster(const ParkingNetwork& net, std::vector<LotIndex> members);

// Declared-cluster conditions: at least two members, valid indices, and every
// pairwise drive time strictly below t_wait. Empty result means valid.
std::vector<std::string> cluster_violations(const ParkingNetwork& net, const Cluster& cluster);

// Expected time of cycling through the cluster until any member admits
// parking, treating one cycle as a joint Bernoulli trial.
double cluster_expected_time(const Cluster& cluster, std::span<const double> member_probs,
                             double wait_time);

// Whether patient-at-i_star stays optimal against lot j under the current
// probabilities. Includes the t_wait factor the derivation requires.
bool sensitivity_holds(const ParkingNetwork& net, LotIndex i_star, LotIndex j);

struct ValueIterationResult {
  std::vector<double> value;     // value of (i, Unparked) at index i, 0..N
  std::vector<LotIndex> policy;  // greedy action at (i, Unparked)
  int sweeps = 0;
  double residual = 0.0;  // max Bellman residual at exit
};

// Exact solve of the static-probability stochastic shortest path by
// synchronous value iteration. Requires every p_i > 0 (all policies proper).
ValueIterationResult value_iteration(const ParkingNetwork& net, double tol = 1e-9);

// Max |V - TV| over unparked states for an arbitrary value table.
double bellman_residual(const ParkingNetwork& net, std::span<const double> value);

}  // namespace parksim
