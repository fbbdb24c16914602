#include "parksim/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace parksim {

double patient_expected_time(const ParkingNetwork& net, LotIndex lot,
                             WaitConvention convention) {
  const double p = net.prob(lot);
  if (p <= 0.0)
    throw std::invalid_argument("patient_expected_time: p must be > 0");
  const double base = net.drive(kOrigin, lot) + net.walk(lot);
  const double flips = convention == WaitConvention::ChargeFirstFlip
                           ? 1.0 / p          // every attempt billed
                           : 1.0 / p - 1.0;   // only waits between attempts
  return base + net.wait_time * flips;
}

StrategyValue best_patient_lot(const ParkingNetwork& net, WaitConvention convention) {
  net.validate();
  StrategyValue best;
  best.convention = convention;
  best.expected_time = std::numeric_limits<double>::infinity();
  for (LotIndex lot = 1; lot <= net.n_lots; ++lot) {
    const double t = patient_expected_time(net, lot, convention);
    if (t < best.expected_time) {  // strict: ties keep the lowest index
      best.expected_time = t;
      best.target = lot;
    }
  }
  return best;
}

Cluster make_cluster(const ParkingNetwork& net, std::vector<LotIndex> members) {
  if (members.empty()) throw std::invalid_argument("make_cluster: empty member list");
  Cluster c;
  c.members = std::move(members);
  std::sort(c.members.begin(), c.members.end());
  c.members.erase(std::unique(c.members.begin(), c.members.end()), c.members.end());
  for (LotIndex i : c.members) {
    if (i < 1 || i > net.n_lots)
      throw std::invalid_argument("make_cluster: member index out of range");
  }
  for (LotIndex i : c.members) {
    c.to_cluster = std::max(c.to_cluster, net.drive(kOrigin, i));
    c.to_destination = std::max(c.to_destination, net.walk(i));
    for (LotIndex j : c.members)
      if (i != j) c.cycle_time = std::max(c.cycle_time, net.drive(i, j));
  }
  return c;
}

std::vector<std::string> cluster_violations(const ParkingNetwork& net, const Cluster& cluster) {
  std::vector<std::string> v;
  if (cluster.members.size() < 2) v.push_back("cluster must declare at least two lots");
  for (LotIndex i : cluster.members)
    if (i < 1 || i > net.n_lots) v.push_back("member " + std::to_string(i) + " is not a lot");
  for (LotIndex i : cluster.members)
    for (LotIndex j : cluster.members) {
      if (i == j || i < 1 || j < 1 || i > net.n_lots || j > net.n_lots) continue;
      if (net.drive(i, j) >= net.wait_time)
        v.push_back("drive " + std::to_string(i) + "->" + std::to_string(j) +
                    " is not below wait_time");
    }
  return v;
}

double cluster_expected_time(const Cluster& cluster, std::span<const double> member_probs,
                             double wait_time) {
  if (cluster.members.empty())
    throw std::invalid_argument("cluster_expected_time: empty cluster");
  if (member_probs.size() != cluster.members.size())
    throw std::invalid_argument("cluster_expected_time: one probability per member required");
  double miss = 1.0;
  for (double p : member_probs) {
    if (p <= 0.0 || p > 1.0)
      throw std::invalid_argument("cluster_expected_time: probabilities must lie in (0,1]");
    miss *= 1.0 - p;
  }
  const double joint = 1.0 - miss;  // parking available at any member this cycle
  const double per_cycle = std::min(wait_time, cluster.cycle_time);
  return cluster.to_cluster + cluster.to_destination + per_cycle / joint;
}

bool sensitivity_holds(const ParkingNetwork& net, LotIndex i_star, LotIndex j) {
  if (i_star == j) return true;
  const double lhs = net.wait_time * (1.0 / net.prob(j) - 1.0 / net.prob(i_star));
  const double rhs = (net.drive(kOrigin, i_star) - net.drive(kOrigin, j)) +
                     (net.walk(i_star) - net.walk(j));
  return lhs >= rhs;
}

namespace {

// One Bellman backup for unparked state i: the best action value over lots.
// Action j succeeds with p_j; failure lands in (j, Unparked).
double backup(const ParkingNetwork& net, std::span<const double> value, LotIndex i,
              LotIndex* argmax) {
  double best = -std::numeric_limits<double>::infinity();
  LotIndex best_lot = 0;
  for (LotIndex j = 1; j <= net.n_lots; ++j) {
    const double travel = (i == j) ? net.wait_time : net.drive(i, j);
    const double p = net.prob(j);
    const double q = p * (-travel - net.walk(j)) +
                     (1.0 - p) * (-travel + value[static_cast<std::size_t>(j)]);
    if (q > best) {
      best = q;
      best_lot = j;
    }
  }
  if (argmax) *argmax = best_lot;
  return best;
}

}  // namespace

ValueIterationResult value_iteration(const ParkingNetwork& net, double tol) {
  net.validate();
  if (tol <= 0.0) throw std::invalid_argument("value_iteration: tol must be > 0");

  const std::size_t n_states = static_cast<std::size_t>(net.n_lots) + 1;
  ValueIterationResult out;
  out.value.assign(n_states, 0.0);

  std::vector<double> next(n_states, 0.0);
  const int max_sweeps = 1000000;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double delta = 0.0;
    for (LotIndex i = 0; i <= net.n_lots; ++i) {
      const std::size_t s = static_cast<std::size_t>(i);
      next[s] = backup(net, out.value, i, nullptr);
      delta = std::max(delta, std::abs(next[s] - out.value[s]));
    }
    out.value = next;
    out.sweeps = sweep;
    if (delta < tol) break;
    if (sweep == max_sweeps)
      throw std::runtime_error("value_iteration: did not converge");
  }

  out.policy.assign(n_states, 0);
  for (LotIndex i = 0; i <= net.n_lots; ++i)
    backup(net, out.value, i, &out.policy[static_cast<std::size_t>(i)]);
  out.residual = bellman_residual(net, out.value);
  return out;
}

double bellman_residual(const ParkingNetwork& net, std::span<const double> value) {
  double residual = 0.0;
  for (LotIndex i = 0; i <= net.n_lots; ++i) {
    const double backed = backup(net, value, i, nullptr);
    residual = std::max(residual,
                        std::abs(backed - value[static_cast<std::size_t>(i)]));
  }
  return residual;
}

}  // namespace parksim
