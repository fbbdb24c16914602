#include "parksim/core_model.hpp"

#include <stdexcept>
#include <string>

namespace parksim {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

double ParkingNetwork::drive(LotIndex from, LotIndex to) const {
  return drive_time.at(static_cast<std::size_t>(from))
      .at(static_cast<std::size_t>(to));
}

double ParkingNetwork::walk(LotIndex lot) const {
  require(lot >= 1 && lot <= n_lots, "walk: lot index out of range");
  return walk_time[static_cast<std::size_t>(lot - 1)];
}

double ParkingNetwork::prob(LotIndex lot) const {
  require(lot >= 1 && lot <= n_lots, "prob: lot index out of range");
  return initial_probs[static_cast<std::size_t>(lot - 1)];
}

void ParkingNetwork::validate() const {
  require(n_lots >= 1, "network: n_lots must be >= 1");
  const std::size_t dim = static_cast<std::size_t>(n_lots) + 1;
  require(drive_time.size() == dim, "network: drive_time must be (N+1)x(N+1)");
  for (const auto& row : drive_time) {
    require(row.size() == dim, "network: drive_time must be (N+1)x(N+1)");
    for (double t : row) require(t >= 0.0, "network: drive times must be >= 0");
  }
  require(walk_time.size() == static_cast<std::size_t>(n_lots),
          "network: walk_time must have one entry per lot");
  for (double t : walk_time) require(t >= 0.0, "network: walk times must be >= 0");
  require(wait_time > 0.0, "network: wait_time must be > 0");
  require(initial_probs.size() == static_cast<std::size_t>(n_lots),
          "network: initial_probs must have one entry per lot");
  for (double p : initial_probs)
    require(p > 0.0 && p <= 1.0, "network: probabilities must lie in (0,1]");
}

RewardBreakdown reward(LotIndex from, LotIndex to, bool parked,
                       const ParkingNetwork& net) {
  require(to >= 1 && to <= net.n_lots,
          "reward: a vehicle cannot attempt to stay at or return to the origin");
  require(from >= 0 && from <= net.n_lots, "reward: from index out of range");

  RewardBreakdown r;
  if (from != to) {
    r.drive = net.drive(from, to);
  } else {
    r.wait = net.wait_time;
  }
  if (parked) r.walk = net.walk(to);
  return r;
}

double time_to_arrive(std::span<const RewardBreakdown> legs) {
  if (legs.empty())
    throw std::invalid_argument("time_to_arrive: empty trajectory");
  double total = 0.0;
  for (const auto& leg : legs) total += leg.total();
  return total;
}

double time_to_drive(const ParkingNetwork& net, LotIndex target) {
  if (target < 1 || target > net.n_lots)
    throw std::invalid_argument("time_to_drive: target must be a lot");
  return net.drive(kOrigin, target);
}

}  // namespace parksim
