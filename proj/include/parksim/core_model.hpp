#pragma once

#include <set>
#include <span>
#include <vector>

namespace parksim {

// Index 0 is the origin; 1..N are parking lots. Actions never target 0.
using LotIndex = int;
inline constexpr LotIndex kOrigin = 0;

enum class ParkStatus { Unparked, Parked };

// Static geometry and time costs of one scenario. All times are minutes.
// drive_time is (N+1)x(N+1) with row/col 0 the origin; the lot diagonal is
// unused by transitions (staying put is charged wait_time instead).
struct ParkingNetwork {
  int n_lots = 0;
  std::vector<std::vector<double>> drive_time;
  std::vector<double> walk_time;      // lot j -> destination, at [j-1]
  double wait_time = 0.0;             // t_wait between attempts at one lot
  std::vector<double> initial_probs;  // p_j in (0,1], at [j-1]

  double drive(LotIndex from, LotIndex to) const;
  double walk(LotIndex lot) const;
  double prob(LotIndex lot) const;

  // Throws std::invalid_argument on the first structural violation.
  void validate() const;
};

struct VehicleState {
  LotIndex location = kOrigin;
  ParkStatus status = ParkStatus::Unparked;
  std::set<LotIndex> visited;  // lots already attempted this search cycle
  double clock = 0.0;          // minutes since departure
};

// One leg's time cost split by component. The MDP reward is -total().
struct RewardBreakdown {
  double drive = 0.0;
  double wait = 0.0;
  double walk = 0.0;
  double total() const { return drive + wait + walk; }
};

// The four-case reward for attempting lot `to` from `from`. A move (from !=
// to) charges the drive leg; staying charges one wait period; a successful
// attempt adds the final walk. `to` must be a lot, never the origin.
RewardBreakdown reward(LotIndex from, LotIndex to, bool parked,
                       const ParkingNetwork& net);

// Magnitude of the cumulative reward over a trajectory's legs.
double time_to_arrive(std::span<const RewardBreakdown> legs);

// The naive estimate: origin -> target drive time, nothing else.
double time_to_drive(const ParkingNetwork& net, LotIndex target);

}  // namespace parksim
