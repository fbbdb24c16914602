#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "parksim/simulator.hpp"

namespace parksim {

// A named desk-scale experiment. Everything an outcome contains is fully
// determined by (name, params, seed, synthetic, config_path).
struct PresetRequest {
  std::string name;
  std::map<std::string, std::string> params;
  std::optional<std::uint64_t> seed;  // master seed override
  std::string out_dir = ".";
  bool synthetic = false;
  std::string config_path;  // scenario config for the data-driven presets
};

struct PresetOutcome {
  std::vector<std::string> files;  // artifact paths written, summary last
  nlohmann::json summary;
};

std::vector<std::string> preset_names();

PresetOutcome run_preset(const PresetRequest& request);

void write_episodes_csv(const std::string& path, std::span<const EpisodeResult> episodes);
void write_aggregates_csv(const std::string& path, std::span<const AggregateRow> rows);
void write_gaps_csv(const std::string& path, std::span<const ModeGapRow> rows);

nlohmann::json aggregates_to_json(std::span<const AggregateRow> rows);

}  // namespace parksim
