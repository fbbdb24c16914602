#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "parksim/core_model.hpp"

namespace parksim {

// Key-value configuration text:
//
//   # comment
//   n_lots     = 2
//   wait_time  = 5
//   drive_time = 0 10 10 ; 10 0 6 ; 10 6 0   # rows separated by ';'
//   walk_time  = 5 8
//   initial_probs = 0.5 0.9
//
// Later assignments to a key override earlier ones.
struct ConfigFile {
  std::map<std::string, std::string> entries;

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;
  // Rows separated by ';', entries by whitespace.
  std::vector<std::vector<double>> get_matrix(const std::string& key) const;
};

ConfigFile parse_config(std::istream& in);
ConfigFile parse_config_text(const std::string& text);
ConfigFile load_config(const std::string& path);

// Schema check for the network keys: returns one message per violation,
// empty when well formed.
std::vector<std::string> network_violations(const ConfigFile& cfg);

// Builds a validated network; throws std::invalid_argument listing the
// violations otherwise.
ParkingNetwork network_from_config(const ConfigFile& cfg);
ParkingNetwork load_network(const std::string& path);

}  // namespace parksim
