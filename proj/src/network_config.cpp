#include "parksim/network_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace parksim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double to_double(const std::string& tok, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' has non-numeric value '" + tok + "'");
  }
  if (used != tok.size())
    throw std::invalid_argument("config: key '" + key + "' has non-numeric value '" + tok + "'");
  return v;
}

}  // namespace

bool ConfigFile::has(const std::string& key) const { return entries.count(key) > 0; }

std::string ConfigFile::get_string(const std::string& key) const {
  auto it = entries.find(key);
  if (it == entries.end())
    throw std::invalid_argument("config: missing key '" + key + "'");
  return it->second;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
  auto it = entries.find(key);
  return it == entries.end() ? fallback : it->second;
}

long ConfigFile::get_int(const std::string& key) const {
  const double v = get_double(key);
  const long n = static_cast<long>(v);
  if (static_cast<double>(n) != v)
    throw std::invalid_argument("config: key '" + key + "' must be an integer");
  return n;
}

long ConfigFile::get_int(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double ConfigFile::get_double(const std::string& key) const {
  return to_double(trim(get_string(key)), key);
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::vector<double> ConfigFile::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& tok : split_ws(get_string(key))) out.push_back(to_double(tok, key));
  return out;
}

std::vector<std::string> ConfigFile::get_strings(const std::string& key) const {
  return split_ws(get_string(key));
}

std::vector<std::vector<double>> ConfigFile::get_matrix(const std::string& key) const {
  std::vector<std::vector<double>> rows;
  std::string text = get_string(key);
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t sep = text.find(';', start);
    const std::string part =
        text.substr(start, sep == std::string::npos ? std::string::npos : sep - start);
    std::vector<double> row;
    for (const auto& tok : split_ws(part)) row.push_back(to_double(tok, key));
    if (!row.empty()) rows.push_back(std::move(row));
    if (sep == std::string::npos) break;
    start = sep + 1;
  }
  return rows;
}

ConfigFile parse_config(std::istream& in) {
  ConfigFile cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " has empty key");
    cfg.entries[key] = value;
  }
  return cfg;
}

ConfigFile parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot read '" + path + "'");
  return parse_config(in);
}

std::vector<std::string> network_violations(const ConfigFile& cfg) {
  std::vector<std::string> v;
  for (const char* key : {"n_lots", "wait_time", "drive_time", "walk_time", "initial_probs"}) {
    if (!cfg.has(key)) v.push_back(std::string("missing key '") + key + "'");
  }
  if (!v.empty()) return v;

  long n = 0;
  try {
    n = cfg.get_int("n_lots");
  } catch (const std::exception& e) {
    v.push_back(e.what());
    return v;
  }
  if (n < 1) v.push_back("n_lots must be >= 1");

  try {
    const auto m = cfg.get_matrix("drive_time");
    const std::size_t dim = static_cast<std::size_t>(n) + 1;
    if (m.size() != dim) {
      v.push_back("drive_time must have " + std::to_string(dim) + " rows (got " +
                  std::to_string(m.size()) + ")");
    } else {
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != dim)
          v.push_back("drive_time row " + std::to_string(i) + " must have " +
                      std::to_string(dim) + " entries");
        for (double t : m[i])
          if (t < 0.0) v.push_back("drive_time entries must be >= 0");
      }
    }
  } catch (const std::exception& e) {
    v.push_back(e.what());
  }

  try {
    const auto w = cfg.get_doubles("walk_time");
    if (w.size() != static_cast<std::size_t>(n))
      v.push_back("walk_time must have one entry per lot");
    for (double t : w)
      if (t < 0.0) v.push_back("walk_time entries must be >= 0");
  } catch (const std::exception& e) {
    v.push_back(e.what());
  }

  try {
    if (cfg.get_double("wait_time") <= 0.0) v.push_back("wait_time must be > 0");
  } catch (const std::exception& e) {
    v.push_back(e.what());
  }

  try {
    const auto p = cfg.get_doubles("initial_probs");
    if (p.size() != static_cast<std::size_t>(n))
      v.push_back("initial_probs must have one entry per lot");
    for (double x : p)
      if (!(x > 0.0 && x <= 1.0))
        v.push_back("initial_probs entries must lie in (0,1]; the model assumes "
                    "every lot admits parking eventually");
  } catch (const std::exception& e) {
    v.push_back(e.what());
  }
  return v;
}

ParkingNetwork network_from_config(const ConfigFile& cfg) {
  const auto violations = network_violations(cfg);
  if (!violations.empty()) {
    std::string message = "invalid network config:";
    for (const auto& m : violations) message += "\n  - " + m;
    throw std::invalid_argument(message);
  }
  ParkingNetwork net;
  net.n_lots = static_cast<int>(cfg.get_int("n_lots"));
  net.drive_time = cfg.get_matrix("drive_time");
  net.walk_time = cfg.get_doubles("walk_time");
  net.wait_time = cfg.get_double("wait_time");
  net.initial_probs = cfg.get_doubles("initial_probs");
  net.validate();
  return net;
}

ParkingNetwork load_network(const std::string& path) {
  return network_from_config(load_config(path));
}

}  // namespace parksim
