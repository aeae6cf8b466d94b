#include "carbonshift/config.hpp"

#include <cstdlib>
#include <sstream>

#include "carbonshift/csv.hpp"
#include "carbonshift/errors.hpp"
#include "carbonshift/numfmt.hpp"

namespace carbonshift {

Config::Config() {
  kv_ = {
      {"graph.snap_radius_km", "10"},
      {"graph.create_junctions", "true"},
      {"graph.endpoint_verify_km", "100"},
      {"waypoint.max_accuracy_km", "100"},
      {"route.max_detour_factor", "2"},
      {"route.popularity_band", "1.2"},
      {"devices.era", "y2012"},
      {"devices.amp_spacing_km", "80"},
      {"devices.regen_spacing_km", "1500"},
      {"devices.kappa", "1"},
      {"iso.fallback_radius_km", "1000"},
      {"carbon.step_s", "3600"},
      {"carbon.estimation", "route_average"},
      {"carbon.cutoff", "0.75"},
      {"cidt.pue", "1"},
      {"cidt.redundancy", "1"},
      {"power.watts_per_core", "5"},
      {"power.server_power_w", "500"},
      {"power.transfer_share", "0.2"},
      {"power.pue_dc", "1"},
      {"power.bandwidth_gbps", "1"},
      {"optimize.quantum_s", "300"},
      {"lb.k", "3"},
      {"threads", "1"},
  };
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw input_error("unknown config key '" + key + "'");
  it->second = value;
}

void Config::load_file(const std::string& path) {
  std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    size_t eq = line.find('=', start);
    if (eq == std::string::npos)
      throw input_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    std::string key = line.substr(start, eq - start);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    size_t vs = value.find_first_not_of(" \t");
    value = vs == std::string::npos ? "" : value.substr(vs);
    while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) value.pop_back();
    set(key, value);
  }
}

void Config::load_env() {
  const char* path = std::getenv("CARBONSHIFT_CONFIG");
  if (path && *path) load_file(path);
}

const std::string& Config::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw input_error("unknown config key '" + key + "'");
  return it->second;
}

double Config::get_double(const std::string& key) const { return parse_double(get(key)); }

int64_t Config::get_int(const std::string& key) const { return parse_int64(get(key)); }

bool Config::get_bool(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw input_error("config key '" + key + "' is not a boolean: '" + v + "'");
}

uint64_t Config::hash() const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : kv_) {
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  return h;
}

std::string Config::echo_header() const {
  std::ostringstream out;
  out << "# tool=carbonshift " << tool_version() << "\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
  out << "# config_hash=" << buf << "\n";
  for (const auto& [k, v] : kv_) out << "# " << k << "=" << v << "\n";
  return out.str();
}

const char* Config::tool_version() { return "0.1.0"; }

}  // namespace carbonshift
