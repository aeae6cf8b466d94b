#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace carbonshift {

// Flat key=value settings with typed accessors. Unknown keys are input
// errors so typos in config files fail loudly. Every output file header is
// stamped with the effective settings and a hash of them.
class Config {
 public:
  Config();  // defaults

  void load_file(const std::string& path);
  void load_env();  // honors CARBONSHIFT_CONFIG if set
  void set(const std::string& key, const std::string& value);

  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  int64_t get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  uint64_t hash() const;                 // FNV-1a over sorted key=value lines
  std::string echo_header() const;       // "# key=value\n" lines + hash + version
  const std::map<std::string, std::string>& entries() const { return kv_; }

  static const char* tool_version();

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace carbonshift
