#pragma once
#include <map>
#include <string>
#include <utility>

namespace henlab {

// Flat key=value configuration; '#' starts a comment line.
struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  const std::string& get(const std::string& key) const;  // ConfigError when missing
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { values[key] = value; }

  // "subcommand=<name>" then keys in sorted order
  std::string canonical() const;
  static RunConfig parse(const std::string& text);
  bool operator==(const RunConfig& o) const { return subcommand == o.subcommand && values == o.values; }
};

RunConfig load_config(const std::string& path);

// later layers override earlier ones: defaults < file < flags
RunConfig layer(const RunConfig& defaults, const RunConfig& file, const RunConfig& flags);

double parse_real(const std::string& s, const std::string& what);
int parse_int(const std::string& s, const std::string& what);
// "lo:hi" with lo < hi
std::pair<double, double> parse_range(const std::string& s);
// "WxH", both >= 2
std::pair<int, int> parse_grid(const std::string& s);

}  // namespace henlab
