#include "henlab/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "henlab/errors.hpp"

namespace henlab {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::string& RunConfig::get(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing configuration key '" + key + "'");
  return it->second;
}

double RunConfig::get_double(const std::string& key) const { return parse_real(get(key), key); }
int RunConfig::get_int(const std::string& key) const { return parse_int(get(key), key); }

std::string RunConfig::canonical() const {
  std::ostringstream o;
  if (!subcommand.empty()) o << "subcommand=" << subcommand << "\n";
  for (const auto& [k, v] : values) o << k << "=" << v << "\n";
  return o.str();
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(n) + ": expected key=value");
    std::string k = trim(t.substr(0, eq)), v = trim(t.substr(eq + 1));
    if (k.empty()) throw ConfigError("config line " + std::to_string(n) + ": empty key");
    if (k == "subcommand")
      c.subcommand = v;
    else
      c.values[k] = v;
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return RunConfig::parse(ss.str());
}

RunConfig layer(const RunConfig& defaults, const RunConfig& file, const RunConfig& flags) {
  RunConfig out = defaults;
  for (const RunConfig* c : {&file, &flags}) {
    if (!c->subcommand.empty()) out.subcommand = c->subcommand;
    for (const auto& [k, v] : c->values) out.values[k] = v;
  }
  return out;
}

double parse_real(const std::string& s, const std::string& what) {
  const char* p = s.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(p, &end);
  if (s.empty() || end != p + s.size() || errno == ERANGE)
    throw ConfigError("'" + what + "': not a real number: '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  const char* p = s.c_str();
  char* end = nullptr;
  errno = 0;
  long v = std::strtol(p, &end, 10);
  if (s.empty() || end != p + s.size() || errno == ERANGE || v < -2147483647L || v > 2147483647L)
    throw ConfigError("'" + what + "': not an integer: '" + s + "'");
  return static_cast<int>(v);
}

std::pair<double, double> parse_range(const std::string& s) {
  auto c = s.find(':');
  if (c == std::string::npos) throw ConfigError("range '" + s + "': expected lo:hi");
  double lo = parse_real(s.substr(0, c), "range"), hi = parse_real(s.substr(c + 1), "range");
  if (!(lo < hi)) throw ConfigError("range '" + s + "': need lo < hi");
  return {lo, hi};
}

std::pair<int, int> parse_grid(const std::string& s) {
  auto x = s.find('x');
  if (x == std::string::npos) throw ConfigError("grid '" + s + "': expected WxH");
  int w = parse_int(s.substr(0, x), "grid"), h = parse_int(s.substr(x + 1), "grid");
  if (w < 2 || h < 2) throw ConfigError("grid '" + s + "': both sides must be >= 2");
  return {w, h};
}

}  // namespace henlab
