#include "cylq/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cylq {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (value.empty() || *end != '\0' || !std::isfinite(v)) throw ConfigError("bad number for " + key + ": '" + value + "'");
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (value.empty() || *end != '\0' || v < -1000000 || v > 1000000) {
    throw ConfigError("bad integer for " + key + ": '" + value + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

double RunConfig::tolerance(const std::string& name) const {
  const auto it = tol.find(name);
  if (it == tol.end()) throw ConfigError("unknown tolerance " + name);
  return it->second;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "a") cfg.a = to_double(key, value);
  else if (key == "k") cfg.k = to_double(key, value);
  else if (key == "hbar") {
    cfg.hbar = to_double(key, value);
    cfg.hbar_set = true;
  } else if (key == "band" || key == "N") cfg.N = to_int(key, value);
  else if (key == "grid" || key == "M") cfg.M = to_int(key, value);
  else if (key == "p_cutoff") cfg.p_cutoff = to_double(key, value);
  else if (key == "omega") cfg.omega = to_double(key, value);
  else if (key == "format") cfg.format = value;
  else if (key == "out") cfg.out = value;
  else if (key == "suite") cfg.suite = value;
  else if (key == "function") cfg.function = value;
  else if (key == "pair") cfg.pair = value;
  else if (key == "state") cfg.state = value;
  else if (key.rfind("tol.", 0) == 0) {
    const std::string name = key.substr(4);
    if (!cfg.tol.count(name)) throw ConfigError("unknown tolerance " + name);
    cfg.tol[name] = to_double(key, value);
  } else {
    throw ConfigError("unknown key " + key);
  }
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    try {
      apply_setting(cfg, key, trim(t.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void validate(const RunConfig& cfg) {
  if (!(cfg.a > 0.0)) throw ConfigError("a must be positive");
  if (!(cfg.hbar > 0.0)) throw ConfigError("hbar must be positive");
  if (!(cfg.k >= 0.0 && cfg.k < kTwoPi / cfg.a)) throw ConfigError("k must lie in [0, 2pi/a)");
  if (cfg.N < 4) throw ConfigError("band N must be at least 4");
  if (cfg.M < 2 * cfg.N + 1) throw ConfigError("grid M must be at least 2N + 1");
  if (cfg.p_cutoff < 0.0) throw ConfigError("p_cutoff must be nonnegative");
  if (!(cfg.omega > 0.0)) throw ConfigError("omega must be positive");
  if (!cfg.format.empty() && cfg.format != "json" && cfg.format != "csv") throw ConfigError("format must be json or csv");
  for (const auto& [name, v] : cfg.tol) {
    if (!(v > 0.0)) throw ConfigError("tolerance " + name + " must be positive");
  }
}

StateSpec parse_state(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  double v[3];
  int count = 0;
  while (std::getline(ss, part, ',')) {
    if (count == 3) throw ConfigError("state takes three values q,p,omega");
    v[count] = to_double("state", trim(part));
    ++count;
  }
  if (count != 3) throw ConfigError("state takes three values q,p,omega");
  if (!(v[2] > 0.0)) throw ConfigError("state omega must be positive");
  return {v[0], v[1], v[2]};
}

}  // namespace cylq
