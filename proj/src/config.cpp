#include "cwb/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "cwb/errors.hpp"

namespace cwb {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

class KeyReader {
 public:
  explicit KeyReader(const std::map<std::string, std::string>& kv) : kv_(kv) {}

  bool has(const std::string& key) {
    used_.insert(key);
    return kv_.count(key) > 0;
  }
  std::string raw(const std::string& key) {
    used_.insert(key);
    return kv_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return parse_number(key, raw(key));
  }
  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const double v = parse_number(key, raw(key));
    const long long i = static_cast<long long>(v);
    if (static_cast<double>(i) != v)
      throw ConfigError("config: " + key + ": expected an integer");
    return i;
  }
  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const std::string v = raw(key);
    if (v == "1" || v == "true" || v == "on") return true;
    if (v == "0" || v == "false" || v == "off") return false;
    throw ConfigError("config: " + key + ": expected 0/1");
  }
  std::vector<double> number_list(const std::string& key) {
    std::vector<double> out;
    for (const auto& piece : split(raw(key), ','))
      out.push_back(parse_number(key, piece));
    return out;
  }

  void reject_unknown() const {
    for (const auto& [k, v] : kv_)
      if (!used_.count(k)) throw ConfigError("config: unknown key '" + k + "'");
  }

 private:
  double parse_number(const std::string& key, const std::string& v) {
    try {
      size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size())
        throw ConfigError("config: " + key + ": trailing characters in '" + v +
                          "'");
      return x;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("config: " + key + ": cannot parse number '" + v + "'");
    }
  }

  const std::map<std::string, std::string>& kv_;
  std::set<std::string> used_;
};

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      throw ConfigError("config: duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

RunConfig make_run_config(const std::map<std::string, std::string>& kv) {
  KeyReader r(kv);
  RunConfig cfg;
  NewtonSettings& nw = cfg.newton;

  nw.d = static_cast<int>(r.integer("d", 1));
  nw.b = static_cast<int>(r.integer("b", 1));
  if (nw.d < 1 || nw.d > 3) throw ConfigError("config: d: must be in [1,3]");
  if (nw.b < 1 || nw.b > 3) throw ConfigError("config: b: must be in [1,3]");

  if (!r.has("resonant_modes"))
    throw ConfigError("config: resonant_modes: required");
  nw.resonant_modes.clear();
  for (const auto& piece : split(r.raw("resonant_modes"), '|')) {
    std::vector<int> mode;
    for (const auto& comp : split(piece, ',')) {
      try {
        mode.push_back(std::stoi(comp));
      } catch (const std::exception&) {
        throw ConfigError("config: resonant_modes: bad component '" + comp +
                          "'");
      }
    }
    if (static_cast<int>(mode.size()) != nw.d)
      throw ConfigError("config: resonant_modes: each mode needs d components");
    nw.resonant_modes.push_back(std::move(mode));
  }
  if (static_cast<int>(nw.resonant_modes.size()) != nw.b)
    throw ConfigError("config: resonant_modes: need exactly b modes");
  for (size_t i = 0; i < nw.resonant_modes.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (nw.resonant_modes[i] == nw.resonant_modes[j])
        throw ConfigError("config: resonant_modes: modes must be distinct");

  if (!r.has("amplitudes")) throw ConfigError("config: amplitudes: required");
  nw.amplitudes = r.number_list("amplitudes");
  if (static_cast<int>(nw.amplitudes.size()) != nw.b)
    throw ConfigError("config: amplitudes: need exactly b values");
  for (size_t j = 0; j < nw.amplitudes.size(); ++j)
    if (!(nw.amplitudes[j] > 0.0))
      throw ConfigError("config: amplitudes[" + std::to_string(j) +
                        "]: must be > 0");

  if (r.has("lambda")) {
    nw.lambda = r.number_list("lambda");
    if (static_cast<int>(nw.lambda.size()) != nw.b)
      throw ConfigError("config: lambda: need exactly b values");
    for (size_t j = 0; j < nw.lambda.size(); ++j)
      if (nw.lambda[j] < 0.0 || nw.lambda[j] > 1.0)
        throw ConfigError("config: lambda[" + std::to_string(j) +
                          "]: must lie in [0,1]");
  }

  nw.epsilon = r.number("epsilon", 1e-3);
  if (nw.epsilon < 0.0) throw ConfigError("config: epsilon: must be >= 0");
  nw.alpha = r.number("alpha", 2.0);
  if (!(nw.alpha > 1.0)) throw ConfigError("config: alpha: must exceed 1");
  nw.L0 = r.number("L0", 1.0);
  if (!(nw.L0 > 0.0)) throw ConfigError("config: L0: must be positive");

  if (r.has("f_coeffs")) {
    nw.f.c = r.number_list("f_coeffs");
    if (nw.f.c.empty()) throw ConfigError("config: f_coeffs: empty");
  }

  nw.schedule.N0 = static_cast<int>(r.integer("schedule_N0", 4));
  if (nw.schedule.N0 < 1) throw ConfigError("config: schedule_N0: must be >= 1");
  nw.schedule.growth = r.number("schedule_growth", 2.0);
  if (!(nw.schedule.growth > 1.0))
    throw ConfigError("config: schedule_growth: must exceed 1");
  nw.schedule.max_steps = static_cast<int>(r.integer("max_steps", 12));
  if (nw.schedule.max_steps < 0)
    throw ConfigError("config: max_steps: must be >= 0");
  nw.schedule.residual_tol = r.number("residual_tol", 1e-12);
  if (!(nw.schedule.residual_tol > 0.0))
    throw ConfigError("config: residual_tol: must be positive");
  nw.schedule.B_max = r.number("B_max", 1e8);
  if (!(nw.schedule.B_max > 0.0))
    throw ConfigError("config: B_max: must be positive");
  nw.schedule.box_cap = static_cast<int>(r.integer("box_cap", 32));
  if (nw.schedule.box_cap < nw.schedule.N0)
    throw ConfigError("config: box_cap: must be >= schedule_N0");

  int max_mode = 0;
  for (const auto& m : nw.resonant_modes)
    for (int v : m) max_mode = std::max(max_mode, std::abs(v));
  if (nw.schedule.radius_at(0) <= max_mode)
    throw ConfigError(
        "config: schedule_N0: initial box must contain the resonant modes");

  nw.budget = r.number("budget", 0.1);
  if (!(nw.budget > 0.0)) throw ConfigError("config: budget: must be positive");
  nw.decay_fit_dim_cap =
      static_cast<int>(r.integer("decay_fit_dim_cap", 2200));
  nw.decay_fit_columns =
      static_cast<int>(r.integer("decay_fit_columns", 16));

  cfg.dio.gamma = r.number("dio_gamma", 0.01);
  if (cfg.dio.gamma < 0.0) throw ConfigError("config: dio_gamma: must be >= 0");
  cfg.dio.C = r.number("dio_C", static_cast<double>(nw.b + nw.d + 1));
  if (!(cfg.dio.C > nw.b + nw.d))
    throw ConfigError("config: dio_C: must exceed b + d");
  cfg.dio.N = static_cast<int>(r.integer("dio_N", nw.schedule.box_cap));
  if (cfg.dio.N < 2) throw ConfigError("config: dio_N: must be >= 2");
  cfg.prefilter = r.flag("prefilter", true);

  cfg.sweep_samples = r.integer("sweep_samples", 0);
  if (cfg.sweep_samples < 0)
    throw ConfigError("config: sweep_samples: must be >= 0");
  cfg.filter_samples = r.integer("filter_samples", 1000);
  if (cfg.filter_samples < 1)
    throw ConfigError("config: filter_samples: must be >= 1");
  cfg.rm_enable = r.flag("rm_enable", false);
  cfg.rm_M = static_cast<int>(r.integer("rm_M", 2));
  cfg.rm_tau = r.number("rm_tau", static_cast<double>(nw.b + 2));
  if (!(cfg.rm_tau > nw.b)) throw ConfigError("config: rm_tau: must exceed b");
  cfg.rm_grid_exponent = static_cast<int>(r.integer("rm_grid_exponent", 6));

  if (r.has("seed")) {
    const long long s = r.integer("seed", 0);
    if (s < 0) throw ConfigError("config: seed: must be >= 0");
    cfg.seed = static_cast<uint64_t>(s);
    cfg.seed_set = true;
  }
  cfg.workers = static_cast<int>(r.integer("workers", 1));
  if (cfg.workers < 1) throw ConfigError("config: workers: must be >= 1");
  cfg.dump_operator = r.flag("dump_operator", false);

  r.reject_unknown();
  return cfg;
}

}  // namespace cwb
