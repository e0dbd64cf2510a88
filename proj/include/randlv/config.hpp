#pragma once

// Campaign configuration: a plain `key = value` file, one entry per line,
// `#` starts a comment. Grids are either comma lists (`1.5, 2, 2.5`) or
// inclusive ranges `start:stop:step`.
//
//   scenario = equilibrium-sweep | histogram | diversity-timeseries
//   n        = species count                       (required)
//   trials   = Monte Carlo trials per grid point   (required)
//   seed     = base seed, trial t uses seed ^ t    (default 0)
//   alpha    = grid                                (sweep, histogram)
//   mu       = grid                                (default 0)
//   dist     = gaussian | uniform | zero           (default gaussian)
//   bins     = histogram bins                      (default 50)
//   alpha1, alpha2, t0, t_end, dt, stride          (diversity-timeseries;
//              defaults 2.5, 1.5, 100, 250, 0.01, 10)
//   threads  = worker threads, 0 = hardware        (default 0)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "randlv/error.hpp"
#include "randlv/random_ensembles.hpp"

namespace randlv {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse '" + t + "' as a number for " + what);
  }
  if (used != t.size()) throw ConfigError("trailing characters in '" + t + "' for " + what);
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace detail

/// "1,2,3" or "start:stop:step" (stop included up to rounding).
inline std::vector<double> parse_grid(const std::string& text, const std::string& what = "grid") {
  const std::string s = detail::trim(text);
  if (s.empty()) throw ConfigError(what + " is empty");
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    const auto parts = detail::split(s, ':');
    if (parts.size() != 3) throw ConfigError(what + ": range must be start:stop:step");
    const double start = detail::parse_double(parts[0], what);
    const double stop = detail::parse_double(parts[1], what);
    const double step = detail::parse_double(parts[2], what);
    if (!(step > 0.0) || stop < start) throw ConfigError(what + ": range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  } else {
    for (const auto& part : detail::split(s, ',')) out.push_back(detail::parse_double(part, what));
  }
  return out;
}

enum class Scenario { equilibrium_sweep, histogram, diversity_timeseries };

inline Scenario parse_scenario(const std::string& tag) {
  if (tag == "equilibrium-sweep") return Scenario::equilibrium_sweep;
  if (tag == "histogram") return Scenario::histogram;
  if (tag == "diversity-timeseries") return Scenario::diversity_timeseries;
  throw ConfigError("unknown scenario '" + tag + "'");
}

inline std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::equilibrium_sweep: return "equilibrium-sweep";
    case Scenario::histogram: return "histogram";
    case Scenario::diversity_timeseries: return "diversity-timeseries";
  }
  return "unknown";
}

struct CampaignConfig {
  Scenario scenario = Scenario::equilibrium_sweep;
  int n = 0;
  int trials = 0;
  std::uint64_t base_seed = 0;
  std::vector<double> alphas;
  std::vector<double> mus{0.0};
  EntryDist dist = EntryDist::gaussian;
  int bins = 50;
  double alpha1 = 2.5;
  double alpha2 = 1.5;
  double t0 = 100.0;
  double t_end = 250.0;
  double dt = 0.01;
  int stride = 10;
  int threads = 0;

  void validate() const {
    if (n < 1) throw ConfigError("n must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (mus.empty()) throw ConfigError("mu grid is empty");
    switch (scenario) {
      case Scenario::equilibrium_sweep:
        if (alphas.empty()) throw ConfigError("alpha grid is empty");
        break;
      case Scenario::histogram:
        if (alphas.size() != 1 || mus.size() != 1) throw ConfigError("histogram needs a single alpha and mu");
        if (bins < 1) throw ConfigError("bins must be >= 1");
        break;
      case Scenario::diversity_timeseries:
        if (!(dt > 0.0 && dt <= 0.1) || !(t_end > 0.0) || t0 < 0.0 || stride < 1) {
          throw ConfigError("diversity-timeseries needs 0 < dt <= 0.1, t_end > 0, t0 >= 0, stride >= 1");
        }
        break;
    }
  }
};

inline CampaignConfig parse_campaign_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    if (kv.count(key)) throw ConfigError("config key '" + key + "' given twice");
    kv[key] = detail::trim(line.substr(eq + 1));
  }

  CampaignConfig cfg;
  auto take = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto as_int = [](const std::string& v, const std::string& key) {
    const double d = detail::parse_double(v, key);
    if (d != std::floor(d)) throw ConfigError(key + " must be an integer");
    return static_cast<int>(d);
  };

  if (auto v = take("scenario")) cfg.scenario = parse_scenario(*v);
  if (auto v = take("n")) cfg.n = as_int(*v, "n");
  if (auto v = take("trials")) cfg.trials = as_int(*v, "trials");
  if (auto v = take("seed")) {
    try {
      cfg.base_seed = std::stoull(*v);
    } catch (const std::exception&) {
      throw ConfigError("seed must be an unsigned integer");
    }
  }
  if (auto v = take("alpha")) cfg.alphas = parse_grid(*v, "alpha");
  if (auto v = take("mu")) cfg.mus = parse_grid(*v, "mu");
  if (auto v = take("dist")) cfg.dist = parse_entry_dist(*v);
  if (auto v = take("bins")) cfg.bins = as_int(*v, "bins");
  if (auto v = take("alpha1")) cfg.alpha1 = detail::parse_double(*v, "alpha1");
  if (auto v = take("alpha2")) cfg.alpha2 = detail::parse_double(*v, "alpha2");
  if (auto v = take("t0")) cfg.t0 = detail::parse_double(*v, "t0");
  if (auto v = take("t_end")) cfg.t_end = detail::parse_double(*v, "t_end");
  if (auto v = take("dt")) cfg.dt = detail::parse_double(*v, "dt");
  if (auto v = take("stride")) cfg.stride = as_int(*v, "stride");
  if (auto v = take("threads")) cfg.threads = as_int(*v, "threads");

  static const std::vector<std::string> known{"scenario", "n",  "trials", "seed", "alpha",  "mu",     "dist", "bins",
                                              "alpha1",   "alpha2", "t0", "t_end", "dt", "stride", "threads"};
  for (const auto& [key, value] : kv) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

}  // namespace randlv
