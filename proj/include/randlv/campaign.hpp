#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "randlv/report.hpp"

namespace randlv {

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace detail

/// Run the configured scenario, write one CSV per table plus manifest.json
/// into `dir`, and return the manifest.
inline json run_campaign(const CampaignConfig& cfg, const std::filesystem::path& dir) {
  cfg.validate();
  std::filesystem::create_directories(dir);
  json manifest{{"tool", "randlv"},
                {"version", kVersion},
                {"config", config_json(cfg)},
                {"seed_rule", "trial t uses stream base_seed xor t"}};
  json files = json::array();

  switch (cfg.scenario) {
    case Scenario::equilibrium_sweep: {
      const auto res = run_equilibrium_sweep(cfg);
      auto out = detail::open_output(dir / "sweep.csv");
      write_sweep_csv(out, res);
      files.push_back("sweep.csv");
      json failures = json::array();
      for (const auto& r : res.records) {
        failures.push_back({{"alpha", r.alpha}, {"mu", r.mu}, {"failures", r.failures}, {"flagged", r.flagged}});
      }
      manifest["failures"] = failures;
      break;
    }
    case Scenario::histogram: {
      const auto res = run_survivor_histogram(cfg);
      auto out = detail::open_output(dir / "histogram.csv");
      write_histogram_csv(out, res);
      files.push_back("histogram.csv");
      manifest["ks_distance"] = res.ks;
      manifest["survivors_pooled"] = res.survivors.size();
      manifest["failures"] = res.failures;
      manifest["theory"] = {{"p_star", res.theory.p_star},
                            {"m_star", res.theory.m_star},
                            {"sigma_star", res.theory.sigma_star},
                            {"delta_star", res.theory.delta_star}};
      break;
    }
    case Scenario::diversity_timeseries: {
      const auto res = run_diversity_timeseries(cfg);
      json failures = json::array();
      for (std::size_t i = 0; i < res.tables.size(); ++i) {
        const auto name = "timeseries_" + std::to_string(i) + ".csv";
        auto out = detail::open_output(dir / name);
        write_timeseries_csv(out, res.tables[i]);
        files.push_back(name);
        failures.push_back({{"mu", res.tables[i].mu},
                            {"failures", res.tables[i].failures},
                            {"hill_theory_before", res.tables[i].hill_theory_before},
                            {"hill_theory_after", res.tables[i].hill_theory_after}});
      }
      manifest["failures"] = failures;
      break;
    }
  }
  manifest["files"] = files;
  auto out = detail::open_output(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  return manifest;
}

}  // namespace randlv
