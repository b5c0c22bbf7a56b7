#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "estimate.hpp"
#include "json.hpp"

namespace sou {

struct GridSpec {
  std::string kind = "auto";  // auto | linear | geometric
  double t_min = 0.0;
  double t_max = 0.0;
  int n_points = 0;
};

struct WindowSpec {
  RegimeLabel label = RegimeLabel::Intermediate;
  Window window;
};

/// One experiment: a model (finite and Monte Carlo methods) or a limit
/// shape and measure (analytic-limit), a time grid, windows and outputs.
struct ExperimentConfig {
  std::optional<nlohmann::json> model;
  std::optional<nlohmann::json> limit;
  Provenance method = Provenance::AnalyticFinite;
  GridSpec grid;
  std::optional<std::vector<WindowSpec>> windows;  // nullopt means auto
  std::size_t n_paths = 1000;
  std::optional<std::uint64_t> seed;
  std::size_t chunk_paths = 1024;
  std::string msd_path = "msd.csv";
  std::string fit_path = "fit.json";

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  std::string digest() const;
};

struct RunResult {
  std::string family;
  MSDCurve curve;
  std::vector<ExponentFit> fits;
  std::size_t primary = 0;  // index into fits
  std::string config_digest;
  std::string msd_csv;
  nlohmann::json fit_json;
  std::string summary;  // family=<..> method=<..> nu=<..>±<..>
};

std::string tool_version();

RunResult run_experiment(const ExperimentConfig& cfg);

/// Writes msd and fit files under `out_dir` (created if missing).
void write_run_outputs(const RunResult& r, const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace sou
