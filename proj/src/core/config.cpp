#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "errors.hpp"
#include "simulate.hpp"
#include "specs.hpp"

namespace sou {

namespace {

using nlohmann::json;

constexpr int kFinitePerDecade = 20;
constexpr int kMonteCarloPerDecade = 10;
constexpr int kLimitPerDecade = 20;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  require(j.is_object(), what + " must be a JSON object");
  for (const auto& [key, _] : j.items()) require(allowed.count(key) != 0, "unknown " + what + " key: " + key);
}

std::vector<double> per_decade_grid(double lo, double hi, int per_decade) {
  const int n = std::max(2, static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)) + 1);
  return geometric_grid(lo, hi, n);
}

bool product_limit(const json& limit) {
  return specs::is_product_shape(limit.at("shape")) && limit.at("shape").at("factors").size() > 1;
}

std::vector<double> auto_grid(const ExperimentConfig& cfg, const SOUModel* model) {
  if (cfg.method == Provenance::AnalyticLimit) {
    const auto shape = specs::build_product_shape(cfg.limit->at("shape"));
    const double tau = 1.0 / shape.max_value();
    // Tensor-product quadrature is costly; sample the fit window only.
    if (shape.factors.size() > 1) return per_decade_grid(1e2 * tau, 1e6 * tau, 5);
    return per_decade_grid(1e-1 * tau, 1e7 * tau, kLimitPerDecade);
  }
  const DefaultWindows dw = default_windows(*model);
  return per_decade_grid(1e-3 * dw.tau_first, 1e3 * dw.tau_last,
                         cfg.method == Provenance::MonteCarlo ? kMonteCarloPerDecade : kFinitePerDecade);
}

std::vector<double> build_grid(const ExperimentConfig& cfg, const SOUModel* model) {
  const GridSpec& g = cfg.grid;
  if (g.kind == "auto") return auto_grid(cfg, model);
  if (g.kind == "linear") return linear_grid(g.t_min, g.t_max, g.n_points);
  return geometric_grid(g.t_min, g.t_max, g.n_points);
}

std::size_t points_in(const MSDCurve& c, Window w) {
  std::size_t n = 0;
  for (double t : c.times) n += (t >= w.lo && t <= w.hi) ? 1 : 0;
  return n;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string tool_version() { return std::string("sou ") + SOU_VERSION; }

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  check_keys(j, {"method", "model", "limit", "grid", "windows", "n_paths", "seed", "chunk_paths", "output"}, "config");
  ExperimentConfig c;
  try {
    require(j.contains("method"), "config needs 'method'");
    c.method = parse_provenance(j.at("method").get<std::string>());
    if (j.contains("model")) c.model = j.at("model");
    if (j.contains("limit")) {
      const json& lim = j.at("limit");
      check_keys(lim, {"shape", "measure"}, "limit");
      require(lim.contains("shape"), "limit needs 'shape'");
      c.limit = lim;
    }
    if (c.method == Provenance::AnalyticLimit) {
      require(c.limit.has_value(), "analytic-limit method needs a 'limit' block");
      require(!c.model.has_value(), "analytic-limit method takes 'limit', not 'model'");
    } else {
      require(c.model.has_value(), provenance_name(c.method) + " method needs a 'model' block");
      require(!c.limit.has_value(), provenance_name(c.method) + " method takes 'model', not 'limit'");
    }

    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (g.is_string()) {
        require(g.get<std::string>() == "auto", "grid must be \"auto\" or an object");
      } else {
        check_keys(g, {"kind", "t_min", "t_max", "n_points"}, "grid");
        c.grid.kind = g.at("kind").get<std::string>();
        require(c.grid.kind == "linear" || c.grid.kind == "geometric" || c.grid.kind == "auto",
                "grid kind must be linear, geometric or auto");
        if (c.grid.kind != "auto") {
          c.grid.t_min = g.at("t_min").get<double>();
          c.grid.t_max = g.at("t_max").get<double>();
          c.grid.n_points = g.at("n_points").get<int>();
          require(c.grid.n_points >= 2 && c.grid.t_min < c.grid.t_max, "grid needs t_min < t_max, n_points >= 2");
          require(c.grid.t_min > 0.0, "grid t_min must be positive");
        }
      }
    }

    if (j.contains("windows")) {
      const json& w = j.at("windows");
      if (w.is_string()) {
        require(w.get<std::string>() == "auto", "windows must be \"auto\" or a list");
      } else {
        require(w.is_array() && !w.empty(), "windows must be \"auto\" or a non-empty list");
        c.windows.emplace();
        for (const auto& item : w) {
          check_keys(item, {"label", "lo", "hi"}, "window");
          WindowSpec ws;
          ws.label = parse_regime_label(item.value("label", std::string("intermediate")));
          ws.window = {item.at("lo").get<double>(), item.at("hi").get<double>()};
          require(ws.window.lo > 0.0 && !ws.window.empty(), "window needs 0 < lo < hi");
          c.windows->push_back(ws);
        }
      }
    }

    if (j.contains("n_paths")) c.n_paths = j.at("n_paths").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("chunk_paths")) c.chunk_paths = j.at("chunk_paths").get<std::size_t>();
    require(c.n_paths >= 1, "n_paths must be at least 1");
    require(c.chunk_paths >= 1, "chunk_paths must be at least 1");
    if (c.method == Provenance::MonteCarlo) require(c.seed.has_value(), "monte-carlo method needs an explicit 'seed'");

    if (j.contains("output")) {
      const json& o = j.at("output");
      check_keys(o, {"msd", "fit"}, "output");
      c.msd_path = o.value("msd", c.msd_path);
      c.fit_path = o.value("fit", c.fit_path);
    }
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed config: ") + ex.what());
  }
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["method"] = provenance_name(method);
  if (model) j["model"] = *model;
  if (limit) j["limit"] = *limit;
  if (grid.kind == "auto") {
    j["grid"] = "auto";
  } else {
    j["grid"] = {{"kind", grid.kind}, {"t_min", grid.t_min}, {"t_max", grid.t_max}, {"n_points", grid.n_points}};
  }
  if (windows) {
    j["windows"] = json::array();
    for (const auto& w : *windows)
      j["windows"].push_back({{"label", regime_label_name(w.label)}, {"lo", w.window.lo}, {"hi", w.window.hi}});
  } else {
    j["windows"] = "auto";
  }
  j["n_paths"] = n_paths;
  if (seed) j["seed"] = *seed;
  j["chunk_paths"] = chunk_paths;
  j["output"] = {{"msd", msd_path}, {"fit", fit_path}};
  return j;
}

std::string ExperimentConfig::digest() const { return hex_digest(fnv1a64(to_json().dump())); }

RunResult run_experiment(const ExperimentConfig& cfg) {
  RunResult r;
  r.config_digest = cfg.digest();
  std::vector<std::pair<RegimeLabel, Window>> windows;
  std::vector<std::string> warnings;

  if (cfg.method == Provenance::AnalyticLimit) {
    const json& lim = *cfg.limit;
    r.family = specs::shape_family(lim.at("shape"));
    const auto times = build_grid(cfg, nullptr);
    if (product_limit(lim)) {
      require(!lim.contains("measure") || lim.at("measure").value("kind", "") == "lebesgue",
              "product shapes support the Lebesgue measure only");
      const ProductShape shape = specs::build_product_shape(lim.at("shape"));
      r.curve = msd_limit(shape, times);
      windows.emplace_back(RegimeLabel::Intermediate, limit_window(shape));
    } else {
      const ProductShape wrapped = specs::build_product_shape(lim.at("shape"));
      const ShapeFunction& shape = wrapped.factors.front();
      const MeasureDensity mu =
          lim.contains("measure") ? specs::build_measure(lim.at("measure")) : MeasureDensity{Lebesgue{}};
      r.curve = msd_limit(shape, mu, times);
      windows.emplace_back(RegimeLabel::Intermediate, limit_window(shape));
    }
  } else {
    r.family = specs::model_family(*cfg.model);
    const SOUModel model = specs::build_model(*cfg.model);
    const auto times = build_grid(cfg, &model);
    if (cfg.method == Provenance::MonteCarlo) {
      r.curve = simulate_msd(model, times, cfg.n_paths, *cfg.seed, cfg.chunk_paths);
    } else {
      r.curve = msd_finite(model, times);
    }
    if (!cfg.windows) {
      const DefaultWindows dw = default_windows(model);
      warnings.insert(warnings.end(), dw.warnings.begin(), dw.warnings.end());
      windows.emplace_back(RegimeLabel::Short, dw.short_window);
      if (!dw.intermediate.empty()) windows.emplace_back(RegimeLabel::Intermediate, dw.intermediate);
      windows.emplace_back(RegimeLabel::Long, dw.long_window);
    }
  }
  if (cfg.windows) {
    windows.clear();
    for (const auto& w : *cfg.windows) windows.emplace_back(w.label, w.window);
  }
  warnings.insert(warnings.end(), r.curve.warnings.begin(), r.curve.warnings.end());

  for (const auto& [label, win] : windows) {
    if (points_in(r.curve, win) < kMinFitPoints) {
      warnings.push_back(regime_label_name(label) + " window holds fewer than 8 grid points; skipped");
      continue;
    }
    r.fits.push_back(fit_exponent(r.curve, win, label));
  }
  require(!r.fits.empty(), "no fit window holds at least 8 grid points; refine the grid");
  r.primary = 0;
  for (std::size_t i = 0; i < r.fits.size(); ++i)
    if (r.fits[i].regime_label == RegimeLabel::Intermediate) {
      r.primary = i;
      break;
    }

  std::vector<std::string> header = {"tool: " + tool_version(), "config_digest: " + r.config_digest,
                                     "family: " + r.family, "method: " + provenance_name(cfg.method)};
  if (cfg.method == Provenance::MonteCarlo) {
    header.push_back("seed: " + std::to_string(*cfg.seed));
    header.push_back("n_paths: " + std::to_string(cfg.n_paths));
  }
  r.msd_csv = curve_to_csv(r.curve, header);

  json fits = json::array();
  for (const auto& f : r.fits) fits.push_back(f.to_json());
  r.fit_json = {{"tool", tool_version()},
                {"config_digest", r.config_digest},
                {"family", r.family},
                {"method", provenance_name(cfg.method)},
                {"fits", fits},
                {"primary", r.primary},
                {"warnings", warnings}};
  const ExponentFit& p = r.fits[r.primary];
  r.summary = "family=" + r.family + " method=" + provenance_name(cfg.method) + " nu=" + fmt("%.4f", p.nu) +
              "\xC2\xB1" + fmt("%.4f", p.stderr_nu);
  return r;
}

void write_run_outputs(const RunResult& r, const ExperimentConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : dir / p; };
  write_file(resolve(cfg.msd_path), r.msd_csv);
  write_file(resolve(cfg.fit_path), r.fit_json.dump(2) + "\n");
}

}  // namespace sou
