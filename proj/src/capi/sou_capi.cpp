#include "sou/sou.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "analytic.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "estimate.hpp"
#include "graph.hpp"
#include "json.hpp"
#include "model.hpp"
#include "report.hpp"
#include "simulate.hpp"
#include "specs.hpp"

struct sou_graph {
  sou::WeightedGraph graph;
};

struct sou_model {
  sou::SOUModel model;
};

struct sou_curve {
  sou::MSDCurve curve;
};

namespace {

using nlohmann::json;

thread_local std::string last_error;

template <class Fn>
sou_status guard(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return SOU_OK;
  } catch (const sou::InvalidArgument& e) {
    last_error = e.what();
    return SOU_INVALID_ARGUMENT;
  } catch (const sou::NumericFailure& e) {
    last_error = e.what();
    return SOU_NUMERIC_FAILURE;
  } catch (const sou::ResourceLimit& e) {
    last_error = e.what();
    return SOU_RESOURCE_LIMIT;
  } catch (const sou::IoError& e) {
    last_error = e.what();
    return SOU_IO_ERROR;
  } catch (const json::exception& e) {
    last_error = std::string("invalid JSON: ") + e.what();
    return SOU_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SOU_RESOURCE_LIMIT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SOU_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown internal error";
    return SOU_INTERNAL_ERROR;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw sou::InvalidArgument(std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse(const char* text, const char* what) {
  need(text, what);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw sou::InvalidArgument(std::string(what) + " is not valid JSON: " + e.what());
  }
}

std::vector<double> times_of(const double* times, std::size_t n) {
  need(times, "times");
  return {times, times + n};
}

sou::RegimeLabel label_of(sou_regime r) {
  switch (r) {
    case SOU_REGIME_SHORT:
      return sou::RegimeLabel::Short;
    case SOU_REGIME_INTERMEDIATE:
      return sou::RegimeLabel::Intermediate;
    case SOU_REGIME_LONG:
      return sou::RegimeLabel::Long;
  }
  throw sou::InvalidArgument("unknown regime label");
}

sou_regime regime_of(sou::RegimeLabel r) {
  switch (r) {
    case sou::RegimeLabel::Short:
      return SOU_REGIME_SHORT;
    case sou::RegimeLabel::Intermediate:
      return SOU_REGIME_INTERMEDIATE;
    case sou::RegimeLabel::Long:
      return SOU_REGIME_LONG;
  }
  return SOU_REGIME_INTERMEDIATE;
}

json window_json(sou::Window w) {
  if (w.empty()) return nullptr;
  return json::array({w.lo, w.hi});
}

}  // namespace

extern "C" {

const char* sou_version(void) { return SOU_VERSION; }

const char* sou_last_error(void) { return last_error.c_str(); }

void sou_string_free(char* s) { std::free(s); }

sou_status sou_graph_from_spec(const char* spec_json, sou_graph** out) {
  return guard([&] {
    need(out, "out");
    *out = new sou_graph{sou::specs::build_graph(parse(spec_json, "graph spec"))};
  });
}

void sou_graph_free(sou_graph* g) { delete g; }

size_t sou_graph_n_vertices(const sou_graph* g) { return g == nullptr ? 0 : g->graph.n_vertices(); }

sou_status sou_graph_to_json(const sou_graph* g, char** out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    *out = dup_string(g->graph.to_json().dump());
  });
}

sou_status sou_graph_laplacian(const sou_graph* g, double* out, size_t capacity) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    const std::size_t n = g->graph.n_vertices();
    if (capacity < n * n) throw sou::InvalidArgument("Laplacian buffer holds fewer than n^2 entries");
    const auto lap = g->graph.laplacian();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] = lap(i, j);
  });
}

sou_status sou_spectrum_json(const char* graph_spec_json, const char* method, const char* shape_spec_json,
                             char** out) {
  return guard([&] {
    need(out, "out");
    const json spec = parse(graph_spec_json, "graph spec");
    const auto m = sou::specs::parse_spectrum_method(method == nullptr ? "auto" : method);
    const sou::Spectrum s = sou::specs::graph_spectrum(spec, m);
    json doc = s.to_json();
    doc["n_modes"] = s.n_modes();
    doc["family"] = sou::specs::graph_family(spec);
    if (shape_spec_json != nullptr) {
      const json shape_spec = parse(shape_spec_json, "shape spec");
      const sou::ShapeFunction shape = sou::specs::build_shape(shape_spec);
      const std::string fam = spec.at("family").get<std::string>();
      if (fam != "rouse" && fam != "circulant" && fam != "repulsive") {
        throw sou::InvalidArgument("shape distance needs an indexed circulant family (rouse, circulant, repulsive)");
      }
      // Natural (Fourier) index order, not magnitude order.
      const int n = spec.at("n").get<int>();
      std::vector<double> kappas;
      if (fam == "rouse") kappas = {spec.value("kappa", 1.0)};
      if (fam == "circulant") kappas = spec.at("kappas").get<std::vector<double>>();
      if (fam == "repulsive") kappas = sou::repulsive_weights(spec.at("order").get<int>());
      const auto indexed = sou::circulant_eigenvalues(n, kappas);
      doc["shape"] = sou::specs::shape_family(shape_spec);
      doc["shape_sup_distance"] = sou::shape_sup_distance(indexed, shape);
    }
    *out = dup_string(doc.dump());
  });
}

sou_status sou_model_from_spec(const char* spec_json, sou_model** out) {
  return guard([&] {
    need(out, "out");
    *out = new sou_model{sou::specs::build_model(parse(spec_json, "model spec"))};
  });
}

sou_status sou_model_from_json(const char* model_json, sou_model** out) {
  return guard([&] {
    need(out, "out");
    *out = new sou_model{sou::SOUModel::from_json(parse(model_json, "model document"))};
  });
}

void sou_model_free(sou_model* m) { delete m; }

sou_status sou_model_to_json(const sou_model* m, char** out) {
  return guard([&] {
    need(m, "model");
    need(out, "out");
    *out = dup_string(m->model.to_json().dump());
  });
}

sou_status sou_model_acf(const sou_model* m, double t, double s, double* out) {
  return guard([&] {
    need(m, "model");
    need(out, "out");
    *out = sou::acf_finite(m->model, t, s);
  });
}

sou_status sou_model_windows_json(const sou_model* m, char** out) {
  return guard([&] {
    need(m, "model");
    need(out, "out");
    const auto w = sou::default_windows(m->model);
    const json doc = {{"tau_first", w.tau_first},
                      {"tau_last", w.tau_last},
                      {"short", window_json(w.short_window)},
                      {"intermediate", window_json(w.intermediate)},
                      {"long", window_json(w.long_window)},
                      {"warnings", w.warnings}};
    *out = dup_string(doc.dump());
  });
}

sou_status sou_msd_finite(const sou_model* m, const double* times, size_t n, sou_curve** out) {
  return guard([&] {
    need(m, "model");
    need(out, "out");
    *out = new sou_curve{sou::msd_finite(m->model, times_of(times, n))};
  });
}

sou_status sou_msd_limit(const char* shape_spec_json, const char* measure_spec_json, const double* times, size_t n,
                         sou_curve** out) {
  return guard([&] {
    need(out, "out");
    const json shape_spec = parse(shape_spec_json, "shape spec");
    const auto grid = times_of(times, n);
    const sou::ProductShape shape = sou::specs::build_product_shape(shape_spec);
    if (shape.factors.size() > 1) {
      if (measure_spec_json != nullptr) {
        const json mu = parse(measure_spec_json, "measure spec");
        if (mu.value("kind", "") != "lebesgue" || mu.value("scale", 1.0) != 1.0)
          throw sou::InvalidArgument("product shapes support the unit Lebesgue measure only");
      }
      *out = new sou_curve{sou::msd_limit(shape, grid)};
      return;
    }
    const sou::MeasureDensity mu = measure_spec_json == nullptr
                                       ? sou::MeasureDensity{sou::Lebesgue{}}
                                       : sou::specs::build_measure(parse(measure_spec_json, "measure spec"));
    *out = new sou_curve{sou::msd_limit(shape.factors.front(), mu, grid)};
  });
}

sou_status sou_msd_simulate(const sou_model* m, const double* times, size_t n, size_t n_paths, uint64_t seed,
                            size_t chunk_paths, sou_curve** out) {
  return guard([&] {
    need(m, "model");
    need(out, "out");
    *out = new sou_curve{sou::simulate_msd(m->model, times_of(times, n), n_paths, seed,
                                           chunk_paths == 0 ? 1024 : chunk_paths)};
  });
}

sou_status sou_sample_paths_csv(const sou_model* m, const double* times, size_t n, size_t n_paths, uint64_t seed,
                                char** out) {
  return guard([&] {
    need(m, "model");
    need(out, "out");
    *out = dup_string(sou::ensemble_to_csv(sou::sample_paths(m->model, times_of(times, n), n_paths, seed)));
  });
}

void sou_curve_free(sou_curve* c) { delete c; }

size_t sou_curve_size(const sou_curve* c) { return c == nullptr ? 0 : c->curve.times.size(); }

int sou_curve_has_stderr(const sou_curve* c) { return (c != nullptr && c->curve.std_errors) ? 1 : 0; }

sou_status sou_curve_data(const sou_curve* c, double* times, double* values, double* std_errors) {
  return guard([&] {
    need(c, "curve");
    const auto& cv = c->curve;
    if (std_errors != nullptr && !cv.std_errors) throw sou::InvalidArgument("curve carries no standard errors");
    for (std::size_t i = 0; i < cv.times.size(); ++i) {
      if (times != nullptr) times[i] = cv.times[i];
      if (values != nullptr) values[i] = cv.values[i];
      if (std_errors != nullptr) std_errors[i] = (*cv.std_errors)[i];
    }
  });
}

sou_status sou_curve_to_csv(const sou_curve* c, const char* header_lines_json, char** out) {
  return guard([&] {
    need(c, "curve");
    need(out, "out");
    std::vector<std::string> header;
    if (header_lines_json != nullptr) header = parse(header_lines_json, "header lines").get<std::vector<std::string>>();
    *out = dup_string(sou::curve_to_csv(c->curve, header));
  });
}

sou_status sou_curve_to_json(const sou_curve* c, char** out) {
  return guard([&] {
    need(c, "curve");
    need(out, "out");
    *out = dup_string(sou::curve_to_json(c->curve).dump());
  });
}

sou_status sou_curve_from_csv(const char* text, sou_curve** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new sou_curve{sou::curve_from_csv(text)};
  });
}

sou_status sou_fit_exponent(const sou_curve* c, double t_lo, double t_hi, sou_regime regime, sou_fit* out) {
  return guard([&] {
    need(c, "curve");
    need(out, "out");
    const auto f = sou::fit_exponent(c->curve, {t_lo, t_hi}, label_of(regime));
    *out = sou_fit{f.nu, f.intercept, f.window.lo, f.window.hi, f.stderr_nu, f.r_squared,
                   regime_of(f.regime_label), f.n_points};
  });
}

sou_status sou_fit_to_json(const sou_fit* fit, char** out) {
  return guard([&] {
    need(fit, "fit");
    need(out, "out");
    sou::ExponentFit f;
    f.nu = fit->nu;
    f.intercept = fit->intercept;
    f.window = {fit->t_lo, fit->t_hi};
    f.stderr_nu = fit->stderr_nu;
    f.r_squared = fit->r_squared;
    f.regime_label = label_of(fit->regime);
    f.n_points = fit->n_points;
    *out = dup_string(f.to_json().dump());
  });
}

sou_status sou_run_config(const char* config_json, const char* out_dir, char** result_json) {
  return guard([&] {
    need(result_json, "result_json");
    const auto cfg = sou::ExperimentConfig::from_json(parse(config_json, "config"));
    const auto r = sou::run_experiment(cfg);
    if (out_dir != nullptr) sou::write_run_outputs(r, cfg, out_dir);
    const json doc = {{"summary", r.summary},
                      {"family", r.family},
                      {"config_digest", r.config_digest},
                      {"fit", r.fit_json},
                      {"msd_csv", r.msd_csv}};
    *result_json = dup_string(doc.dump());
  });
}

sou_status sou_report(const char* options_json, char** result_json, int* all_pass) {
  return guard([&] {
    need(result_json, "result_json");
    sou::ReportOptions opts;
    if (options_json != nullptr) {
      const json j = parse(options_json, "report options");
      if (!j.is_object()) throw sou::InvalidArgument("report options must be an object");
      for (const auto& [key, _] : j.items())
        if (key != "only" && key != "seed" && key != "mc_paths")
          throw sou::InvalidArgument("unknown report option: " + key);
      if (j.contains("only")) opts.only = j.at("only").get<std::vector<std::string>>();
      if (j.contains("seed")) opts.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("mc_paths")) opts.mc_paths = j.at("mc_paths").get<std::size_t>();
    }
    const auto r = sou::run_report(opts);
    json rows = json::array();
    for (const auto& row : r.rows)
      rows.push_back({{"row", row.name},
                      {"family", row.family},
                      {"predicted", row.predicted},
                      {"measured", row.measured},
                      {"tolerance", row.tolerance},
                      {"pass", row.pass}});
    const json doc = {{"rows", rows}, {"markdown", r.markdown}, {"csv", r.csv}, {"all_pass", r.all_pass()}};
    if (all_pass != nullptr) *all_pass = r.all_pass() ? 1 : 0;
    *result_json = dup_string(doc.dump());
  });
}

}  // extern "C"
