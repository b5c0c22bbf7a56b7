// sou-cli: command-line front end over the C API.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sou/sou.h"

namespace {

using nlohmann::json;

struct CliError {
  sou_status status;
  std::string message;
};

int exit_code(sou_status s) {
  switch (s) {
    case SOU_OK:
      return 0;
    case SOU_INVALID_ARGUMENT:
      return 2;
    case SOU_NUMERIC_FAILURE:
      return 3;
    case SOU_RESOURCE_LIMIT:
      return 4;
    case SOU_IO_ERROR:
      return 5;
    case SOU_INTERNAL_ERROR:
      return 6;
  }
  return 6;
}

const char* status_name(sou_status s) {
  switch (s) {
    case SOU_OK:
      return "ok";
    case SOU_INVALID_ARGUMENT:
      return "invalid-argument";
    case SOU_NUMERIC_FAILURE:
      return "numeric-failure";
    case SOU_RESOURCE_LIMIT:
      return "resource-limit";
    case SOU_IO_ERROR:
      return "io-error";
    case SOU_INTERNAL_ERROR:
      return "internal-error";
  }
  return "internal-error";
}

int report_error(sou_status s, const std::string& message) {
  const json err = {{"error", {{"status", status_name(s)}, {"message", message}, {"exit_code", exit_code(s)}}}};
  std::cerr << err.dump() << '\n';
  return exit_code(s);
}

void check(sou_status s) {
  if (s != SOU_OK) throw CliError{s, sou_last_error()};
}

void fail(const std::string& message) { throw CliError{SOU_INVALID_ARGUMENT, message}; }

std::string take(char* s) {
  std::string out(s);
  sou_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{SOU_IO_ERROR, "cannot read " + path};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{SOU_IO_ERROR, "cannot write " + path};
  out << text;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(what + " is not valid JSON: " + e.what());
  }
  return {};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail("cannot parse " + what + " from '" + s + "'");
  }
  return 0.0;
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail("cannot parse " + what + " from '" + s + "'");
  }
  return 0;
}

// Graph selection shared by several subcommands.
struct GraphFlags {
  std::string family;
  int n = 0;
  double kappa = 0.0;
  std::string kappas;
  int order = 0;
  int n_dims = 0;
  std::string of;
  std::string graph_file;

  void add(CLI::App* app) {
    app->add_option("--family", family,
                    "rouse | circulant | repulsive | complete | hypercube | product | explicit");
    app->add_option("--n", n, "number of beads");
    app->add_option("--kappa", kappa, "spring constant (family default when omitted)");
    app->add_option("--kappas", kappas, "circulant weights, comma separated (j = 1..K)");
    app->add_option("--order", order, "repulsive order");
    app->add_option("--n-dims", n_dims, "hypercube dimension");
    app->add_option("--of", of, "product factors, e.g. rouse:4,rouse:4 or complete:5:0.25");
    app->add_option("--graph-file", graph_file, "graph JSON {label, n_vertices, edges} for --family explicit");
  }

  // family:size[:kappa]
  static json factor(const std::string& token) {
    const auto parts = split(token, ':');
    if (parts.size() < 2 || parts.size() > 3) fail("product factor must be family:size[:kappa], got '" + token + "'");
    json f = {{"family", parts[0]}};
    const int size = to_int(parts[1], "factor size");
    if (parts[0] == "hypercube") {
      f["n_dims"] = size;
    } else if (parts[0] == "repulsive") {
      fail("repulsive factors need an order; use a config file");
    } else {
      f["n"] = size;
    }
    if (parts.size() == 3) f["kappa"] = to_double(parts[2], "factor kappa");
    return f;
  }

  json spec() const {
    if (family.empty()) fail("--family is required");
    json g = {{"family", family}};
    if (family == "rouse" || family == "complete") {
      if (n <= 0) fail("--n is required for " + family);
      g["n"] = n;
      if (kappa != 0.0) g["kappa"] = kappa;
    } else if (family == "circulant") {
      if (n <= 0 || kappas.empty()) fail("circulant needs --n and --kappas");
      g["n"] = n;
      json k = json::array();
      for (const auto& s : split(kappas, ',')) k.push_back(to_double(s, "kappas"));
      g["kappas"] = k;
    } else if (family == "repulsive") {
      if (n <= 0 || order <= 0) fail("repulsive needs --n and --order");
      g["n"] = n;
      g["order"] = order;
    } else if (family == "hypercube") {
      if (n_dims <= 0) fail("hypercube needs --n-dims");
      g["n_dims"] = n_dims;
      if (kappa != 0.0) g["kappa"] = kappa;
    } else if (family == "product") {
      if (of.empty()) fail("product needs --of");
      g["of"] = json::array();
      for (const auto& tok : split(of, ',')) g["of"].push_back(factor(tok));
    } else if (family == "explicit") {
      if (graph_file.empty()) fail("explicit family needs --graph-file");
      g["graph"] = parse_json(read_file(graph_file), graph_file);
    } else {
      fail("unknown graph family: " + family);
    }
    return g;
  }
};

// Model selection: a graph family, a power-law spectrum, the rescaled string,
// random coefficients over a graph spectrum, or an explicit model document.
struct ModelFlags {
  GraphFlags graph;
  double sigma = 1.0;
  int d = 1;
  double rho = 0.0;
  double tau1 = 1.0;
  std::string coefficients;
  std::uint64_t coefficient_seed = 0;
  std::string model_file;

  void add(CLI::App* app) {
    graph.add(app);
    app->add_option("--sigma", sigma, "bead noise scale")->capture_default_str();
    app->add_option("--d", d, "ambient dimension")->capture_default_str();
    app->add_option("--rho", rho, "spectral parameter for --family power_law");
    app->add_option("--tau1", tau1, "first relaxation time for --family power_law")->capture_default_str();
    app->add_option("--coefficients", coefficients, "random coefficient law: uniform | lognormal | constant");
    app->add_option("--coefficient-seed", coefficient_seed, "seed for --coefficients");
    app->add_option("--model-file", model_file, "explicit model JSON document");
  }

  json spec() const {
    if (!model_file.empty()) return {{"kind", "explicit"}, {"model", parse_json(read_file(model_file), model_file)}};
    if (graph.family == "power_law") {
      if (rho <= 0.0 || graph.n <= 0) fail("power_law needs --rho and --n");
      return {{"kind", "power_law"}, {"rho", rho}, {"tau1", tau1}, {"n", graph.n}, {"sigma", sigma}, {"d", d}};
    }
    if (graph.family == "random_string") {
      if (graph.n <= 0) fail("random_string needs --n");
      return {{"kind", "random_string"},
              {"n", graph.n},
              {"kappa", graph.kappa == 0.0 ? 1.0 : graph.kappa},
              {"sigma", sigma}};
    }
    if (!coefficients.empty()) {
      return {{"kind", "random_coefficients"}, {"graph", graph.spec()}, {"seed", coefficient_seed}, {"law", coefficients}};
    }
    return {{"kind", "graph"}, {"graph", graph.spec()}, {"sigma", sigma}, {"d", d}};
  }
};

json shape_spec(const std::string& text) {
  const auto parts = split(text, ':');
  const std::string kind = parts.empty() ? "" : parts[0];
  if (kind == "rouse") return parts.size() > 1 ? json{{"kind", "rouse"}, {"kappa", to_double(parts[1], "kappa")}}
                                               : json{{"kind", "rouse"}};
  if (kind == "linear") return {{"kind", "linear"}};
  if (kind == "power" && parts.size() == 2) return {{"kind", "power"}, {"rho", to_double(parts[1], "rho")}};
  if (kind == "repulsive" && parts.size() == 2) return {{"kind", "repulsive"}, {"order", to_int(parts[1], "order")}};
  if (kind == "circulant" && parts.size() == 2) {
    json k = json::array();
    for (const auto& s : split(parts[1], ',')) k.push_back(to_double(s, "kappas"));
    return {{"kind", "circulant"}, {"kappas", k}};
  }
  if (kind == "product" && parts.size() == 2) {
    json f = json::array();
    for (const auto& s : split(parts[1], ',')) f.push_back(shape_spec(s));
    return {{"kind", "product"}, {"factors", f}};
  }
  fail("unknown shape '" + text +
       "' (rouse[:kappa], linear, power:RHO, repulsive:ORDER, circulant:K1,K2, product:rouse,rouse)");
  return {};
}

json measure_spec(const std::string& text) {
  const auto parts = split(text, ':');
  if (text == "lebesgue") return {{"kind", "lebesgue"}};
  if (!parts.empty() && parts[0] == "dirac" && (parts.size() == 2 || parts.size() == 3)) {
    json m = {{"kind", "dirac"}, {"x0", to_double(parts[1], "Dirac location")}};
    if (parts.size() == 3) m["mass"] = to_double(parts[2], "Dirac mass");
    return m;
  }
  fail("unknown measure '" + text + "' (lebesgue, dirac:X0[:MASS])");
  return {};
}

// kind:t_min:t_max:n_points or "auto".
json grid_spec(const std::string& text) {
  if (text == "auto") return "auto";
  const auto parts = split(text, ':');
  if (parts.size() != 4) fail("grid must be auto or kind:t_min:t_max:n_points");
  return {{"kind", parts[0]},
          {"t_min", to_double(parts[1], "t_min")},
          {"t_max", to_double(parts[2], "t_max")},
          {"n_points", to_int(parts[3], "n_points")}};
}

json window_list(const std::vector<std::string>& windows) {
  if (windows.empty()) return "auto";
  json out = json::array();
  for (const auto& w : windows) {
    const auto parts = split(w, ':');
    if (parts.size() != 2 && parts.size() != 3) fail("window must be lo:hi[:label]");
    out.push_back({{"lo", to_double(parts[0], "window lo")},
                   {"hi", to_double(parts[1], "window hi")},
                   {"label", parts.size() == 3 ? parts[2] : "intermediate"}});
  }
  return out;
}

json run_config(const json& cfg, const char* out_dir) {
  char* result = nullptr;
  check(sou_run_config(cfg.dump().c_str(), out_dir, &result));
  return parse_json(take(result), "run result");
}

std::string curve_json_from_csv(const std::string& csv) {
  sou_curve* curve = nullptr;
  check(sou_curve_from_csv(csv.c_str(), &curve));
  char* text = nullptr;
  const sou_status s = sou_curve_to_json(curve, &text);
  sou_curve_free(curve);
  check(s);
  return take(text);
}

void emit_run(const json& result, const std::string& out_csv, const std::string& out_json) {
  write_output(out_csv, result.at("msd_csv").get<std::string>());
  if (!out_json.empty()) {
    const json doc = {{"curve", parse_json(curve_json_from_csv(result.at("msd_csv").get<std::string>()), "curve")},
                      {"fit", result.at("fit")}};
    write_output(out_json, doc.dump(2) + "\n");
  }
  std::cerr << result.at("summary").get<std::string>() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-of-Ornstein-Uhlenbeck spectra, MSD curves and anomalous exponents", "sou-cli"};
  app.set_version_flag("--version", std::string("sou-cli ") + sou_version());
  app.require_subcommand(1);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "diffusive spectrum of a graph family as JSON");
  GraphFlags spec_graph;
  spec_graph.add(spectrum);
  std::string spec_method = "auto", spec_shape, spec_out;
  spectrum->add_option("--method", spec_method, "auto | dense | closed")->capture_default_str();
  spectrum->add_option("--shape", spec_shape, "report the sup distance to this shape (circulant families)");
  spectrum->add_option("--out", spec_out, "output file (default stdout)");

  // msd-analytic
  auto* analytic = app.add_subcommand("msd-analytic", "exact finite-n or limiting MSD curve");
  ModelFlags an_model;
  an_model.add(analytic);
  std::string an_method = "finite", an_shape, an_measure = "lebesgue", an_grid = "auto", an_csv, an_json;
  std::vector<std::string> an_windows;
  analytic->add_option("--method", an_method, "finite | limit")->capture_default_str();
  analytic->add_option("--shape", an_shape, "limit shape: rouse, power:RHO, repulsive:ORDER, product:rouse,rouse, ...");
  analytic->add_option("--measure", an_measure, "limit measure: lebesgue | dirac:X0[:MASS]")->capture_default_str();
  analytic->add_option("--grid", an_grid, "auto or kind:t_min:t_max:n_points")->capture_default_str();
  analytic->add_option("--window", an_windows, "fit window lo:hi[:label], repeatable (default auto)");
  analytic->add_option("--out-csv", an_csv, "MSD CSV output (default stdout)");
  analytic->add_option("--out-json", an_json, "curve and fit JSON output");

  // msd-simulate
  auto* simulate = app.add_subcommand("msd-simulate", "Monte Carlo MSD from exact-in-law sample paths");
  ModelFlags mc_model;
  mc_model.add(simulate);
  std::uint64_t mc_seed = 0;
  std::size_t mc_paths = 1000, mc_chunk = 1024;
  std::string mc_grid = "auto", mc_csv, mc_json, mc_ensemble;
  std::vector<std::string> mc_windows;
  simulate->add_option("--seed", mc_seed, "RNG seed")->required();
  simulate->add_option("--n-paths", mc_paths, "number of paths")->capture_default_str();
  simulate->add_option("--chunk", mc_chunk, "paths per accumulation chunk")->capture_default_str();
  simulate->add_option("--grid", mc_grid, "auto or kind:t_min:t_max:n_points")->capture_default_str();
  simulate->add_option("--window", mc_windows, "fit window lo:hi[:label], repeatable (default auto)");
  simulate->add_option("--out-csv", mc_csv, "MSD CSV output (default stdout)");
  simulate->add_option("--out-json", mc_json, "curve and fit JSON output");
  simulate->add_option("--ensemble-csv", mc_ensemble, "also write every path as CSV path_id,t,x");

  // fit-exponent
  auto* fit = app.add_subcommand("fit-exponent", "fit the MSD exponent of a CSV curve over a window");
  std::string fit_csv, fit_window, fit_label = "intermediate", fit_out;
  fit->add_option("--csv", fit_csv, "MSD CSV (t,msd[,stderr])")->required();
  fit->add_option("--window", fit_window, "lo:hi")->required();
  fit->add_option("--label", fit_label, "short | intermediate | long")->capture_default_str();
  fit->add_option("--out", fit_out, "output file (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "run an experiment config, writing msd.csv and fit.json");
  std::string run_cfg, run_dir = ".";
  run->add_option("--config", run_cfg, "config JSON file (grammar in docs/config.md)")->required();
  run->add_option("--out-dir", run_dir, "output directory")->capture_default_str();

  // report
  auto* report = app.add_subcommand("report", "reproduce every exponent regime as a pass/fail table");
  std::vector<std::string> rep_only;
  std::uint64_t rep_seed = 7;
  std::size_t rep_paths = 10000;
  std::string rep_dir;
  report->add_option("--only", rep_only, "restrict to named rows (repeatable)");
  report->add_option("--seed", rep_seed, "Monte Carlo seed")->capture_default_str();
  report->add_option("--mc-paths", rep_paths, "Monte Carlo paths")->capture_default_str();
  report->add_option("--out-dir", rep_dir, "write report.md and report.csv here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(SOU_INVALID_ARGUMENT, e.what());
  }

  try {
    if (spectrum->parsed()) {
      const json g = spec_graph.spec();
      char* out = nullptr;
      const std::string shape = spec_shape.empty() ? "" : shape_spec(spec_shape).dump();
      check(sou_spectrum_json(g.dump().c_str(), spec_method.c_str(), spec_shape.empty() ? nullptr : shape.c_str(),
                              &out));
      write_output(spec_out, parse_json(take(out), "spectrum").dump(2) + "\n");
    } else if (analytic->parsed()) {
      json cfg = {{"grid", grid_spec(an_grid)}, {"windows", window_list(an_windows)}};
      if (an_method == "finite") {
        cfg["method"] = "analytic-finite";
        cfg["model"] = an_model.spec();
      } else if (an_method == "limit") {
        if (an_shape.empty()) fail("--method limit needs --shape");
        cfg["method"] = "analytic-limit";
        cfg["limit"] = {{"shape", shape_spec(an_shape)}, {"measure", measure_spec(an_measure)}};
      } else {
        fail("--method must be finite or limit");
      }
      emit_run(run_config(cfg, nullptr), an_csv, an_json);
    } else if (simulate->parsed()) {
      const json cfg = {{"method", "monte-carlo"},       {"model", mc_model.spec()}, {"grid", grid_spec(mc_grid)},
                        {"windows", window_list(mc_windows)}, {"n_paths", mc_paths},  {"seed", mc_seed},
                        {"chunk_paths", mc_chunk}};
      const json result = run_config(cfg, nullptr);
      emit_run(result, mc_csv, mc_json);
      if (!mc_ensemble.empty()) {
        sou_model* model = nullptr;
        check(sou_model_from_spec(cfg.at("model").dump().c_str(), &model));
        sou_curve* curve = nullptr;
        sou_status s = sou_curve_from_csv(result.at("msd_csv").get<std::string>().c_str(), &curve);
        std::vector<double> times(sou_curve_size(curve));
        if (s == SOU_OK) s = sou_curve_data(curve, times.data(), nullptr, nullptr);
        char* csv = nullptr;
        if (s == SOU_OK) s = sou_sample_paths_csv(model, times.data(), times.size(), mc_paths, mc_seed, &csv);
        sou_curve_free(curve);
        sou_model_free(model);
        check(s);
        write_output(mc_ensemble, take(csv));
      }
    } else if (fit->parsed()) {
      const auto parts = split(fit_window, ':');
      if (parts.size() != 2) fail("--window must be lo:hi");
      sou_regime label = SOU_REGIME_INTERMEDIATE;
      if (fit_label == "short") {
        label = SOU_REGIME_SHORT;
      } else if (fit_label == "long") {
        label = SOU_REGIME_LONG;
      } else if (fit_label != "intermediate") {
        fail("--label must be short, intermediate or long");
      }
      sou_curve* curve = nullptr;
      check(sou_curve_from_csv(read_file(fit_csv).c_str(), &curve));
      sou_fit f{};
      const sou_status s = sou_fit_exponent(curve, to_double(parts[0], "window lo"), to_double(parts[1], "window hi"),
                                            label, &f);
      sou_curve_free(curve);
      check(s);
      char* out = nullptr;
      check(sou_fit_to_json(&f, &out));
      write_output(fit_out, parse_json(take(out), "fit").dump(2) + "\n");
    } else if (run->parsed()) {
      const json cfg = parse_json(read_file(run_cfg), run_cfg);
      const json result = run_config(cfg, run_dir.c_str());
      std::cout << result.at("summary").get<std::string>() << '\n';
    } else if (report->parsed()) {
      const json opts = {{"only", rep_only}, {"seed", rep_seed}, {"mc_paths", rep_paths}};
      char* out = nullptr;
      int all_pass = 0;
      check(sou_report(opts.dump().c_str(), &out, &all_pass));
      const json doc = parse_json(take(out), "report");
      std::cout << doc.at("markdown").get<std::string>();
      if (!rep_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(rep_dir, ec);
        if (ec) throw CliError{SOU_IO_ERROR, "cannot create " + rep_dir + ": " + ec.message()};
        write_output(rep_dir + "/report.md", doc.at("markdown").get<std::string>());
        write_output(rep_dir + "/report.csv", doc.at("csv").get<std::string>());
      }
      return all_pass ? 0 : 1;
    }
  } catch (const CliError& e) {
    return report_error(e.status, e.message);
  }
  return 0;
}
