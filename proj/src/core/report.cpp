#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "analytic.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "estimate.hpp"
#include "simulate.hpp"

namespace sou {

namespace {

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

ExponentFit limit_fit(const ShapeFunction& shape, Window w) {
  const MSDCurve c = msd_limit(shape, Lebesgue{}, geometric_grid(w.lo, w.hi, 41));
  return fit_exponent(c, w);
}

ReportRow exponent_row(const std::string& name, const std::string& family, const ShapeFunction& shape, Window w,
                       double predicted, const std::string& predicted_text, double tol) {
  const ExponentFit f = limit_fit(shape, w);
  return {name, family, predicted_text, fmt(f.nu), "+-" + fmt(tol, 2), std::abs(f.nu - predicted) <= tol};
}

template <class Msd>
ReportRow plateau_row(const std::string& name, const std::string& family, double tau1, Msd msd) {
  const double ratio = msd(1e6 * tau1) / msd(1e4 * tau1);
  return {name, family, "bounded", "ratio " + fmt(ratio), "ratio < 1.05", ratio < 1.05};
}

ReportRow rouse_profile_row() {
  const SOUModel m = distinguished_model_from_spectrum(circulant_spectrum(4096, {1.0}), 1.0, 1);
  const ProfileResult p = profile_check(m);
  const double targets[3] = {1.0, 0.5, 1.0};
  bool pass = true;
  for (int i = 0; i < 3; ++i) pass = pass && std::abs(p.fits[static_cast<std::size_t>(i)].nu - targets[i]) <= 0.03;
  return {"rouse-profile",
          "rouse n=4096 finite",
          "1 / 0.5 / 1",
          fmt(p.fits[0].nu) + " / " + fmt(p.fits[1].nu) + " / " + fmt(p.fits[2].nu),
          "+-0.03 each",
          pass};
}

ReportRow torus2d_row() {
  ProductShape torus{{rouse_shape(), rouse_shape()}};
  const Window w{1e3, 1e5};
  const MSDCurve c = msd_limit(torus, geometric_grid(w.lo, w.hi, 21));
  const LogVsPowerResult r = log_vs_power_check(c, w);
  return {"torus-2d",
          "rouse x rouse limit",
          "ln t",
          "r2 ln " + fmt(r.r2_log, 6) + " vs t^" + fmt(r.best_power_nu, 2) + " " + fmt(r.best_power_r2, 6),
          "ln t fits best",
          r.log_wins};
}

ReportRow rouse_mc_row(const ReportOptions& opts) {
  const SOUModel m = distinguished_model_from_spectrum(circulant_spectrum(128, {1.0}), 1.0, 1);
  const auto times = geometric_grid(1e-2, 1e4, 80);
  const Window w = default_windows(m).intermediate;
  const ExponentFit analytic = fit_exponent(msd_finite(m, times), w);
  const ExponentFit mc = fit_exponent(simulate_msd(m, times, opts.mc_paths, opts.seed), w);
  const double gap = std::abs(mc.nu - analytic.nu);
  return {"rouse-mc",
          "rouse n=128 monte-carlo",
          fmt(analytic.nu) + " (analytic)",
          fmt(mc.nu) + " +- " + fmt(mc.stderr_nu),
          "3 stderr",
          gap <= 3.0 * mc.stderr_nu};
}

using RowFn = std::function<ReportRow(const ReportOptions&)>;

const std::vector<std::pair<std::string, RowFn>>& rows() {
  static const std::vector<std::pair<std::string, RowFn>> table = {
      {"rouse",
       [](const ReportOptions&) {
         return exponent_row("rouse", "rouse limit", rouse_shape(), {1e2, 1e4}, 0.5, "0.5000", 0.02);
       }},
      {"rouse-profile", [](const ReportOptions&) { return rouse_profile_row(); }},
      {"power-1.5",
       [](const ReportOptions&) {
         const ShapeFunction s = power_shape(1.5);
         return exponent_row("power-1.5", "power rho=1.5 limit", s, limit_window(s), 1.0 / 3.0, "0.3333", 0.02);
       }},
      {"power-0.5",
       [](const ReportOptions&) {
         const ShapeFunction s = power_shape(0.5);
         return plateau_row("power-0.5", "power rho=0.5 limit", 1.0 / s.max_value(),
                            [&](double t) { return msd_limit_at(s, Lebesgue{}, t); });
       }},
      {"repulsive-2",
       [](const ReportOptions&) {
         return exponent_row("repulsive-2", "repulsive order=2 limit", repulsive_shape(2), {1e2, 1e4}, 0.75,
                             "0.7500", 0.02);
       }},
      {"repulsive-3",
       [](const ReportOptions&) {
         return exponent_row("repulsive-3", "repulsive order=3 limit", repulsive_shape(3), {1e2, 1e4}, 5.0 / 6.0,
                             "0.8333", 0.02);
       }},
      {"torus-2d", [](const ReportOptions&) { return torus2d_row(); }},
      {"torus-3d",
       [](const ReportOptions&) {
         const ProductShape s{{rouse_shape(), rouse_shape(), rouse_shape()}};
         return plateau_row("torus-3d", "rouse^3 limit", 1.0 / s.max_value(),
                            [&](double t) { return msd_limit_at(s, t); });
       }},
      {"rouse-mc", rouse_mc_row},
  };
  return table;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

bool ReportResult::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

const std::vector<std::string>& report_row_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, _] : rows()) n.push_back(name);
    return n;
  }();
  return names;
}

ReportResult run_report(const ReportOptions& opts) {
  for (const auto& name : opts.only) {
    const auto& names = report_row_names();
    require(std::find(names.begin(), names.end(), name) != names.end(), "unknown report row: " + name);
  }
  require(opts.mc_paths >= 2, "report needs at least two Monte Carlo paths");
  ReportResult result;
  for (const auto& [name, fn] : rows()) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), name) == opts.only.end()) continue;
    result.rows.push_back(fn(opts));
  }

  std::ostringstream md, csv;
  md << "# Exponent report\n\n"
     << "tool: " << tool_version() << ", seed: " << opts.seed << ", monte-carlo paths: " << opts.mc_paths << "\n\n"
     << "| row | family | predicted | measured | tolerance | result |\n"
     << "|---|---|---|---|---|---|\n";
  csv << "# tool: " << tool_version() << "\n# seed: " << opts.seed << "\n# mc_paths: " << opts.mc_paths << "\n"
      << "row,family,predicted,measured,tolerance,pass\n";
  for (const auto& r : result.rows) {
    md << "| " << r.name << " | " << r.family << " | " << r.predicted << " | " << r.measured << " | " << r.tolerance
       << " | " << (r.pass ? "pass" : "FAIL") << " |\n";
    csv << csv_cell(r.name) << ',' << csv_cell(r.family) << ',' << csv_cell(r.predicted) << ','
        << csv_cell(r.measured) << ',' << csv_cell(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
  }
  result.markdown = md.str();
  result.csv = csv.str();
  return result;
}

}  // namespace sou
