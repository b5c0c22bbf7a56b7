#include "estimate.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace sou {

namespace {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double sxx = 0.0;
  double ssr = 0.0;
};

LinearFit weighted_ols(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
  double sw = 0, mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    mx += w[i] * x[i];
    my += w[i] * y[i];
  }
  mx /= sw;
  my /= sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += w[i] * dx * dx;
    sxy += w[i] * dx * dy;
    syy += w[i] * dy * dy;
  }
  require(sxx > 0.0, "regression abscissae are degenerate");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.sxx = sxx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.ssr += w[i] * r * r;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - f.ssr / syy, 0.0, 1.0) : (f.ssr == 0.0 ? 1.0 : 0.0);
  return f;
}

}  // namespace

std::string regime_label_name(RegimeLabel r) {
  switch (r) {
    case RegimeLabel::Short:
      return "short";
    case RegimeLabel::Intermediate:
      return "intermediate";
    case RegimeLabel::Long:
      return "long";
  }
  return "unknown";
}

RegimeLabel parse_regime_label(const std::string& name) {
  if (name == "short") return RegimeLabel::Short;
  if (name == "intermediate") return RegimeLabel::Intermediate;
  if (name == "long") return RegimeLabel::Long;
  throw InvalidArgument("unknown regime label: " + name);
}

nlohmann::json ExponentFit::to_json() const {
  return {{"nu", nu},
          {"stderr_nu", stderr_nu},
          {"intercept", intercept},
          {"window", {window.lo, window.hi}},
          {"r_squared", r_squared},
          {"regime_label", regime_label_name(regime_label)},
          {"n_points", n_points}};
}

MSDCurve msd_from_ensemble(const PathEnsemble& e) {
  require(e.n_paths >= 1, "ensemble has no paths");
  MSDCurve c;
  c.provenance = Provenance::MonteCarlo;
  const double m = static_cast<double>(e.n_paths);
  for (std::size_t j = 0; j < e.times.size(); ++j) {
    if (e.times[j] == 0.0) continue;
    double sum = 0.0;
    for (std::size_t p = 0; p < e.n_paths; ++p)
      for (int comp = 0; comp < e.n_components; ++comp) {
        const double x = e.at(p, comp, j);
        sum += x * x;
      }
    c.times.push_back(e.times[j]);
    c.values.push_back(sum / m);
  }
  if (e.n_paths > 1) {
    c.std_errors.emplace();
    for (double v : c.values) c.std_errors->push_back(gaussian_msd_stderr(v, e.n_components, e.n_paths));
  } else {
    c.warnings.push_back("single-path ensemble: standard errors omitted");
  }
  return c;
}

ExponentFit fit_exponent(const MSDCurve& curve, Window window, RegimeLabel label) {
  require(!window.empty(), "fit window must satisfy t_lo < t_hi");
  require(curve.times.size() == curve.values.size(), "curve times and values differ in length");
  std::vector<double> x, y, w;
  // Values enter as ln(v / v_ref) so a constant rescaling cancels before
  // the logarithm rather than after it.
  double v_ref = 0.0;
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    const double t = curve.times[i];
    if (t < window.lo || t > window.hi) continue;
    const double v = curve.values[i];
    require(v > 0.0 && std::isfinite(v), "fit window contains a nonpositive MSD value");
    if (v_ref == 0.0) v_ref = v;
    x.push_back(std::log(t));
    y.push_back(std::log(v / v_ref));
    double weight = 1.0;
    if (curve.std_errors && (*curve.std_errors)[i] > 0.0) {
      const double rel = (*curve.std_errors)[i] / v;
      weight = 1.0 / (rel * rel);
    }
    w.push_back(weight);
  }
  require(x.size() >= kMinFitPoints, "fit window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                                         "] holds " + std::to_string(x.size()) + " points; need at least " +
                                         std::to_string(kMinFitPoints));
  const LinearFit f = weighted_ols(x, y, w);
  ExponentFit fit;
  fit.nu = f.slope;
  fit.intercept = f.intercept + std::log(v_ref);
  fit.window = window;
  fit.r_squared = f.r_squared;
  fit.regime_label = label;
  fit.n_points = x.size();
  if (curve.std_errors) {
    fit.stderr_nu = std::sqrt(1.0 / f.sxx);
  } else {
    fit.stderr_nu = std::sqrt(f.ssr / static_cast<double>(x.size() - 2) / f.sxx);
  }
  return fit;
}

DefaultWindows default_windows(const SOUModel& model) {
  require(model.n_modes() >= 1, "default windows need at least one OU mode");
  DefaultWindows dw;
  dw.tau_first = 1.0 / model.max_rate();
  dw.tau_last = 1.0 / model.min_rate();
  dw.short_window = {1e-3 * dw.tau_first, 1e-1 * dw.tau_first};
  dw.long_window = {10.0 * dw.tau_last, 1e3 * dw.tau_last};
  if (10.0 * dw.tau_first < 0.1 * dw.tau_last) {
    dw.intermediate = {10.0 * dw.tau_first, 0.1 * dw.tau_last};
  } else {
    dw.warnings.push_back("insufficient scale separation: intermediate window is empty");
  }
  return dw;
}

Window limit_window(const ShapeFunction& shape) {
  const double top = shape.max_value();
  require(top > 0.0, "shape has no positive values");
  return {1e3 / top, 1e6 / top};
}

Window limit_window(const ProductShape& shape) {
  const double top = shape.max_value();
  require(top > 0.0, "shape has no positive values");
  return {1e3 / top, 1e6 / top};
}

ProfileResult profile_check(const SOUModel& model) {
  ProfileResult r;
  r.windows = default_windows(model);
  const double separation = r.windows.tau_last / r.windows.tau_first;
  require(separation >= kProfileSeparation, "profile check needs tau_N / tau_1 >= 1e4 (got " +
                                                std::to_string(separation) + "); use a larger n");
  const std::array<std::pair<Window, RegimeLabel>, 3> windows = {
      std::pair{r.windows.short_window, RegimeLabel::Short},
      std::pair{r.windows.intermediate, RegimeLabel::Intermediate},
      std::pair{r.windows.long_window, RegimeLabel::Long}};
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& [win, label] = windows[i];
    const MSDCurve c = msd_finite(model, geometric_grid(win.lo, win.hi, kProfilePoints));
    r.fits[i] = fit_exponent(c, win, label);
  }
  return r;
}

LogVsPowerResult log_vs_power_check(const MSDCurve& curve, Window window, double step) {
  require(step > 0.0 && step <= 0.5, "power grid step must lie in (0, 0.5]");
  std::vector<double> t, v;
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    if (curve.times[i] < window.lo || curve.times[i] > window.hi) continue;
    t.push_back(curve.times[i]);
    v.push_back(curve.values[i]);
  }
  require(t.size() >= kMinFitPoints, "log-vs-power check needs at least 8 points in the window");
  const std::vector<double> ones(t.size(), 1.0);
  std::vector<double> lt(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) lt[i] = std::log(t[i]);

  LogVsPowerResult r;
  r.r2_log = weighted_ols(lt, v, ones).r_squared;
  const int n_steps = static_cast<int>(std::floor(1.0 / step + 1e-9));
  for (int k = 1; k <= n_steps; ++k) {
    const double nu = k * step;
    std::vector<double> tp(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) tp[i] = std::pow(t[i], nu);
    const double r2 = weighted_ols(tp, v, ones).r_squared;
    if (k == 1 || r2 > r.best_power_r2) {
      r.best_power_r2 = r2;
      r.best_power_nu = nu;
    }
  }
  r.log_wins = r.r2_log > r.best_power_r2;
  return r;
}

}  // namespace sou
