#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "json.hpp"
#include "model.hpp"
#include "simulate.hpp"
#include "spectrum.hpp"

namespace sou {

enum class RegimeLabel { Short, Intermediate, Long };
std::string regime_label_name(RegimeLabel r);
RegimeLabel parse_regime_label(const std::string& name);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return !(lo < hi); }
};

struct ExponentFit {
  double nu = 0.0;
  double intercept = 0.0;  // ln of the prefactor
  Window window;
  double stderr_nu = 0.0;
  double r_squared = 0.0;
  RegimeLabel regime_label = RegimeLabel::Intermediate;
  std::size_t n_points = 0;

  nlohmann::json to_json() const;
};

/// Mean of sum_c x_c(t)^2 over paths; t = 0 columns are dropped. Standard
/// errors use the Gaussian fourth moment and are omitted for one path.
MSDCurve msd_from_ensemble(const PathEnsemble& e);

inline constexpr std::size_t kMinFitPoints = 8;

/// Weighted least squares of ln msd on ln t over lo <= t <= hi. Weights are
/// (msd / stderr)^2 when the curve carries standard errors.
ExponentFit fit_exponent(const MSDCurve& curve, Window window, RegimeLabel label = RegimeLabel::Intermediate);

struct DefaultWindows {
  double tau_first = 0.0;  // 1 / lambda_max
  double tau_last = 0.0;   // 1 / lambda_min
  Window short_window;
  Window intermediate;  // empty without scale separation
  Window long_window;
  std::vector<std::string> warnings;
};

DefaultWindows default_windows(const SOUModel& model);

/// Window for limit curves: [1e3, 1e6] in units of 1 / max phi.
Window limit_window(const ShapeFunction& shape);
Window limit_window(const ProductShape& shape);

inline constexpr double kProfileSeparation = 1e4;
inline constexpr int kProfilePoints = 50;

struct ProfileResult {
  std::array<ExponentFit, 3> fits;  // short, intermediate, long
  DefaultWindows windows;
};

ProfileResult profile_check(const SOUModel& model);

struct LogVsPowerResult {
  double r2_log = 0.0;
  double best_power_nu = 0.0;
  double best_power_r2 = 0.0;
  bool log_wins = false;
};

/// Compares the linear regression of msd on ln t against msd on t^nu for
/// nu = step, 2 step, ..., 1.
LogVsPowerResult log_vs_power_check(const MSDCurve& curve, Window window, double step = 0.05);

}  // namespace sou
