#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "graph.hpp"
#include "json.hpp"
#include "model.hpp"
#include "spectrum.hpp"

namespace sou {

enum class Provenance { AnalyticFinite, AnalyticLimit, MonteCarlo };

std::string provenance_name(Provenance p);
Provenance parse_provenance(const std::string& name);

struct MSDCurve {
  std::vector<double> times;
  std::vector<double> values;
  Provenance provenance = Provenance::AnalyticFinite;
  /// Pointwise standard errors; Monte Carlo curves only.
  std::optional<std::vector<double>> std_errors;
  std::vector<std::string> warnings;

  /// Checks lengths, strictly increasing positive times and finite values.
  void validate() const;
};

std::vector<double> linear_grid(double t_min, double t_max, int n_points);
std::vector<double> geometric_grid(double t_min, double t_max, int n_points);

double acf_finite(const SOUModel& model, double t, double s);
MSDCurve msd_finite(const SOUModel& model, const std::vector<double>& times);

/// Variance of x(t) - x(s), evaluated without subtracting ACF values.
double increment_variance(const SOUModel& model, double t, double s);

// Limit coefficient measures on [0,1].
struct Lebesgue {
  double scale = 1.0;
};
struct Dirac {
  double x0 = 0.5;
  double mass = 1.0;
};
struct Tabulated {
  std::vector<Atom> atoms;
};
using MeasureDensity = std::variant<Lebesgue, Dirac, Tabulated>;

/// sigma(t) = int (1 - exp(-2 phi t)) / (2 phi) mu(dx).
double msd_limit_at(const ShapeFunction& shape, const MeasureDensity& measure, double t);
MSDCurve msd_limit(const ShapeFunction& shape, const MeasureDensity& measure, const std::vector<double>& times);

/// Lebesgue measure on [0,1]^D for the sum shape; tensor-product rule, D <= 3.
double msd_limit_at(const ProductShape& shape, double t);
MSDCurve msd_limit(const ProductShape& shape, const std::vector<double>& times);

/// Phi(s) = int_0^1 exp(-2 phi(x) s) dx.
double phi_laplace(const ShapeFunction& shape, double s);
double phi_laplace(const ProductShape& shape, double s);

enum class Regime { Power, Logarithmic, Bounded };
std::string regime_name(Regime r);

struct AsymptoticPrediction {
  Regime regime = Regime::Power;
  double nu = 0.0;
  /// sigma(t) ~ prefactor * t^nu (power) or prefactor * ln t (logarithmic).
  std::optional<double> prefactor;
  std::string description;
};

/// Large-t behaviour of the limit MSD for phi ~ a0 x^rho at each of
/// `zero_endpoints` ends of the domain (2 for symmetric circulant shapes).
AsymptoticPrediction asymptotic_prediction(double rho, double a0, double zero_endpoints = 1.0);
AsymptoticPrediction asymptotic_prediction(const ShapeFunction& shape);

inline constexpr std::size_t kMaxTraceVertices = 512;

/// Bead-averaged MSD (sigma^2/n) sum_k (1 - exp(-2 lambda_k t)) / (2 lambda_k).
MSDCurve trace_msd(const WeightedGraph& g, double sigma, const std::vector<double>& times);

struct TightnessCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// Gaussian fourth moment 3 Var^2 of the increment against 3 (d m |t-s|)^2.
TightnessCheck tightness_bound_check(const SOUModel& model, double t, double s);

std::string curve_to_csv(const MSDCurve& curve, const std::vector<std::string>& header_lines = {});
MSDCurve curve_from_csv(const std::string& text);
nlohmann::json curve_to_json(const MSDCurve& curve);

}  // namespace sou
