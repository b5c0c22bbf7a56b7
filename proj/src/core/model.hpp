#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "graph.hpp"
#include "json.hpp"
#include "spectrum.hpp"

namespace sou {

/// Gaussian sum-of-OU law
///   x(t) = c0 B_0(t) + sum_k c_k z_k(t),  dz_k = -lambda_k z_k dt + dB_k,
/// with z_k(0) = 0 for every mode. Coefficients carry the noise scale, so
/// `sigma` is the recorded bead noise and does not rescale the law. Each of
/// the `d` ambient components is an independent copy.
class SOUModel {
 public:
  SOUModel(std::vector<double> rates, std::vector<double> coefficients, double c0, double sigma, int d,
           std::vector<double> locations = {}, std::set<std::string> flags = {});

  /// Nonzero modes, consolidated.
  Spectrum spectrum() const { return Spectrum::from_values(rates_, 0.0); }
  const std::vector<double>& rates() const { return rates_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  /// Position in [0,1] of each mode in the coefficient measure.
  const std::vector<double>& locations() const { return locations_; }
  double c0() const { return c0_; }
  double sigma() const { return sigma_; }
  int d() const { return d_; }
  const std::set<std::string>& flags() const { return flags_; }
  bool has_flag(const std::string& f) const { return flags_.count(f) != 0; }
  std::size_t n_modes() const { return rates_.size(); }

  /// c0^2 + sum c_k^2 (per ambient component).
  double total_mass() const;
  double max_rate() const;
  double min_rate() const;

  /// E[c^2] of the coefficient law, for random-coefficient models.
  std::optional<double> coefficient_m2() const { return m2_; }
  SOUModel with_coefficient_m2(double m2) const;

  nlohmann::json to_json() const;
  static SOUModel from_json(const nlohmann::json& j);
  /// Stable FNV-1a digest of the canonical JSON form.
  std::string digest() const;

 private:
  std::vector<double> rates_;
  std::vector<double> coefficients_;
  std::vector<double> locations_;
  double c0_;
  double sigma_;
  int d_;
  std::set<std::string> flags_;
  std::optional<double> m2_;
};

inline const std::string kFlagNonExchangeable = "non_exchangeable";
inline const std::string kFlagShortTimeAnomalous = "short_time_anomalous";

/// Drops the zero mode of a spectrum.
Spectrum nonzero_part(const Spectrum& s);

SOUModel sou_model(const Spectrum& modes, std::vector<double> coefficients, double c0, double sigma, int d);
SOUModel distinguished_model(const WeightedGraph& g, double sigma, int d);
/// Distinguished-particle law from a known diffusive spectrum (zero mode
/// included, simple), avoiding the dense eigensolve.
SOUModel distinguished_model_from_spectrum(const Spectrum& spectrum, double sigma, int d);

enum class CoefficientLaw { Uniform, LogNormal, Constant };
double coefficient_law_moment(CoefficientLaw law, int order);
SOUModel random_coefficient_model(const Spectrum& spectrum, std::uint64_t seed, CoefficientLaw law);

SOUModel random_string_model(int n, double kappa, double sigma);

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

struct CoefficientMeasure {
  std::vector<Atom> atoms;
  double total_mass() const;
  double integrate(const std::function<double(double)>& f) const;
};

CoefficientMeasure coefficient_measure(const SOUModel& model);

/// Table[i][j] = integral of test_fns[j] against measures[i].
std::vector<std::vector<double>> measure_convergence_diagnostic(
    const std::vector<CoefficientMeasure>& measures, const std::vector<std::function<double(double)>>& test_fns);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex_digest(std::uint64_t h);

}  // namespace sou
