#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graph.hpp"
#include "json.hpp"

namespace sou {

inline constexpr std::size_t kMaxDenseEigen = 4096;
inline constexpr double kMergeTolerance = 1e-9;

/// Consolidated diffusive spectrum: sorted distinct eigenvalues of -L with
/// multiplicities.
struct Spectrum {
  std::vector<double> values;
  std::vector<std::size_t> multiplicities;

  std::size_t n_modes() const;
  std::size_t zero_multiplicity() const;
  /// Expanded list, each value repeated by its multiplicity.
  std::vector<double> flattened() const;
  /// Nonzero part of flattened().
  std::vector<double> nonzero_flattened() const;

  nlohmann::json to_json() const;
  static Spectrum from_json(const nlohmann::json& j);

  /// Sort and merge neighbours closer than kMergeTolerance times the value
  /// or `floor` times the spectral radius, whichever is larger; values within
  /// the floor of zero become the zero mode. Dense eigensolves keep the
  /// default floor. Closed forms pass 0 so that small modes stay distinct.
  static Spectrum from_values(std::vector<double> raw, double floor = kMergeTolerance);
};

/// Continuous shape phi on [0,1] with optional Frobenius data phi ~ a0 x^rho.
/// `symmetric` marks phi(x) = phi(1-x); integrals then run over [0,1/2]
/// with weight 2.
struct ShapeFunction {
  std::function<double(double)> eval;
  std::optional<double> rho;
  std::optional<double> a0;
  bool symmetric = false;
  std::string name;

  double operator()(double x) const { return eval(x); }
  double max_value(int grid = 2048) const;
};

/// Sum of independent shapes, phi(x_1..x_D) = sum_i phi_i(x_i): the limit
/// shape of iterated Cartesian products.
struct ProductShape {
  std::vector<ShapeFunction> factors;
  double max_value() const;
};

// Dense route.
std::vector<double> eig_values(const LaplacianMatrix& lap);
Spectrum eig_spectrum(const LaplacianMatrix& lap);
/// Unit-norm eigenvector of -L for the smallest eigenvalue.
std::vector<double> zero_mode_vector(const LaplacianMatrix& lap);

// Closed forms.
std::vector<double> circulant_eigenvalues(int n, const std::vector<double>& kappas);
Spectrum circulant_spectrum(int n, const std::vector<double>& kappas);
/// (2 sin(pi k / n))^(2 order), the spectrum of repulsive_circulant(n, order).
Spectrum repulsive_spectrum(int n, int order);
Spectrum complete_spectrum(int n, double kappa);
Spectrum hypercube_spectrum(int n_dims, double kappa);
Spectrum kronecker_sum_spectrum(const Spectrum& a, const Spectrum& b);
Spectrum power_law_spectrum(double rho, double tau1, int n);

double shape_sup_distance(std::span<const double> indexed_values, const ShapeFunction& shape);

struct RhoEstimate {
  double rho = 0.0;
  double a0 = 0.0;
};
RhoEstimate estimate_rho(const ShapeFunction& shape, double x_lo, double x_hi);

// Shape factories.
ShapeFunction rouse_shape(double kappa = 1.0);
ShapeFunction circulant_shape(const std::vector<double>& kappas);
ShapeFunction repulsive_shape(int order);
ShapeFunction power_shape(double rho, double scale = 1.0);
ShapeFunction linear_shape(double slope);

}  // namespace sou
