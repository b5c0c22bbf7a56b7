#include "spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "errors.hpp"

namespace sou {

std::size_t Spectrum::n_modes() const {
  return std::accumulate(multiplicities.begin(), multiplicities.end(), std::size_t{0});
}

std::size_t Spectrum::zero_multiplicity() const {
  return (!values.empty() && values.front() == 0.0) ? multiplicities.front() : 0;
}

std::vector<double> Spectrum::flattened() const {
  std::vector<double> out;
  out.reserve(n_modes());
  for (std::size_t i = 0; i < values.size(); ++i) out.insert(out.end(), multiplicities[i], values[i]);
  return out;
}

std::vector<double> Spectrum::nonzero_flattened() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != 0.0) out.insert(out.end(), multiplicities[i], values[i]);
  return out;
}

nlohmann::json Spectrum::to_json() const {
  return {{"values", values}, {"multiplicities", multiplicities}};
}

Spectrum Spectrum::from_json(const nlohmann::json& j) {
  require(j.is_object(), "spectrum document must be an object");
  for (const auto& [key, _] : j.items())
    require(key == "values" || key == "multiplicities", "unknown spectrum key: " + key);
  Spectrum s;
  try {
    s.values = j.at("values").get<std::vector<double>>();
    s.multiplicities = j.contains("multiplicities")
                           ? j.at("multiplicities").get<std::vector<std::size_t>>()
                           : std::vector<std::size_t>(s.values.size(), 1);
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("malformed spectrum document: ") + ex.what());
  }
  require(s.values.size() == s.multiplicities.size(), "values and multiplicities differ in length");
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    require(std::isfinite(s.values[i]), "spectrum values must be finite");
    require(s.multiplicities[i] >= 1, "multiplicities must be positive");
    if (i > 0) require(s.values[i] > s.values[i - 1], "spectrum values must be strictly increasing");
  }
  return s;
}

Spectrum Spectrum::from_values(std::vector<double> raw, double floor) {
  Spectrum s;
  if (raw.empty()) return s;
  for (double v : raw) require(std::isfinite(v), "eigenvalue is not finite");
  std::sort(raw.begin(), raw.end());
  double radius = 0.0;
  for (double v : raw) radius = std::max(radius, std::abs(v));
  const double abs_floor = floor * radius;

  std::size_t start = 0;
  while (start < raw.size()) {
    std::size_t end = start + 1;
    while (end < raw.size() &&
           raw[end] - raw[start] <= std::max(kMergeTolerance * std::abs(raw[end]), abs_floor))
      ++end;
    double mean = 0.0;
    for (std::size_t i = start; i < end; ++i) mean += raw[i];
    mean /= static_cast<double>(end - start);
    s.values.push_back(mean);
    s.multiplicities.push_back(end - start);
    start = end;
  }
  if (std::abs(s.values.front()) <= abs_floor) s.values.front() = 0.0;
  return s;
}

double ShapeFunction::max_value(int grid) const {
  double m = 0.0;
  for (int i = 0; i <= grid; ++i) m = std::max(m, eval(static_cast<double>(i) / grid));
  return m;
}

double ProductShape::max_value() const {
  double m = 0.0;
  for (const auto& f : factors) m += f.max_value();
  return m;
}

std::vector<double> eig_values(const LaplacianMatrix& lap) {
  if (lap.n() > kMaxDenseEigen) {
    throw ResourceLimit("dense eigensolve limited to n <= " + std::to_string(kMaxDenseEigen));
  }
  if (lap.n() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(-lap.entries(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericFailure("symmetric eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Spectrum eig_spectrum(const LaplacianMatrix& lap) { return Spectrum::from_values(eig_values(lap)); }

std::vector<double> zero_mode_vector(const LaplacianMatrix& lap) {
  if (lap.n() > kMaxDenseEigen) {
    throw ResourceLimit("dense eigensolve limited to n <= " + std::to_string(kMaxDenseEigen));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(-lap.entries());
  if (solver.info() != Eigen::Success) throw NumericFailure("symmetric eigensolver did not converge");
  const Eigen::VectorXd v = solver.eigenvectors().col(0);
  return {v.data(), v.data() + v.size()};
}

std::vector<double> circulant_eigenvalues(int n, const std::vector<double>& kappas) {
  require(n >= 1, "circulant needs n >= 1");
  require(2 * kappas.size() < static_cast<std::size_t>(n), "circulant range K must satisfy K < n/2");
  const double pi = std::numbers::pi;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double lam = 0.0;
    for (std::size_t j = 1; j <= kappas.size(); ++j) {
      require(std::isfinite(kappas[j - 1]), "circulant weights must be finite");
      const double s = std::sin(pi * static_cast<double>(k) * static_cast<double>(j) / n);
      lam += 4.0 * kappas[j - 1] * s * s;
    }
    out[static_cast<std::size_t>(k)] = lam;
  }
  return out;
}

Spectrum circulant_spectrum(int n, const std::vector<double>& kappas) {
  return Spectrum::from_values(circulant_eigenvalues(n, kappas), 0.0);
}

Spectrum repulsive_spectrum(int n, int order) {
  require(order >= 1 && 4 * order < n, "repulsive order too large for n (need 2*order < n/2)");
  // The weight sum cancels to within rounding of zero near k = 0; the shape
  // formula keeps the small modes accurate.
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] = std::pow(2.0 * std::sin(std::numbers::pi * k / n), 2 * order);
  return Spectrum::from_values(std::move(out), 0.0);
}

Spectrum complete_spectrum(int n, double kappa) {
  require(n >= 2, "complete graph needs n >= 2");
  require(kappa > 0.0, "complete graph needs kappa > 0");
  return Spectrum{{0.0, n * kappa}, {1, static_cast<std::size_t>(n - 1)}};
}

Spectrum hypercube_spectrum(int n_dims, double kappa) {
  require(n_dims >= 1, "hypercube needs n_dims >= 1");
  require(kappa > 0.0, "hypercube needs kappa > 0");
  Spectrum s;
  std::size_t binom = 1;
  for (int k = 0; k <= n_dims; ++k) {
    s.values.push_back(2.0 * k * kappa);
    s.multiplicities.push_back(binom);
    binom = binom * static_cast<std::size_t>(n_dims - k) / static_cast<std::size_t>(k + 1);
  }
  return s;
}

Spectrum kronecker_sum_spectrum(const Spectrum& a, const Spectrum& b) {
  // Pairwise sums carry product multiplicities; merge through a flattened
  // list so that coincident sums consolidate.
  std::vector<double> raw;
  raw.reserve(a.n_modes() * b.n_modes());
  for (std::size_t i = 0; i < a.values.size(); ++i)
    for (std::size_t j = 0; j < b.values.size(); ++j)
      raw.insert(raw.end(), a.multiplicities[i] * b.multiplicities[j], a.values[i] + b.values[j]);
  return Spectrum::from_values(std::move(raw), 0.0);
}

Spectrum power_law_spectrum(double rho, double tau1, int n) {
  require(rho > 0.0 && std::isfinite(rho), "power law needs rho > 0");
  require(tau1 > 0.0 && std::isfinite(tau1), "power law needs tau1 > 0");
  require(n >= 2, "power law needs n >= 2");
  Spectrum s;
  for (int k = 0; k < n; ++k) {
    s.values.push_back(std::pow(static_cast<double>(k) / n, rho) / tau1);
    s.multiplicities.push_back(1);
  }
  return s;
}

double shape_sup_distance(std::span<const double> indexed_values, const ShapeFunction& shape) {
  require(!indexed_values.empty(), "shape distance needs a non-empty indexed spectrum");
  const double n = static_cast<double>(indexed_values.size());
  double sup = 0.0;
  for (std::size_t k = 0; k < indexed_values.size(); ++k) {
    sup = std::max(sup, std::abs(indexed_values[k] - shape(static_cast<double>(k) / n)));
  }
  return sup;
}

RhoEstimate estimate_rho(const ShapeFunction& shape, double x_lo, double x_hi) {
  require(x_lo > 0.0 && x_lo < x_hi && x_hi <= 0.1, "estimate_rho window must satisfy 0 < x_lo < x_hi <= 0.1");
  constexpr int kPoints = 50;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double step = std::log(x_hi / x_lo) / (kPoints - 1);
  for (int i = 0; i < kPoints; ++i) {
    const double x = x_lo * std::exp(step * i);
    const double phi = shape(x);
    require(phi > 0.0 && std::isfinite(phi), "shape is not positive on the estimation window");
    const double lx = std::log(x);
    const double ly = std::log(phi);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = kPoints;
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  return {slope, std::exp(intercept)};
}

ShapeFunction rouse_shape(double kappa) {
  return circulant_shape({kappa});
}

ShapeFunction circulant_shape(const std::vector<double>& kappas) {
  const double pi = std::numbers::pi;
  ShapeFunction f;
  f.eval = [kappas, pi](double x) {
    double v = 0.0;
    for (std::size_t j = 1; j <= kappas.size(); ++j) {
      const double s = std::sin(pi * x * static_cast<double>(j));
      v += 4.0 * kappas[j - 1] * s * s;
    }
    return v;
  };
  double second_moment = 0.0;
  for (std::size_t j = 1; j <= kappas.size(); ++j) second_moment += static_cast<double>(j * j) * kappas[j - 1];
  if (second_moment > 0.0) {
    f.rho = 2.0;
    f.a0 = 4.0 * pi * pi * second_moment;
  }
  f.symmetric = true;
  f.name = "circulant";
  return f;
}

ShapeFunction repulsive_shape(int order) {
  auto f = circulant_shape(repulsive_weights(order));
  f.rho = 2.0 * order;
  f.a0 = std::pow(4.0 * std::numbers::pi * std::numbers::pi, order);
  f.name = "repulsive";
  return f;
}

ShapeFunction power_shape(double rho, double scale) {
  require(rho > 0.0 && scale > 0.0, "power shape needs rho > 0 and scale > 0");
  ShapeFunction f;
  f.eval = [rho, scale](double x) { return scale * std::pow(x, rho); };
  f.rho = rho;
  f.a0 = scale;
  f.name = "power";
  return f;
}

ShapeFunction linear_shape(double slope) {
  auto f = power_shape(1.0, slope);
  f.name = "linear";
  return f;
}

}  // namespace sou
