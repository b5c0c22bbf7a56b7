#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "errors.hpp"
#include "rng.hpp"

namespace sou {

namespace {

// Groups exactly equal rates; unlike Spectrum::from_values this never
// perturbs a value, so the JSON form round-trips bit for bit.
Spectrum exact_groups(const std::vector<double>& sorted_rates) {
  Spectrum s;
  for (double r : sorted_rates) {
    if (!s.values.empty() && s.values.back() == r) {
      ++s.multiplicities.back();
    } else {
      s.values.push_back(r);
      s.multiplicities.push_back(1);
    }
  }
  return s;
}

std::vector<double> natural_locations(std::size_t n_modes) {
  std::vector<double> loc(n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) loc[k] = static_cast<double>(k + 1) / static_cast<double>(n_modes + 1);
  return loc;
}

}  // namespace

SOUModel::SOUModel(std::vector<double> rates, std::vector<double> coefficients, double c0, double sigma, int d,
                   std::vector<double> locations, std::set<std::string> flags)
    : c0_(c0), sigma_(sigma), d_(d), flags_(std::move(flags)) {
  require(rates.size() == coefficients.size(), "model needs one coefficient per nonzero mode (got " +
                                                   std::to_string(coefficients.size()) + " for " +
                                                   std::to_string(rates.size()) + " modes)");
  if (locations.empty()) locations = natural_locations(rates.size());
  require(locations.size() == rates.size(), "model needs one measure location per mode");
  for (std::size_t k = 0; k < rates.size(); ++k) {
    require(std::isfinite(rates[k]) && rates[k] > 0.0, "model rates must be positive and finite");
    require(std::isfinite(coefficients[k]), "model coefficients must be finite");
    require(locations[k] >= 0.0 && locations[k] <= 1.0, "measure locations must lie in [0,1]");
  }
  require(std::isfinite(c0) && c0 >= 0.0, "c0 must be nonnegative and finite");
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be positive");
  require(d >= 1, "ambient dimension d must be at least 1");

  std::vector<std::size_t> order(rates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rates[a] < rates[b]; });
  rates_.reserve(order.size());
  coefficients_.reserve(order.size());
  locations_.reserve(order.size());
  for (std::size_t idx : order) {
    rates_.push_back(rates[idx]);
    coefficients_.push_back(coefficients[idx]);
    locations_.push_back(locations[idx]);
  }

  const double mass = total_mass();
  require(std::isfinite(mass) && mass > 0.0, "total coefficient mass must be positive and finite");
}

double SOUModel::total_mass() const {
  double m = c0_ * c0_;
  for (double c : coefficients_) m += c * c;
  return m;
}

double SOUModel::max_rate() const {
  require(!rates_.empty(), "model has no OU modes");
  return rates_.back();
}

double SOUModel::min_rate() const {
  require(!rates_.empty(), "model has no OU modes");
  return rates_.front();
}

SOUModel SOUModel::with_coefficient_m2(double m2) const {
  require(std::isfinite(m2) && m2 > 0.0, "coefficient second moment must be positive");
  SOUModel copy = *this;
  copy.m2_ = m2;
  return copy;
}

nlohmann::json SOUModel::to_json() const {
  nlohmann::json j = {{"spectrum", exact_groups(rates_).to_json()},
                      {"coefficients", coefficients_},
                      {"locations", locations_},
                      {"c0", c0_},
                      {"sigma", sigma_},
                      {"d", d_},
                      {"flags", flags_}};
  if (m2_) j["m2"] = *m2_;
  return j;
}

SOUModel SOUModel::from_json(const nlohmann::json& j) {
  require(j.is_object(), "model document must be an object");
  static const std::set<std::string> known = {"spectrum", "coefficients", "locations", "c0",
                                              "sigma",    "d",            "flags",     "m2"};
  for (const auto& [key, _] : j.items()) require(known.count(key) != 0, "unknown model key: " + key);
  try {
    const Spectrum spec = Spectrum::from_json(j.at("spectrum"));
    require(spec.values.empty() || spec.values.front() > 0.0,
            "model spectrum lists nonzero modes only; the zero mode is carried by c0");
    std::vector<double> locations;
    if (j.contains("locations")) locations = j.at("locations").get<std::vector<double>>();
    std::set<std::string> flags;
    if (j.contains("flags")) flags = j.at("flags").get<std::set<std::string>>();
    SOUModel m(spec.flattened(), j.at("coefficients").get<std::vector<double>>(), j.at("c0").get<double>(),
               j.at("sigma").get<double>(), j.at("d").get<int>(), std::move(locations), std::move(flags));
    if (j.contains("m2")) m = m.with_coefficient_m2(j.at("m2").get<double>());
    return m;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("malformed model document: ") + ex.what());
  }
}

std::string SOUModel::digest() const { return hex_digest(fnv1a64(to_json().dump())); }

Spectrum nonzero_part(const Spectrum& s) {
  Spectrum out;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (s.values[i] == 0.0) continue;
    out.values.push_back(s.values[i]);
    out.multiplicities.push_back(s.multiplicities[i]);
  }
  return out;
}

SOUModel sou_model(const Spectrum& modes, std::vector<double> coefficients, double c0, double sigma, int d) {
  for (double v : modes.values) require(v > 0.0, "sou_model spectrum must contain positive rates only");
  return SOUModel(modes.flattened(), std::move(coefficients), c0, sigma, d);
}

SOUModel distinguished_model_from_spectrum(const Spectrum& spectrum, double sigma, int d) {
  require(spectrum.n_modes() >= 1, "spectrum is empty");
  require(spectrum.values.front() >= 0.0, "negative diffusive eigenvalue: the spring network is unstable");
  require(spectrum.zero_multiplicity() == 1,
          "graph is disconnected: zero eigenvalue has multiplicity " + std::to_string(spectrum.zero_multiplicity()));
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be positive");
  const double n = static_cast<double>(spectrum.n_modes());
  const double c = sigma / std::sqrt(n);
  const std::size_t n_distinct = spectrum.values.size();

  std::vector<double> rates, coefficients, locations;
  for (std::size_t r = 1; r < n_distinct; ++r) {
    const double loc = static_cast<double>(r) / static_cast<double>(n_distinct - 1);
    for (std::size_t m = 0; m < spectrum.multiplicities[r]; ++m) {
      rates.push_back(spectrum.values[r]);
      coefficients.push_back(c);
      locations.push_back(loc);
    }
  }
  return SOUModel(std::move(rates), std::move(coefficients), c, sigma, d, std::move(locations));
}

SOUModel distinguished_model(const WeightedGraph& g, double sigma, int d) {
  const Spectrum spec = eig_spectrum(g.laplacian());
  const SOUModel base = distinguished_model_from_spectrum(spec, sigma, d);
  if (g.rows_equivalent()) return base;
  return SOUModel(base.rates(), base.coefficients(), base.c0(), sigma, d, base.locations(), {kFlagNonExchangeable});
}

double coefficient_law_moment(CoefficientLaw law, int order) {
  require(order >= 1, "moment order must be positive");
  const double k = order;
  switch (law) {
    case CoefficientLaw::Uniform:
      return (std::pow(1.5, k + 1) - std::pow(0.5, k + 1)) / (k + 1);
    case CoefficientLaw::LogNormal:
      return std::exp(0.5 * 0.0625 * k * k);
    case CoefficientLaw::Constant:
      return 1.0;
  }
  throw InvalidArgument("unknown coefficient law");
}

SOUModel random_coefficient_model(const Spectrum& spectrum, std::uint64_t seed, CoefficientLaw law) {
  require(spectrum.zero_multiplicity() == 1, "random-coefficient model needs a simple zero mode");
  const std::vector<double> flat = spectrum.flattened();
  const double n = static_cast<double>(flat.size());
  auto draw = [&](std::size_t k) {
    Substream rng(seed, k, 0);
    switch (law) {
      case CoefficientLaw::Uniform:
        return 0.5 + rng.uniform();
      case CoefficientLaw::LogNormal:
        return std::exp(0.25 * rng.normal());
      case CoefficientLaw::Constant:
        return 1.0;
    }
    return 1.0;
  };
  std::vector<double> rates, coefficients, locations;
  for (std::size_t k = 1; k < flat.size(); ++k) {
    rates.push_back(flat[k]);
    coefficients.push_back(draw(k) / std::sqrt(n));
    locations.push_back(static_cast<double>(k) / n);
  }
  return SOUModel(std::move(rates), std::move(coefficients), draw(0) / std::sqrt(n), 1.0, 1, std::move(locations))
      .with_coefficient_m2(coefficient_law_moment(law, 2));
}

SOUModel random_string_model(int n, double kappa, double sigma) {
  require(n >= 3, "random string needs n >= 3");
  require(kappa > 0.0 && std::isfinite(kappa), "random string needs kappa > 0");
  const double scaled = static_cast<double>(n) * n * kappa;
  const std::vector<double> lam = circulant_eigenvalues(n, {scaled});
  std::vector<double> rates, locations;
  for (int k = 1; k < n; ++k) {
    rates.push_back(lam[static_cast<std::size_t>(k)]);
    locations.push_back(static_cast<double>(k) / n);
  }
  std::vector<double> coefficients(rates.size(), sigma);
  return SOUModel(std::move(rates), std::move(coefficients), sigma, sigma, 1, std::move(locations),
                  {kFlagShortTimeAnomalous});
}

double CoefficientMeasure::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.mass;
  return m;
}

double CoefficientMeasure::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.mass * f(a.location);
  return s;
}

CoefficientMeasure coefficient_measure(const SOUModel& model) {
  CoefficientMeasure mu;
  mu.atoms.reserve(model.n_modes() + 1);
  mu.atoms.push_back({0.0, model.c0() * model.c0()});
  for (std::size_t k = 0; k < model.n_modes(); ++k) {
    const double c = model.coefficients()[k];
    mu.atoms.push_back({model.locations()[k], c * c});
  }
  return mu;
}

std::vector<std::vector<double>> measure_convergence_diagnostic(
    const std::vector<CoefficientMeasure>& measures, const std::vector<std::function<double(double)>>& test_fns) {
  require(measures.size() >= 2, "convergence diagnostic needs at least two measures");
  require(!test_fns.empty(), "convergence diagnostic needs at least one test function");
  std::vector<std::vector<double>> table(measures.size(), std::vector<double>(test_fns.size()));
  for (std::size_t i = 0; i < measures.size(); ++i)
    for (std::size_t j = 0; j < test_fns.size(); ++j) table[i][j] = measures[i].integrate(test_fns[j]);
  return table;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sou
