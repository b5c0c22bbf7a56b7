#include "analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace sou {

namespace {

constexpr double kModeSeries = 1e-8;
constexpr double kLimitSeries = 1e-6;

// (1 - exp(-2 x)) / (2 lambda) with x = lambda m, i.e. the OU variance at m.
double ou_variance(double lambda, double m) {
  const double x = lambda * m;
  if (std::abs(x) < kModeSeries) return m * (1.0 - x + (2.0 / 3.0) * x * x);
  return -std::expm1(-2.0 * x) / (2.0 * lambda);
}

// Integrand of the limit MSD; removable singularity at phi = 0.
double limit_kernel(double phi, double t) {
  const double x = phi * t;
  if (std::abs(x) < kLimitSeries) return t * (1.0 - x + (2.0 / 3.0) * x * x);
  return -std::expm1(-2.0 * x) / (2.0 * phi);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_time(double t) { require(std::isfinite(t) && t >= 0.0, "times must be finite and nonnegative"); }

MSDCurve evaluate_curve(const std::vector<double>& times, Provenance p, const std::function<double(double)>& f) {
  MSDCurve c;
  c.times = times;
  c.values.assign(times.size(), 0.0);
  c.provenance = p;
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(std::isfinite(times[i]) && times[i] > 0.0, "curve times must be positive");
    if (i > 0) require(times[i] > times[i - 1], "curve times must be strictly increasing");
  }
  parallel_for(times.size(), default_workers(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) c.values[i] = f(times[i]);
  });
  return c;
}

}  // namespace

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::AnalyticFinite:
      return "analytic-finite";
    case Provenance::AnalyticLimit:
      return "analytic-limit";
    case Provenance::MonteCarlo:
      return "monte-carlo";
  }
  return "unknown";
}

Provenance parse_provenance(const std::string& name) {
  if (name == "analytic-finite") return Provenance::AnalyticFinite;
  if (name == "analytic-limit") return Provenance::AnalyticLimit;
  if (name == "monte-carlo") return Provenance::MonteCarlo;
  throw InvalidArgument("unknown provenance: " + name);
}

void MSDCurve::validate() const {
  require(times.size() == values.size(), "curve times and values differ in length");
  if (std_errors) require(std_errors->size() == times.size(), "curve stderr length mismatch");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(std::isfinite(times[i]) && times[i] > 0.0, "curve times must be positive and finite");
    if (i > 0) require(times[i] > times[i - 1], "curve times must be strictly increasing");
    require(std::isfinite(values[i]), "curve values must be finite");
    if (std_errors) require((*std_errors)[i] >= 0.0, "curve stderr must be nonnegative");
  }
}

std::vector<double> linear_grid(double t_min, double t_max, int n_points) {
  require(n_points >= 2, "grid needs at least two points");
  require(std::isfinite(t_min) && std::isfinite(t_max) && t_min < t_max, "grid needs t_min < t_max");
  std::vector<double> g(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) g[static_cast<std::size_t>(i)] = t_min + (t_max - t_min) * i / (n_points - 1);
  g.back() = t_max;
  return g;
}

std::vector<double> geometric_grid(double t_min, double t_max, int n_points) {
  require(n_points >= 2, "grid needs at least two points");
  require(t_min > 0.0 && t_min < t_max && std::isfinite(t_max), "geometric grid needs 0 < t_min < t_max");
  std::vector<double> g(static_cast<std::size_t>(n_points));
  const double step = std::log(t_max / t_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) g[static_cast<std::size_t>(i)] = t_min * std::exp(step * i);
  g.front() = t_min;
  g.back() = t_max;
  return g;
}

double acf_finite(const SOUModel& model, double t, double s) {
  require_time(t);
  require_time(s);
  const double m = std::min(t, s);
  const double gap = std::abs(t - s);
  double sum = model.c0() * model.c0() * m;
  const auto& rates = model.rates();
  const auto& coef = model.coefficients();
  for (std::size_t k = 0; k < rates.size(); ++k) {
    sum += coef[k] * coef[k] * std::exp(-rates[k] * gap) * ou_variance(rates[k], m);
  }
  return model.d() * sum;
}

MSDCurve msd_finite(const SOUModel& model, const std::vector<double>& times) {
  return evaluate_curve(times, Provenance::AnalyticFinite, [&](double t) { return acf_finite(model, t, t); });
}

double increment_variance(const SOUModel& model, double t, double s) {
  require_time(t);
  require_time(s);
  const double lo = std::min(t, s);
  const double gap = std::abs(t - s);
  double sum = model.c0() * model.c0() * gap;
  const auto& rates = model.rates();
  const auto& coef = model.coefficients();
  for (std::size_t k = 0; k < rates.size(); ++k) {
    const double decay = -std::expm1(-rates[k] * gap);
    sum += coef[k] * coef[k] * (decay * decay * ou_variance(rates[k], lo) + ou_variance(rates[k], gap));
  }
  return model.d() * sum;
}

double msd_limit_at(const ShapeFunction& shape, const MeasureDensity& measure, double t) {
  require(std::isfinite(t) && t > 0.0, "limit MSD needs t > 0");
  if (const auto* leb = std::get_if<Lebesgue>(&measure)) {
    return leb->scale * quad::integrate_shape(shape, t, [t](double phi) { return limit_kernel(phi, t); });
  }
  if (const auto* dirac = std::get_if<Dirac>(&measure)) {
    require(dirac->x0 >= 0.0 && dirac->x0 <= 1.0, "Dirac location must lie in [0,1]");
    return dirac->mass * limit_kernel(shape(dirac->x0), t);
  }
  const auto& tab = std::get<Tabulated>(measure);
  double sum = 0.0;
  for (const auto& a : tab.atoms) sum += a.mass * limit_kernel(shape(a.location), t);
  return sum;
}

MSDCurve msd_limit(const ShapeFunction& shape, const MeasureDensity& measure, const std::vector<double>& times) {
  return evaluate_curve(times, Provenance::AnalyticLimit,
                        [&](double t) { return msd_limit_at(shape, measure, t); });
}

double msd_limit_at(const ProductShape& shape, double t) {
  const std::size_t dims = shape.factors.size();
  require(dims >= 1 && dims <= 3, "tensor-product limit MSD supports 1 to 3 factors");
  require(std::isfinite(t) && t > 0.0, "limit MSD needs t > 0");
  if (dims == 1) return msd_limit_at(shape.factors[0], Lebesgue{}, t);

  auto evaluate = [&](int level) {
    std::vector<quad::ShapeRule> rules;
    std::vector<std::vector<double>> decay;
    for (const auto& f : shape.factors) {
      rules.push_back(quad::shape_rule(f, t, level));
      std::vector<double> e(rules.back().phi.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(-2.0 * rules.back().phi[i] * t);
      decay.push_back(std::move(e));
    }
    auto cell = [t](double phi_sum, double decay_prod) {
      if (phi_sum * t < kLimitSeries) return limit_kernel(phi_sum, t);
      return (1.0 - decay_prod) / (2.0 * phi_sum);
    };
    const auto& r0 = rules[0];
    const auto& r1 = rules[1];
    double total = 0.0;
    for (std::size_t i = 0; i < r0.x.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < r1.x.size(); ++j) {
        const double p01 = r0.phi[i] + r1.phi[j];
        const double e01 = decay[0][i] * decay[1][j];
        if (dims == 2) {
          row += r1.w[j] * cell(p01, e01);
          continue;
        }
        const auto& r2 = rules[2];
        double inner = 0.0;
        for (std::size_t k = 0; k < r2.x.size(); ++k) inner += r2.w[k] * cell(p01 + r2.phi[k], e01 * decay[2][k]);
        row += r1.w[j] * inner;
      }
      total += r0.w[i] * row;
    }
    return total;
  };
  return quad::converge_levels(evaluate, dims == 2 ? 6 : 3, "product-shape limit MSD");
}

MSDCurve msd_limit(const ProductShape& shape, const std::vector<double>& times) {
  return evaluate_curve(times, Provenance::AnalyticLimit, [&](double t) { return msd_limit_at(shape, t); });
}

double phi_laplace(const ShapeFunction& shape, double s) {
  require(std::isfinite(s) && s >= 0.0, "Laplace integral needs s >= 0");
  if (s == 0.0) return 1.0;
  return quad::integrate_shape(shape, s, [s](double phi) { return std::exp(-2.0 * phi * s); });
}

double phi_laplace(const ProductShape& shape, double s) {
  require(!shape.factors.empty(), "product shape has no factors");
  double p = 1.0;
  for (const auto& f : shape.factors) p *= phi_laplace(f, s);
  return p;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Power:
      return "power";
    case Regime::Logarithmic:
      return "logarithmic";
    case Regime::Bounded:
      return "bounded";
  }
  return "unknown";
}

AsymptoticPrediction asymptotic_prediction(double rho, double a0, double zero_endpoints) {
  require(std::isfinite(rho) && rho > 0.0, "asymptotic prediction needs rho > 0");
  require(std::isfinite(a0) && a0 > 0.0, "asymptotic prediction needs a0 > 0");
  require(zero_endpoints > 0.0, "endpoint weight must be positive");
  AsymptoticPrediction p;
  std::ostringstream os;
  os.precision(10);
  if (rho == 1.0) {
    p.regime = Regime::Logarithmic;
    p.nu = 0.0;
    p.prefactor = zero_endpoints / (2.0 * a0);
    os << "sigma(t) ~ " << *p.prefactor << " ln t";
  } else if (rho < 1.0) {
    p.regime = Regime::Bounded;
    p.nu = 0.0;
    os << "sigma(t) bounded as t -> infinity";
  } else {
    p.regime = Regime::Power;
    p.nu = 1.0 - 1.0 / rho;
    // Integrating the Laplace tail Phi(s) ~ w Gamma(1/rho) / (rho (2 a0 s)^{1/rho}).
    p.prefactor = zero_endpoints * std::tgamma(1.0 / rho) / (rho * std::pow(2.0 * a0, 1.0 / rho) * p.nu);
    os << "sigma(t) ~ " << *p.prefactor << " t^" << p.nu;
  }
  p.description = os.str();
  return p;
}

AsymptoticPrediction asymptotic_prediction(const ShapeFunction& shape) {
  require(shape.rho.has_value() && shape.a0.has_value(), "shape '" + shape.name + "' has no Frobenius data");
  return asymptotic_prediction(*shape.rho, *shape.a0, shape.symmetric ? 2.0 : 1.0);
}

MSDCurve trace_msd(const WeightedGraph& g, double sigma, const std::vector<double>& times) {
  require(g.n_vertices() <= kMaxTraceVertices,
          "trace formula limited to n <= " + std::to_string(kMaxTraceVertices) + " vertices");
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be positive");
  std::vector<double> lam = eig_values(g.laplacian());
  double radius = 0.0;
  for (double v : lam) radius = std::max(radius, std::abs(v));
  for (double& v : lam) {
    if (std::abs(v) <= kMergeTolerance * radius) v = 0.0;
  }
  const double n = static_cast<double>(g.n_vertices());
  return evaluate_curve(times, Provenance::AnalyticFinite, [&](double t) {
    double sum = 0.0;
    for (double v : lam) sum += (v == 0.0) ? t : ou_variance(v, t);
    return sigma * sigma * sum / n;
  });
}

TightnessCheck tightness_bound_check(const SOUModel& model, double t, double s) {
  const double var = increment_variance(model, t, s);
  const double bound = model.d() * model.total_mass() * std::abs(t - s);
  TightnessCheck c;
  c.lhs = 3.0 * var * var;
  c.rhs = 3.0 * bound * bound;
  c.pass = c.lhs <= c.rhs * (1.0 + 1e-12);
  return c;
}

std::string curve_to_csv(const MSDCurve& curve, const std::vector<std::string>& header_lines) {
  curve.validate();
  std::ostringstream os;
  for (const auto& line : header_lines) os << "# " << line << '\n';
  os << "# provenance: " << provenance_name(curve.provenance) << '\n';
  os << (curve.std_errors ? "t,msd,stderr\n" : "t,msd\n");
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    os << format_double(curve.times[i]) << ',' << format_double(curve.values[i]);
    if (curve.std_errors) os << ',' << format_double((*curve.std_errors)[i]);
    os << '\n';
  }
  return os.str();
}

MSDCurve curve_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  MSDCurve c;
  c.provenance = Provenance::AnalyticFinite;
  bool have_header = false;
  bool with_stderr = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# provenance: ";
      if (line.rfind(key, 0) == 0) c.provenance = parse_provenance(line.substr(key.size()));
      continue;
    }
    if (!have_header) {
      require(line == "t,msd" || line == "t,msd,stderr", "MSD CSV header must be 't,msd' or 't,msd,stderr'");
      with_stderr = line == "t,msd,stderr";
      if (with_stderr) c.std_errors.emplace();
      have_header = true;
      continue;
    }
    std::vector<double> fields;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      try {
        std::size_t used = 0;
        fields.push_back(std::stod(cell, &used));
        require(used == cell.size(), "trailing characters");
      } catch (const std::exception&) {
        throw InvalidArgument("MSD CSV line " + std::to_string(line_no) + ": cannot parse '" + cell + "'");
      }
    }
    require(fields.size() == (with_stderr ? 3u : 2u),
            "MSD CSV line " + std::to_string(line_no) + ": wrong number of fields");
    c.times.push_back(fields[0]);
    c.values.push_back(fields[1]);
    if (with_stderr) c.std_errors->push_back(fields[2]);
  }
  require(have_header, "MSD CSV has no header line");
  c.validate();
  return c;
}

nlohmann::json curve_to_json(const MSDCurve& curve) {
  nlohmann::json j = {{"provenance", provenance_name(curve.provenance)},
                      {"times", curve.times},
                      {"values", curve.values}};
  if (curve.std_errors) j["stderr"] = *curve.std_errors;
  return j;
}

}  // namespace sou
