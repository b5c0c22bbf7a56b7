#include "specs.hpp"

#include <cmath>
#include <set>

#include "errors.hpp"

namespace sou::specs {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  require(j.is_object(), what + " must be a JSON object");
  for (const auto& [key, _] : j.items()) require(allowed.count(key) != 0, "unknown " + what + " key: " + key);
}

template <class T>
T field(const json& j, const std::string& key, const std::string& what) {
  require(j.contains(key), what + " is missing required key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(what + " key '" + key + "' has the wrong type");
  }
}

template <class T>
T field_or(const json& j, const std::string& key, T fallback, const std::string& what) {
  return j.contains(key) ? field<T>(j, key, what) : fallback;
}

std::string kind_of(const json& j, const char* key, const std::string& what) {
  require(j.is_object(), what + " must be a JSON object");
  return field<std::string>(j, key, what);
}

}  // namespace

SpectrumMethod parse_spectrum_method(const std::string& name) {
  if (name == "auto") return SpectrumMethod::Auto;
  if (name == "dense") return SpectrumMethod::Dense;
  if (name == "closed") return SpectrumMethod::Closed;
  throw InvalidArgument("unknown spectrum method: " + name + " (expected auto, dense or closed)");
}

WeightedGraph build_graph(const json& spec) {
  const std::string fam = kind_of(spec, "family", "graph spec");
  const std::string what = fam + " graph spec";
  if (fam == "rouse") {
    check_keys(spec, {"family", "n", "kappa"}, what);
    return rouse_cycle(field<int>(spec, "n", what), field_or<double>(spec, "kappa", 1.0, what));
  }
  if (fam == "circulant") {
    check_keys(spec, {"family", "n", "kappas"}, what);
    return circulant_chain(field<int>(spec, "n", what), field<std::vector<double>>(spec, "kappas", what));
  }
  if (fam == "repulsive") {
    check_keys(spec, {"family", "n", "order"}, what);
    return repulsive_circulant(field<int>(spec, "n", what), field<int>(spec, "order", what));
  }
  if (fam == "complete") {
    check_keys(spec, {"family", "n", "kappa"}, what);
    const int n = field<int>(spec, "n", what);
    require(n >= 2, "complete graph needs n >= 2");
    return complete_graph(n, field_or<double>(spec, "kappa", complete_graph_unit_kappa(n), what));
  }
  if (fam == "hypercube") {
    check_keys(spec, {"family", "n_dims", "kappa"}, what);
    const int dims = field<int>(spec, "n_dims", what);
    require(dims >= 1, "hypercube needs n_dims >= 1");
    return hypercube(dims, field_or<double>(spec, "kappa", hypercube_unit_kappa(dims), what));
  }
  if (fam == "product") {
    check_keys(spec, {"family", "of"}, what);
    const json& of = spec.at("of");
    require(of.is_array() && of.size() >= 2, "product graph needs at least two factors in 'of'");
    WeightedGraph g = build_graph(of[0]);
    for (std::size_t i = 1; i < of.size(); ++i) g = cartesian_product(g, build_graph(of[i]));
    return g;
  }
  if (fam == "explicit") {
    check_keys(spec, {"family", "graph"}, what);
    require(spec.contains("graph"), "explicit graph spec needs 'graph'");
    return WeightedGraph::from_json(spec.at("graph"));
  }
  throw InvalidArgument("unknown graph family: " + fam);
}

bool has_closed_form(const json& spec) {
  const std::string fam = kind_of(spec, "family", "graph spec");
  if (fam == "product") {
    for (const auto& f : spec.at("of"))
      if (!has_closed_form(f)) return false;
    return true;
  }
  return fam != "explicit";
}

Spectrum graph_spectrum(const json& spec, SpectrumMethod method) {
  const bool closed = has_closed_form(spec);
  if (method == SpectrumMethod::Dense || (method == SpectrumMethod::Auto && !closed)) {
    return eig_spectrum(build_graph(spec).laplacian());
  }
  require(closed, "graph family has no closed-form spectrum; use the dense method");
  // Validate the spec with the same rules as the constructors; building is
  // cheap next to any downstream use except for the largest products.
  const std::string fam = spec.at("family").get<std::string>();
  const std::string what = fam + " graph spec";
  if (fam == "rouse") {
    check_keys(spec, {"family", "n", "kappa"}, what);
    const int n = field<int>(spec, "n", what);
    const double kappa = field_or<double>(spec, "kappa", 1.0, what);
    require(n >= 3, "rouse cycle needs n >= 3");
    require(kappa > 0.0 && std::isfinite(kappa), "rouse cycle needs kappa > 0");
    return circulant_spectrum(n, {kappa});
  }
  if (fam == "circulant") {
    check_keys(spec, {"family", "n", "kappas"}, what);
    const auto kappas = field<std::vector<double>>(spec, "kappas", what);
    for (double k : kappas) require(k >= 0.0, "circulant chain weights must be nonnegative");
    return circulant_spectrum(field<int>(spec, "n", what), kappas);
  }
  if (fam == "repulsive") {
    check_keys(spec, {"family", "n", "order"}, what);
    const int n = field<int>(spec, "n", what);
    const int order = field<int>(spec, "order", what);
    require(order >= 1 && 4 * order < n, "repulsive order too large for n (need 2 order < n/2)");
    return repulsive_spectrum(n, order);
  }
  if (fam == "complete") {
    check_keys(spec, {"family", "n", "kappa"}, what);
    const int n = field<int>(spec, "n", what);
    require(n >= 2, "complete graph needs n >= 2");
    return complete_spectrum(n, field_or<double>(spec, "kappa", complete_graph_unit_kappa(n), what));
  }
  if (fam == "hypercube") {
    check_keys(spec, {"family", "n_dims", "kappa"}, what);
    const int dims = field<int>(spec, "n_dims", what);
    require(dims >= 1, "hypercube needs n_dims >= 1");
    if (dims > kMaxHypercubeDims) throw ResourceLimit("hypercube limited to n_dims <= 14");
    return hypercube_spectrum(dims, field_or<double>(spec, "kappa", hypercube_unit_kappa(dims), what));
  }
  check_keys(spec, {"family", "of"}, what);
  const json& of = spec.at("of");
  require(of.is_array() && of.size() >= 2, "product graph needs at least two factors in 'of'");
  Spectrum s = graph_spectrum(of[0], SpectrumMethod::Closed);
  for (std::size_t i = 1; i < of.size(); ++i) {
    const Spectrum next = graph_spectrum(of[i], SpectrumMethod::Closed);
    if (static_cast<double>(s.n_modes()) * static_cast<double>(next.n_modes()) >
        static_cast<double>(kMaxProductVertices)) {
      throw ResourceLimit("product graph limited to 65536 vertices");
    }
    s = kronecker_sum_spectrum(s, next);
  }
  return s;
}

std::string graph_family(const json& spec) {
  const std::string fam = kind_of(spec, "family", "graph spec");
  if (fam != "product") return fam;
  std::string out = "product(";
  bool first = true;
  for (const auto& f : spec.at("of")) {
    out += (first ? "" : ",") + graph_family(f);
    first = false;
  }
  return out + ")";
}

SOUModel build_model(const json& spec) {
  const std::string kind = kind_of(spec, "kind", "model spec");
  const std::string what = kind + " model spec";
  if (kind == "graph") {
    check_keys(spec, {"kind", "graph", "sigma", "d", "spectrum_method"}, what);
    require(spec.contains("graph"), "graph model spec needs 'graph'");
    const json& g = spec.at("graph");
    const double sigma = field_or<double>(spec, "sigma", 1.0, what);
    const int d = field_or<int>(spec, "d", 1, what);
    const auto method = parse_spectrum_method(field_or<std::string>(spec, "spectrum_method", "auto", what));
    if (method != SpectrumMethod::Dense && has_closed_form(g)) {
      // Closed-form families are circulant, complete, hypercube or products
      // of these, all vertex-transitive.
      return distinguished_model_from_spectrum(graph_spectrum(g, SpectrumMethod::Closed), sigma, d);
    }
    return distinguished_model(build_graph(g), sigma, d);
  }
  if (kind == "power_law") {
    check_keys(spec, {"kind", "rho", "tau1", "n", "c0", "coefficient", "sigma", "d"}, what);
    const int n = field<int>(spec, "n", what);
    const Spectrum s = power_law_spectrum(field<double>(spec, "rho", what), field_or<double>(spec, "tau1", 1.0, what), n);
    const double unit = 1.0 / std::sqrt(static_cast<double>(n));
    const Spectrum modes = nonzero_part(s);
    return sou_model(modes, std::vector<double>(modes.n_modes(), field_or<double>(spec, "coefficient", unit, what)),
                     field_or<double>(spec, "c0", unit, what), field_or<double>(spec, "sigma", 1.0, what),
                     field_or<int>(spec, "d", 1, what));
  }
  if (kind == "random_coefficients") {
    check_keys(spec, {"kind", "graph", "seed", "law"}, what);
    const std::string law = field_or<std::string>(spec, "law", "uniform", what);
    CoefficientLaw l;
    if (law == "uniform") {
      l = CoefficientLaw::Uniform;
    } else if (law == "lognormal") {
      l = CoefficientLaw::LogNormal;
    } else if (law == "constant") {
      l = CoefficientLaw::Constant;
    } else {
      throw InvalidArgument("unknown coefficient law: " + law + " (expected uniform, lognormal or constant)");
    }
    require(spec.contains("graph"), "random_coefficients model spec needs 'graph'");
    return random_coefficient_model(graph_spectrum(spec.at("graph")), field<std::uint64_t>(spec, "seed", what), l);
  }
  if (kind == "random_string") {
    check_keys(spec, {"kind", "n", "kappa", "sigma"}, what);
    return random_string_model(field<int>(spec, "n", what), field_or<double>(spec, "kappa", 1.0, what),
                               field_or<double>(spec, "sigma", 1.0, what));
  }
  if (kind == "explicit") {
    check_keys(spec, {"kind", "model"}, what);
    require(spec.contains("model"), "explicit model spec needs 'model'");
    return SOUModel::from_json(spec.at("model"));
  }
  throw InvalidArgument("unknown model kind: " + kind);
}

std::string model_family(const json& spec) {
  const std::string kind = kind_of(spec, "kind", "model spec");
  if (kind == "graph" || kind == "random_coefficients") {
    const std::string base = graph_family(spec.at("graph"));
    return kind == "graph" ? base : "random-" + base;
  }
  return kind;
}

bool is_product_shape(const json& spec) { return kind_of(spec, "kind", "shape spec") == "product"; }

ShapeFunction build_shape(const json& spec) {
  const std::string kind = kind_of(spec, "kind", "shape spec");
  const std::string what = kind + " shape spec";
  if (kind == "rouse") {
    check_keys(spec, {"kind", "kappa"}, what);
    return rouse_shape(field_or<double>(spec, "kappa", 1.0, what));
  }
  if (kind == "circulant") {
    check_keys(spec, {"kind", "kappas"}, what);
    return circulant_shape(field<std::vector<double>>(spec, "kappas", what));
  }
  if (kind == "repulsive") {
    check_keys(spec, {"kind", "order"}, what);
    return repulsive_shape(field<int>(spec, "order", what));
  }
  if (kind == "power") {
    check_keys(spec, {"kind", "rho", "scale"}, what);
    return power_shape(field<double>(spec, "rho", what), field_or<double>(spec, "scale", 1.0, what));
  }
  if (kind == "linear") {
    check_keys(spec, {"kind", "slope"}, what);
    return linear_shape(field_or<double>(spec, "slope", 1.0, what));
  }
  if (kind == "product") throw InvalidArgument("product shape used where a one-dimensional shape is required");
  throw InvalidArgument("unknown shape kind: " + kind);
}

ProductShape build_product_shape(const json& spec) {
  ProductShape p;
  if (!is_product_shape(spec)) {
    p.factors.push_back(build_shape(spec));
    return p;
  }
  check_keys(spec, {"kind", "factors"}, "product shape spec");
  require(spec.contains("factors") && spec.at("factors").is_array() && !spec.at("factors").empty(),
          "product shape needs a non-empty 'factors' array");
  for (const auto& f : spec.at("factors")) p.factors.push_back(build_shape(f));
  return p;
}

std::string shape_family(const json& spec) {
  const std::string kind = kind_of(spec, "kind", "shape spec");
  if (kind != "product") return kind;
  std::string out = "product(";
  bool first = true;
  for (const auto& f : spec.at("factors")) {
    out += (first ? "" : ",") + shape_family(f);
    first = false;
  }
  return out + ")";
}

MeasureDensity build_measure(const json& spec) {
  const std::string kind = kind_of(spec, "kind", "measure spec");
  const std::string what = kind + " measure spec";
  if (kind == "lebesgue") {
    check_keys(spec, {"kind", "scale"}, what);
    const double scale = field_or<double>(spec, "scale", 1.0, what);
    require(scale >= 0.0 && std::isfinite(scale), "Lebesgue scale must be nonnegative");
    return Lebesgue{scale};
  }
  if (kind == "dirac") {
    check_keys(spec, {"kind", "x0", "mass"}, what);
    const double x0 = field<double>(spec, "x0", what);
    const double mass = field_or<double>(spec, "mass", 1.0, what);
    require(x0 >= 0.0 && x0 <= 1.0, "Dirac location must lie in [0,1]");
    require(mass >= 0.0 && std::isfinite(mass), "Dirac mass must be nonnegative");
    return Dirac{x0, mass};
  }
  if (kind == "tabulated") {
    check_keys(spec, {"kind", "atoms"}, what);
    const auto pairs = field<std::vector<std::array<double, 2>>>(spec, "atoms", what);
    Tabulated t;
    for (const auto& [loc, mass] : pairs) {
      require(loc >= 0.0 && loc <= 1.0, "atom locations must lie in [0,1]");
      require(mass >= 0.0 && std::isfinite(mass), "atom masses must be nonnegative");
      t.atoms.push_back({loc, mass});
    }
    return t;
  }
  throw InvalidArgument("unknown measure kind: " + kind);
}

}  // namespace sou::specs
