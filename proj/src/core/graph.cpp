#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>

#include "errors.hpp"

namespace sou {

LaplacianMatrix::LaplacianMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  require(entries_.rows() == entries_.cols(), "Laplacian must be square");
}

WeightedGraph::WeightedGraph(std::size_t n_vertices, std::vector<Edge> edges,
                             std::string label, bool allow_negative)
    : n_(n_vertices), edges_(std::move(edges)), label_(std::move(label)), has_negative_(false) {
  require(n_ >= 1, "graph needs at least one vertex");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto& e : edges_) {
    require(e.i < n_ && e.j < n_, "edge endpoint out of range");
    require(e.i != e.j, "self loops are not allowed");
    require(std::isfinite(e.kappa), "edge weight must be finite");
    if (e.i > e.j) std::swap(e.i, e.j);
    require(seen.emplace(e.i, e.j).second, "duplicate edge between " + std::to_string(e.i) +
                                               " and " + std::to_string(e.j));
    if (e.kappa < 0.0) has_negative_ = true;
  }
  require(allow_negative || !has_negative_, "negative spring constants are only valid for repulsive circulants");
}

LaplacianMatrix WeightedGraph::laplacian() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges_) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    adj(i, j) = e.kappa;
    adj(j, i) = e.kappa;
  }
  Eigen::MatrixXd lap = adj;
  for (Eigen::Index i = 0; i < n; ++i) lap(i, i) = -adj.row(i).sum();
  return LaplacianMatrix(std::move(lap));
}

std::vector<double> WeightedGraph::degrees() const {
  std::vector<double> deg(n_, 0.0);
  for (const auto& e : edges_) {
    deg[e.i] += e.kappa;
    deg[e.j] += e.kappa;
  }
  return deg;
}

bool WeightedGraph::rows_equivalent() const {
  if (n_ <= 1) return true;
  const auto lap = laplacian();
  auto sorted_row = [&](std::size_t r) {
    std::vector<double> row(n_);
    for (std::size_t c = 0; c < n_; ++c) row[c] = lap(r, c);
    std::sort(row.begin(), row.end());
    return row;
  };
  const auto ref = sorted_row(0);
  for (std::size_t r = 1; r < n_; ++r) {
    const auto row = sorted_row(r);
    for (std::size_t c = 0; c < n_; ++c) {
      if (std::abs(row[c] - ref[c]) > 1e-12 * (1.0 + std::abs(ref[c]))) return false;
    }
  }
  return true;
}

nlohmann::json WeightedGraph::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : edges_) edges.push_back({e.i, e.j, e.kappa});
  return {{"label", label_}, {"n_vertices", n_}, {"edges", std::move(edges)}};
}

WeightedGraph WeightedGraph::from_json(const nlohmann::json& j) {
  require(j.is_object(), "graph document must be an object");
  for (const auto& [key, _] : j.items()) {
    require(key == "label" || key == "n_vertices" || key == "edges", "unknown graph key: " + key);
  }
  try {
    const auto n = j.at("n_vertices").get<std::size_t>();
    const auto label = j.value("label", std::string{});
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      require(e.is_array() && e.size() == 3, "edges must be [i, j, kappa] triples");
      edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
    }
    const bool repulsive = label.find("repulsive") != std::string::npos;
    return WeightedGraph(n, std::move(edges), label, repulsive);
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("malformed graph document: ") + ex.what());
  }
}

namespace {

std::string format_weights(const std::vector<double>& w) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  return os.str();
}

WeightedGraph build_circulant(int n, const std::vector<double>& kappas, std::string label,
                              bool allow_negative) {
  require(n >= 1, "circulant needs n >= 1");
  const auto k_max = static_cast<int>(kappas.size());
  require(2 * k_max < n, "circulant range K must satisfy K < n/2 (wrap-around would duplicate edges)");
  std::vector<Edge> edges;
  for (int j = 1; j <= k_max; ++j) {
    const double w = kappas[static_cast<std::size_t>(j - 1)];
    require(std::isfinite(w), "circulant weights must be finite");
    if (w == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>((i + j) % n), w});
    }
  }
  return WeightedGraph(static_cast<std::size_t>(n), std::move(edges), std::move(label), allow_negative);
}

}  // namespace

WeightedGraph rouse_cycle(int n, double kappa) {
  require(n >= 3, "rouse cycle needs n >= 3");
  require(kappa > 0.0 && std::isfinite(kappa), "rouse cycle needs kappa > 0");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>((i + 1) % n), kappa});
  }
  std::ostringstream label;
  label.precision(17);
  label << "rouse(n=" << n << ",kappa=" << kappa << ")";
  return WeightedGraph(static_cast<std::size_t>(n), std::move(edges), label.str());
}

WeightedGraph circulant_chain(int n, const std::vector<double>& kappas) {
  for (double w : kappas) require(w >= 0.0, "circulant_chain takes nonnegative weights; use repulsive_circulant");
  return build_circulant(n, kappas,
                         "circulant(n=" + std::to_string(n) + ",kappas=" + format_weights(kappas) + ")",
                         false);
}

std::vector<double> repulsive_weights(int order) {
  require(order >= 1, "repulsive order must be >= 1");
  constexpr int kPoints = 4096;
  const double pi = std::numbers::pi;
  const int k_max = 2 * order;
  std::vector<std::complex<double>> coeff(static_cast<std::size_t>(k_max + 1));
  for (int p = 0; p < kPoints; ++p) {
    const double x = static_cast<double>(p) / kPoints;
    const std::complex<double> base = std::exp(std::complex<double>(0.0, pi * x)) -
                                      std::exp(std::complex<double>(0.0, -pi * x));
    const std::complex<double> f = std::pow(base, 2 * order);
    for (int j = 0; j <= k_max; ++j) {
      coeff[static_cast<std::size_t>(j)] += std::exp(std::complex<double>(0.0, -2.0 * pi * j * x)) * f;
    }
  }
  double scale = 0.0;
  std::vector<double> w(static_cast<std::size_t>(k_max));
  for (int j = 1; j <= k_max; ++j) {
    w[static_cast<std::size_t>(j - 1)] = coeff[static_cast<std::size_t>(j)].real() / kPoints;
    scale = std::max(scale, std::abs(w[static_cast<std::size_t>(j - 1)]));
  }
  // Orientation: the diffusive shape at x = 1/2 must be positive.
  double phi_half = 0.0;
  for (int j = 1; j <= k_max; ++j) {
    const double s = std::sin(pi * j * 0.5);
    phi_half += 4.0 * w[static_cast<std::size_t>(j - 1)] * s * s;
  }
  const double sign = phi_half > 0.0 ? 1.0 : -1.0;
  for (auto& v : w) {
    v = std::abs(v) < 1e-12 * scale ? 0.0 : sign * v;
    // The inversion is exact up to rounding and the coefficients are integers;
    // snapping removes the residue that would otherwise swamp phi near 0.
    if (std::abs(v - std::round(v)) < 1e-8 * scale) v = std::round(v);
  }
  while (!w.empty() && w.back() == 0.0) w.pop_back();
  return w;
}

WeightedGraph repulsive_circulant(int n, int order) {
  require(order >= 1, "repulsive order must be >= 1");
  require(4 * order < n, "repulsive order too large for n (need 2*order < n/2)");
  return build_circulant(n, repulsive_weights(order),
                         "repulsive(n=" + std::to_string(n) + ",order=" + std::to_string(order) + ")", true);
}

WeightedGraph complete_graph(int n, double kappa) {
  require(n >= 2, "complete graph needs n >= 2");
  require(kappa > 0.0 && std::isfinite(kappa), "complete graph needs kappa > 0");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), kappa});
  std::ostringstream label;
  label.precision(17);
  label << "complete(n=" << n << ",kappa=" << kappa << ")";
  return WeightedGraph(static_cast<std::size_t>(n), std::move(edges), label.str());
}

WeightedGraph hypercube(int n_dims, double kappa) {
  require(n_dims >= 1, "hypercube needs n_dims >= 1");
  if (n_dims > kMaxHypercubeDims) {
    throw ResourceLimit("hypercube limited to n_dims <= " + std::to_string(kMaxHypercubeDims));
  }
  require(kappa > 0.0 && std::isfinite(kappa), "hypercube needs kappa > 0");
  const std::size_t n = std::size_t{1} << n_dims;
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < n; ++v) {
    for (int b = 0; b < n_dims; ++b) {
      const std::size_t u = v ^ (std::size_t{1} << b);
      if (v < u) edges.push_back({v, u, kappa});
    }
  }
  std::ostringstream label;
  label.precision(17);
  label << "hypercube(n_dims=" << n_dims << ",kappa=" << kappa << ")";
  return WeightedGraph(n, std::move(edges), label.str());
}

WeightedGraph cartesian_product(const WeightedGraph& g1, const WeightedGraph& g2) {
  const std::size_t n1 = g1.n_vertices();
  const std::size_t n2 = g2.n_vertices();
  if (n1 * n2 > kMaxProductVertices) {
    throw ResourceLimit("cartesian product exceeds " + std::to_string(kMaxProductVertices) + " vertices");
  }
  // Vertex (a, b) maps to a * n2 + b, so L = L1 (x) I + I (x) L2.
  std::vector<Edge> edges;
  edges.reserve(g1.edges().size() * n2 + g2.edges().size() * n1);
  for (const auto& e : g1.edges())
    for (std::size_t b = 0; b < n2; ++b) edges.push_back({e.i * n2 + b, e.j * n2 + b, e.kappa});
  for (std::size_t a = 0; a < n1; ++a)
    for (const auto& e : g2.edges()) edges.push_back({a * n2 + e.i, a * n2 + e.j, e.kappa});
  return WeightedGraph(n1 * n2, std::move(edges), "product(" + g1.label() + "," + g2.label() + ")",
                       g1.has_negative_weights() || g2.has_negative_weights());
}

}  // namespace sou
