#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

namespace sou {

struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double kappa = 0.0;  // spring constant, 1/time
};

/// Dense symmetric Laplacian L = A - D. Attractive springs give a
/// nonpositive diagonal; the diffusive spectrum is eig(-L).
class LaplacianMatrix {
 public:
  explicit LaplacianMatrix(Eigen::MatrixXd entries);

  std::size_t n() const { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Eigen::MatrixXd entries_;
};

/// Undirected weighted spring graph. Immutable once built; edges are
/// validated on construction (in range, no self loops, no duplicate pairs).
class WeightedGraph {
 public:
  WeightedGraph(std::size_t n_vertices, std::vector<Edge> edges,
                std::string label, bool allow_negative = false);

  std::size_t n_vertices() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& label() const { return label_; }
  bool has_negative_weights() const { return has_negative_; }

  LaplacianMatrix laplacian() const;

  /// Vertex degrees (sum of incident weights).
  std::vector<double> degrees() const;

  /// Necessary condition for vertex transitivity: every Laplacian row is a
  /// permutation of every other row.
  bool rows_equivalent() const;

  nlohmann::json to_json() const;
  static WeightedGraph from_json(const nlohmann::json& j);

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::string label_;
  bool has_negative_;
};

inline constexpr std::size_t kMaxProductVertices = std::size_t{1} << 16;
inline constexpr int kMaxHypercubeDims = 14;

WeightedGraph rouse_cycle(int n, double kappa);
WeightedGraph circulant_chain(int n, const std::vector<double>& kappas);
WeightedGraph repulsive_circulant(int n, int order);
WeightedGraph complete_graph(int n, double kappa);
WeightedGraph hypercube(int n_dims, double kappa);
WeightedGraph cartesian_product(const WeightedGraph& g1, const WeightedGraph& g2);

/// Spring constants for the order-m repulsive circulant, index j = 1..m.
/// Obtained by trapezoidal Fourier inversion of (e^{i pi x} - e^{-i pi x})^{2m}
/// and signed so that the induced shape 4 sum_j w_j sin^2(pi j x) is
/// nonnegative.
std::vector<double> repulsive_weights(int order);

// Spring constants that reproduce the usual normalisations: complete graph
// nonzero eigenvalue n/(n-1), hypercube eigenvalues 2k/n_dims.
inline double complete_graph_unit_kappa(int n) { return 1.0 / (n - 1); }
inline double hypercube_unit_kappa(int n_dims) { return 1.0 / n_dims; }

}  // namespace sou
