#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "graph.hpp"
#include "model.hpp"

namespace sou {

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{2} << 30;

/// Sampled paths on a fixed grid. Row r = path * n_components + component,
/// stored row-major against `times`.
struct PathEnsemble {
  std::vector<double> times;
  std::size_t n_paths = 0;
  int n_components = 1;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string model_digest;

  double at(std::size_t path, int component, std::size_t time_index) const {
    return values[(path * static_cast<std::size_t>(n_components) + static_cast<std::size_t>(component)) *
                      times.size() +
                  time_index];
  }
};

/// Standard error of an MSD estimate from M Gaussian paths in d components:
/// Var(sum_c x_c^2) = 2 msd^2 / d.
inline double gaussian_msd_stderr(double msd, int d, std::size_t n_paths) {
  return msd * std::sqrt(2.0 / (static_cast<double>(d) * static_cast<double>(n_paths)));
}

struct SampleOptions {
  unsigned workers = 0;  // 0 selects the hardware default
  std::size_t memory_budget = kDefaultMemoryBudget;
};

/// Exact-in-law sampling: every OU mode advances by its Gaussian transition
/// and the Brownian mode by N(0, dt). Mode k of component c in path p draws
/// from the Philox substream (seed, p, c (M + 1) + k), k = 0 the Brownian mode.
PathEnsemble sample_paths(const SOUModel& model, const std::vector<double>& times, std::size_t n_paths,
                          std::uint64_t seed, const SampleOptions& opts = {});

/// Monte Carlo MSD without storing paths. Paths are generated in chunks and
/// reduced in path order, so the result does not depend on `workers`.
MSDCurve simulate_msd(const SOUModel& model, const std::vector<double>& times, std::size_t n_paths,
                      std::uint64_t seed, std::size_t chunk_paths = 1024, const SampleOptions& opts = {});

struct EulerOptions {
  std::size_t bead = 0;
  std::size_t n_records = 50;
  unsigned workers = 0;
};

inline constexpr std::size_t kMaxEulerVertices = 256;

/// Euler-Maruyama on dx = L x dt + sigma dW for the whole network, returning
/// one bead. Requires dt <= 0.1 / lambda_max.
PathEnsemble euler_full_network(const WeightedGraph& g, double sigma, double dt, double t_end, std::size_t n_paths,
                                std::uint64_t seed, const EulerOptions& opts = {});

/// Centre of mass: Brownian motion with coefficient sigma / sqrt(n).
PathEnsemble center_of_mass_paths(const WeightedGraph& g, double sigma, const std::vector<double>& times,
                                  std::size_t n_paths, std::uint64_t seed);

std::string ensemble_to_csv(const PathEnsemble& e);

}  // namespace sou
