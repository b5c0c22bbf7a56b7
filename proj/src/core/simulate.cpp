#include "simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "spectrum.hpp"

namespace sou {

namespace {

constexpr double kSeriesThreshold = 1e-8;

unsigned resolve_workers(unsigned w) { return w == 0 ? default_workers() : w; }

void check_grid(const std::vector<double>& times) {
  require(!times.empty(), "time grid is empty");
  require(std::isfinite(times[0]) && times[0] >= 0.0, "time grid must start at t >= 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    require(std::isfinite(times[i]) && times[i] > times[i - 1], "time grid must be strictly increasing");
  }
}

// Per-mode exact transition over each grid step, starting from t = 0.
struct Transitions {
  std::size_t n_times = 0;
  std::vector<double> decay;  // modes x n_times
  std::vector<double> noise;  // modes x n_times
  std::vector<double> brownian;

  Transitions(const SOUModel& model, const std::vector<double>& times) : n_times(times.size()) {
    const auto& rates = model.rates();
    decay.resize(rates.size() * n_times);
    noise.resize(rates.size() * n_times);
    brownian.resize(n_times);
    for (std::size_t j = 0; j < n_times; ++j) {
      const double dt = times[j] - (j == 0 ? 0.0 : times[j - 1]);
      brownian[j] = std::sqrt(dt);
      for (std::size_t k = 0; k < rates.size(); ++k) {
        const double x = rates[k] * dt;
        const double var = x < kSeriesThreshold ? dt * (1.0 - x + (2.0 / 3.0) * x * x)
                                                : -std::expm1(-2.0 * x) / (2.0 * rates[k]);
        decay[k * n_times + j] = std::exp(-x);
        noise[k * n_times + j] = std::sqrt(var);
      }
    }
  }
};

void generate_component(const SOUModel& model, const Transitions& tr, std::uint64_t seed, std::size_t path,
                        int component, double* out) {
  const std::size_t n_times = tr.n_times;
  const std::size_t n_modes = model.n_modes();
  const std::uint32_t base = static_cast<std::uint32_t>(static_cast<std::size_t>(component) * (n_modes + 1));
  std::fill(out, out + n_times, 0.0);

  if (model.c0() != 0.0) {
    Substream rng(seed, path, base);
    double b = 0.0;
    for (std::size_t j = 0; j < n_times; ++j) {
      b += tr.brownian[j] * rng.normal();
      out[j] += model.c0() * b;
    }
  }
  const auto& coef = model.coefficients();
  for (std::size_t k = 0; k < n_modes; ++k) {
    if (coef[k] == 0.0) continue;
    Substream rng(seed, path, base + static_cast<std::uint32_t>(k + 1));
    const double* a = &tr.decay[k * n_times];
    const double* s = &tr.noise[k * n_times];
    double z = 0.0;
    for (std::size_t j = 0; j < n_times; ++j) {
      z = a[j] * z + s[j] * rng.normal();
      out[j] += coef[k] * z;
    }
  }
}

void check_substreams(const SOUModel& model) {
  const double needed = static_cast<double>(model.d()) * static_cast<double>(model.n_modes() + 1);
  if (needed > 4294967295.0) throw ResourceLimit("too many modes x components for the substream index space");
}

}  // namespace

PathEnsemble sample_paths(const SOUModel& model, const std::vector<double>& times, std::size_t n_paths,
                          std::uint64_t seed, const SampleOptions& opts) {
  check_grid(times);
  require(n_paths >= 1, "n_paths must be at least 1");
  check_substreams(model);
  const std::size_t rows = n_paths * static_cast<std::size_t>(model.d());
  const double bytes = static_cast<double>(rows) * static_cast<double>(times.size()) * sizeof(double);
  if (bytes > static_cast<double>(opts.memory_budget)) {
    std::ostringstream os;
    os << "ensemble of " << n_paths << " paths x " << times.size() << " times needs " << bytes / (1 << 20)
       << " MiB, over the " << opts.memory_budget / (1 << 20)
       << " MiB budget; use the chunked MSD mode (simulate_msd) instead of storing paths";
    throw ResourceLimit(os.str());
  }

  PathEnsemble e;
  e.times = times;
  e.n_paths = n_paths;
  e.n_components = model.d();
  e.seed = seed;
  e.model_digest = model.digest();
  e.values.assign(rows * times.size(), 0.0);
  const Transitions tr(model, times);
  parallel_for(n_paths, resolve_workers(opts.workers), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p)
      for (int c = 0; c < model.d(); ++c)
        generate_component(model, tr, seed, p, c,
                           &e.values[(p * static_cast<std::size_t>(model.d()) + static_cast<std::size_t>(c)) *
                                     times.size()]);
  });
  return e;
}

MSDCurve simulate_msd(const SOUModel& model, const std::vector<double>& times, std::size_t n_paths,
                      std::uint64_t seed, std::size_t chunk_paths, const SampleOptions& opts) {
  check_grid(times);
  require(times.front() > 0.0, "MSD grid must be strictly positive");
  require(n_paths >= 1, "n_paths must be at least 1");
  require(chunk_paths >= 1, "chunk size must be at least 1");
  check_substreams(model);
  const std::size_t n_times = times.size();
  const Transitions tr(model, times);
  std::vector<double> sums(n_times, 0.0);
  std::vector<double> chunk;
  for (std::size_t first = 0; first < n_paths; first += chunk_paths) {
    const std::size_t count = std::min(chunk_paths, n_paths - first);
    chunk.assign(count * n_times, 0.0);
    parallel_for(count, resolve_workers(opts.workers), [&](std::size_t begin, std::size_t end) {
      std::vector<double> buf(n_times);
      for (std::size_t i = begin; i < end; ++i) {
        double* row = &chunk[i * n_times];
        for (int c = 0; c < model.d(); ++c) {
          generate_component(model, tr, seed, first + i, c, buf.data());
          for (std::size_t j = 0; j < n_times; ++j) row[j] += buf[j] * buf[j];
        }
      }
    });
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < n_times; ++j) sums[j] += chunk[i * n_times + j];
  }
  MSDCurve curve;
  curve.times = times;
  curve.provenance = Provenance::MonteCarlo;
  curve.values.resize(n_times);
  for (std::size_t j = 0; j < n_times; ++j) curve.values[j] = sums[j] / static_cast<double>(n_paths);
  if (n_paths > 1) {
    curve.std_errors.emplace(n_times);
    for (std::size_t j = 0; j < n_times; ++j)
      (*curve.std_errors)[j] = gaussian_msd_stderr(curve.values[j], model.d(), n_paths);
  }
  return curve;
}

PathEnsemble euler_full_network(const WeightedGraph& g, double sigma, double dt, double t_end, std::size_t n_paths,
                                std::uint64_t seed, const EulerOptions& opts) {
  const std::size_t n = g.n_vertices();
  require(n <= kMaxEulerVertices, "full-network integrator limited to n <= " + std::to_string(kMaxEulerVertices));
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be positive");
  require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
  require(std::isfinite(t_end) && t_end >= dt, "t_end must be at least dt");
  require(n_paths >= 1, "n_paths must be at least 1");
  require(opts.bead < n, "recorded bead index out of range");
  require(opts.n_records >= 1, "need at least one record");

  const std::vector<double> lam = eig_values(g.laplacian());
  const double lambda_max = lam.empty() ? 0.0 : std::max(0.0, lam.back());
  if (lambda_max > 0.0 && dt > 0.1 / lambda_max) {
    std::ostringstream os;
    os.precision(6);
    os << "unstable Euler step: dt = " << dt << " exceeds 0.1 / lambda_max = " << 0.1 / lambda_max
       << " (lambda_max = " << lambda_max << ")";
    throw InvalidArgument(os.str());
  }

  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  const std::size_t stride = std::max<std::size_t>(1, steps / opts.n_records);
  PathEnsemble e;
  e.times.push_back(0.0);
  for (std::size_t s = stride; s <= steps; s += stride) e.times.push_back(static_cast<double>(s) * dt);
  e.n_paths = n_paths;
  e.n_components = 1;
  e.seed = seed;
  e.model_digest = hex_digest(fnv1a64(g.to_json().dump()));
  e.values.assign(n_paths * e.times.size(), 0.0);

  const auto& edges = g.edges();
  const double noise = sigma * std::sqrt(dt);
  const std::size_t n_times = e.times.size();
  parallel_for(n_paths, resolve_workers(opts.workers), [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(n), drift(n);
    for (std::size_t p = begin; p < end; ++p) {
      Substream rng(seed, p, 0);
      std::fill(x.begin(), x.end(), 0.0);
      double* row = &e.values[p * n_times];
      std::size_t rec = 1;
      for (std::size_t s = 1; s <= steps; ++s) {
        std::fill(drift.begin(), drift.end(), 0.0);
        for (const auto& ed : edges) {
          const double f = ed.kappa * (x[ed.j] - x[ed.i]);
          drift[ed.i] += f;
          drift[ed.j] -= f;
        }
        for (std::size_t i = 0; i < n; ++i) x[i] += dt * drift[i] + noise * rng.normal();
        if (rec < n_times && s % stride == 0) row[rec++] = x[opts.bead];
      }
    }
  });
  return e;
}

PathEnsemble center_of_mass_paths(const WeightedGraph& g, double sigma, const std::vector<double>& times,
                                  std::size_t n_paths, std::uint64_t seed) {
  require(g.n_vertices() >= 1, "graph has no vertices");
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be positive");
  const SOUModel com({}, {}, sigma / std::sqrt(static_cast<double>(g.n_vertices())), sigma, 1);
  return sample_paths(com, times, n_paths, seed);
}

std::string ensemble_to_csv(const PathEnsemble& e) {
  std::ostringstream os;
  os << "# seed: " << e.seed << '\n' << "# model_digest: " << e.model_digest << '\n';
  os << (e.n_components == 1 ? "path_id,t,x\n" : "path_id,component,t,x\n");
  char buf[64];
  for (std::size_t p = 0; p < e.n_paths; ++p) {
    for (int c = 0; c < e.n_components; ++c) {
      for (std::size_t j = 0; j < e.times.size(); ++j) {
        os << p << ',';
        if (e.n_components != 1) os << c << ',';
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", e.times[j], e.at(p, c, j));
        os << buf;
      }
    }
  }
  return os.str();
}

}  // namespace sou
