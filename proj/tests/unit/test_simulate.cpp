#include <gtest/gtest.h>

#include <cmath>

#include "analytic.hpp"
#include "errors.hpp"
#include "estimate.hpp"
#include "graph.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "simulate.hpp"

using namespace sou;

namespace {

struct Moments {
  double mean = 0, var = 0, skew = 0, excess_kurtosis = 0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  const double n = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : x) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.var = m2;
  m.skew = m3 / std::pow(m2, 1.5);
  m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  return m;
}

std::vector<double> column(const PathEnsemble& e, std::size_t j) {
  std::vector<double> out;
  for (std::size_t p = 0; p < e.n_paths; ++p)
    for (int c = 0; c < e.n_components; ++c) out.push_back(e.at(p, c, j));
  return out;
}

double second_moment(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

}  // namespace

TEST(Philox, KnownAnswerVectors) {
  using P = Philox4x32;
  EXPECT_EQ(P::block({0, 0, 0, 0}, {0, 0}), (P::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(P::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (P::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(P::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (P::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, SubstreamsAreIndependentOfEachOther) {
  Substream a(1, 2, 3), b(1, 2, 3), c(1, 2, 4), d(1, 3, 3);
  const double x = a.normal();
  EXPECT_EQ(x, b.normal());
  EXPECT_NE(x, c.normal());
  EXPECT_NE(x, d.normal());
  Substream u(9, 0, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(SamplePaths, BrownianVarianceAtOne) {
  const SOUModel m({}, {}, 1.0, 1.0, 1);
  const std::size_t paths = 10000;
  const auto e = sample_paths(m, {0.0, 1.0}, paths, 11);
  const auto x = column(e, 1);
  EXPECT_NEAR(second_moment(x), 1.0, 3 * std::sqrt(2.0 / paths));
  for (std::size_t p = 0; p < paths; ++p) EXPECT_EQ(e.at(p, 0, 0), 0.0);
}

TEST(SamplePaths, SingleModeVariance) {
  const SOUModel m({1.0}, {1.0}, 0.0, 1.0, 1);
  const std::size_t paths = 20000;
  const double expected = -std::expm1(-6.0) / 2;
  const auto x = column(sample_paths(m, {3.0}, paths, 5), 0);
  EXPECT_NEAR(second_moment(x), expected, 3 * gaussian_msd_stderr(expected, 1, paths));
}

TEST(SamplePaths, ExactOnTwoPointGrid) {
  for (double lambda : {1e-10, 0.3, 5.0, 200.0}) {
    const SOUModel m({lambda}, {1.0}, 0.0, 1.0, 1);
    const double t = 2.0;
    const double expected = -std::expm1(-2 * lambda * t) / (2 * lambda);
    const std::size_t paths = 100000;
    const auto x = column(sample_paths(m, {0.0, t}, paths, 21), 1);
    EXPECT_NEAR(second_moment(x), expected, 4 * gaussian_msd_stderr(expected, 1, paths)) << lambda;
  }
}

TEST(SamplePaths, RouseMatchesAnalyticEverywhere) {
  const auto m = distinguished_model(rouse_cycle(64, 1.0), 1.0, 1);
  const auto grid = geometric_grid(1e-2, 1e3, 12);
  const auto e = sample_paths(m, grid, 8000, 3);
  const auto mc = msd_from_ensemble(e);
  const auto exact = msd_finite(m, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_NEAR(mc.values[i], exact.values[i], 3.5 * (*mc.std_errors)[i]) << grid[i];
}

TEST(SamplePaths, GaussianIncrements) {
  const auto m = distinguished_model(rouse_cycle(16, 1.0), 1.0, 1);
  const std::size_t paths = 20000;
  const auto e = sample_paths(m, {0.5, 1.5}, paths, 8);
  std::vector<double> inc;
  for (std::size_t p = 0; p < paths; ++p) inc.push_back(e.at(p, 0, 1) - e.at(p, 0, 0));
  const auto mo = moments(inc);
  const double sd = std::sqrt(increment_variance(m, 1.5, 0.5));
  EXPECT_NEAR(std::sqrt(mo.var), sd, 4 * sd / std::sqrt(2.0 * paths));
  EXPECT_LT(std::abs(mo.skew), 4 * std::sqrt(6.0 / paths));
  EXPECT_LT(std::abs(mo.excess_kurtosis), 4 * std::sqrt(24.0 / paths));
}

TEST(SamplePaths, GridInvarianceOfLaw) {
  const auto m = distinguished_model(rouse_cycle(32, 1.0), 1.0, 1);
  const std::size_t paths = 20000;
  const auto fine = linear_grid(0.25, 8.0, 32);
  const std::vector<double> coarse{2.0, 8.0};
  const auto ef = sample_paths(m, fine, paths, 100);
  const auto ec = sample_paths(m, coarse, paths, 200);
  const std::size_t idx[] = {7, 31};
  for (std::size_t k = 0; k < 2; ++k) {
    ASSERT_DOUBLE_EQ(fine[idx[k]], coarse[k]);
    const double a = second_moment(column(ef, idx[k]));
    const double b = second_moment(column(ec, k));
    const double se = std::hypot(gaussian_msd_stderr(a, 1, paths), gaussian_msd_stderr(b, 1, paths));
    EXPECT_NEAR(a, b, 4 * se);
  }
}

TEST(SamplePaths, ComponentsAreIndependentCopies) {
  const auto m = distinguished_model(rouse_cycle(8, 1.0), 1.0, 3);
  const std::size_t paths = 6000;
  const auto e = sample_paths(m, {1.0}, paths, 4);
  EXPECT_EQ(e.n_components, 3);
  double cross = 0.0;
  for (std::size_t p = 0; p < paths; ++p) cross += e.at(p, 0, 0) * e.at(p, 1, 0);
  cross /= paths;
  const double per = acf_finite(distinguished_model(rouse_cycle(8, 1.0), 1.0, 1), 1.0, 1.0);
  EXPECT_LT(std::abs(cross), 4 * per / std::sqrt(static_cast<double>(paths)));
  const auto mc = msd_from_ensemble(e);
  EXPECT_NEAR(mc.values[0], 3 * per, 3 * (*mc.std_errors)[0]);
}

TEST(SamplePaths, DeterministicAcrossWorkerCounts) {
  const auto m = distinguished_model(rouse_cycle(20, 1.0), 1.0, 2);
  const auto grid = geometric_grid(0.1, 100.0, 9);
  const auto a = sample_paths(m, grid, 257, 42, {1, kDefaultMemoryBudget});
  const auto b = sample_paths(m, grid, 257, 42, {7, kDefaultMemoryBudget});
  const auto c = sample_paths(m, grid, 257, 42, {});
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.values, c.values);
  EXPECT_EQ(a.model_digest, m.digest());
  EXPECT_EQ(ensemble_to_csv(a), ensemble_to_csv(b));
}

TEST(SamplePaths, PrefixOfPathsIsStable) {
  const auto m = distinguished_model(rouse_cycle(10, 1.0), 1.0, 1);
  const auto a = sample_paths(m, {1.0, 2.0}, 10, 5);
  const auto b = sample_paths(m, {1.0, 2.0}, 40, 5);
  for (std::size_t p = 0; p < 10; ++p)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(a.at(p, 0, j), b.at(p, 0, j));
}

TEST(SamplePaths, InvalidInputs) {
  const SOUModel m({1.0}, {1.0}, 0.0, 1.0, 1);
  EXPECT_THROW(sample_paths(m, {}, 10, 1), InvalidArgument);
  EXPECT_THROW(sample_paths(m, {1.0, 1.0}, 10, 1), InvalidArgument);
  EXPECT_THROW(sample_paths(m, {-1.0, 1.0}, 10, 1), InvalidArgument);
  EXPECT_THROW(sample_paths(m, {1.0}, 0, 1), InvalidArgument);
}

TEST(SamplePaths, MemoryBudgetSuggestsChunking) {
  const SOUModel m({1.0}, {1.0}, 0.0, 1.0, 1);
  try {
    sample_paths(m, linear_grid(1.0, 100.0, 100), 1000, 1, {1, 1024});
    FAIL() << "expected ResourceLimit";
  } catch (const ResourceLimit& e) {
    EXPECT_NE(std::string(e.what()).find("chunk"), std::string::npos);
  }
}

TEST(SimulateMsd, AgreesWithStoredEnsemble) {
  const auto m = distinguished_model(rouse_cycle(12, 1.0), 1.0, 2);
  const auto grid = geometric_grid(0.1, 50.0, 8);
  const auto direct = msd_from_ensemble(sample_paths(m, grid, 500, 77));
  const auto chunked = simulate_msd(m, grid, 500, 77, 64);
  EXPECT_EQ(chunked.provenance, Provenance::MonteCarlo);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(chunked.values[i], direct.values[i], 1e-12 * direct.values[i]);
}

TEST(SimulateMsd, IndependentOfChunkAndWorkers) {
  const auto m = distinguished_model(rouse_cycle(12, 1.0), 1.0, 1);
  const auto grid = geometric_grid(0.1, 50.0, 8);
  const auto a = simulate_msd(m, grid, 999, 5, 1000, {1, kDefaultMemoryBudget});
  const auto b = simulate_msd(m, grid, 999, 5, 1000, {8, kDefaultMemoryBudget});
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.std_errors, b.std_errors);
  const auto c = simulate_msd(m, grid, 999, 5, 17, {8, kDefaultMemoryBudget});
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(a.values[i], c.values[i], 1e-12 * a.values[i]);
}

TEST(SimulateMsd, RejectsZeroTime) {
  const SOUModel m({1.0}, {1.0}, 0.0, 1.0, 1);
  EXPECT_THROW(simulate_msd(m, {0.0, 1.0}, 10, 1), InvalidArgument);
}

TEST(EulerNetwork, AgreesWithExactSampler) {
  const auto g = rouse_cycle(8, 1.0);
  const double dt = 1e-3;
  const std::size_t paths = 4000;
  const auto e = euler_full_network(g, 1.0, dt, 5.0, paths, 31, {0, 10, 0});
  ASSERT_EQ(e.times.front(), 0.0);
  EXPECT_NEAR(e.times.back(), 5.0, 1e-12);
  const auto mc = msd_from_ensemble(e);
  const auto exact = msd_finite(distinguished_model(g, 1.0, 1), mc.times);
  const double lambda_max = 4.0;
  for (std::size_t i = 0; i < mc.times.size(); ++i) {
    const double bound = std::max(3 * (*mc.std_errors)[i], 2 * dt * lambda_max * exact.values[i]);
    EXPECT_NEAR(mc.values[i], exact.values[i], bound) << mc.times[i];
  }
}

TEST(EulerNetwork, DecoupledBeadIsBrownian) {
  const WeightedGraph g(4, {}, "empty");
  const std::size_t paths = 4000;
  const auto e = euler_full_network(g, 1.5, 0.01, 2.0, paths, 3, {1, 4, 0});
  const auto mc = msd_from_ensemble(e);
  const double expected = 1.5 * 1.5 * 2.0;
  EXPECT_NEAR(mc.values.back(), expected, 3 * gaussian_msd_stderr(expected, 1, paths));
}

TEST(EulerNetwork, Deterministic) {
  const auto g = rouse_cycle(6, 1.0);
  const auto a = euler_full_network(g, 1.0, 0.01, 1.0, 50, 9, {2, 5, 1});
  const auto b = euler_full_network(g, 1.0, 0.01, 1.0, 50, 9, {2, 5, 4});
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.times, b.times);
}

TEST(EulerNetwork, UnstableStepNamesBound) {
  try {
    euler_full_network(rouse_cycle(8, 1.0), 1.0, 0.1, 1.0, 10, 1);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("lambda_max"), std::string::npos) << e.what();
  }
}

TEST(EulerNetwork, BeadsAreExchangeable) {
  const auto g = rouse_cycle(6, 1.0);
  const std::size_t paths = 4000;
  std::vector<MSDCurve> per_bead;
  for (std::size_t bead = 0; bead < 6; bead += 2)
    per_bead.push_back(msd_from_ensemble(euler_full_network(g, 1.0, 0.01, 3.0, paths, 100 + bead, {bead, 3, 0})));
  for (std::size_t i = 0; i < per_bead.size(); ++i)
    for (std::size_t j = i + 1; j < per_bead.size(); ++j)
      for (std::size_t k = 0; k < per_bead[i].values.size(); ++k) {
        const double se = std::hypot((*per_bead[i].std_errors)[k], (*per_bead[j].std_errors)[k]);
        EXPECT_LT(std::abs(per_bead[i].values[k] - per_bead[j].values[k]), 5 * se);
      }
}

TEST(CenterOfMass, DiffusesWithReducedCoefficient) {
  const auto g = rouse_cycle(16, 1.0);
  const std::size_t paths = 10000;
  const auto e = center_of_mass_paths(g, 1.0, {4.0}, paths, 12);
  const double expected = 4.0 / 16;
  EXPECT_NEAR(second_moment(column(e, 0)), expected, 3 * gaussian_msd_stderr(expected, 1, paths));
}

TEST(CenterOfMass, SingleVertexIsBrownian) {
  const auto e = center_of_mass_paths(WeightedGraph(1, {}, "point"), 2.0, {1.0}, 10000, 3);
  EXPECT_NEAR(second_moment(column(e, 0)), 4.0, 3 * gaussian_msd_stderr(4.0, 1, 10000));
}

TEST(CenterOfMass, LinearInTime) {
  const auto e = center_of_mass_paths(complete_graph(5, 1.0), 1.0, geometric_grid(0.1, 100.0, 12), 4000, 6);
  const auto fit = fit_exponent(msd_from_ensemble(e), {0.1, 100.0});
  EXPECT_NEAR(fit.nu, 1.0, 0.03);
}

TEST(EnsembleCsv, Layout) {
  const SOUModel m({1.0}, {1.0}, 0.0, 1.0, 1);
  const auto csv = ensemble_to_csv(sample_paths(m, {0.0, 1.0}, 2, 1));
  EXPECT_EQ(csv.rfind("# seed: 1\n", 0), 0u) << csv;
  EXPECT_NE(csv.find("\npath_id,t,x\n0,0,0\n0,1,"), std::string::npos) << csv;
  const SOUModel m2({1.0}, {1.0}, 0.0, 1.0, 2);
  EXPECT_NE(ensemble_to_csv(sample_paths(m2, {1.0}, 1, 1)).find("\npath_id,component,t,x\n0,0,1,"), std::string::npos);
}
