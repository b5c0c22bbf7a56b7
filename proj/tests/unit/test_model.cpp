#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "analytic.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "model.hpp"
#include "oracles.hpp"
#include "spectrum.hpp"

using namespace sou;

TEST(SOUModelType, SingleModeModel) {
  const auto m = sou_model(Spectrum{{1.0}, {1}}, {1.0}, 0.0, 1.0, 1);
  EXPECT_EQ(m.n_modes(), 1u);
  EXPECT_DOUBLE_EQ(m.total_mass(), 1.0);
  EXPECT_NEAR(acf_finite(m, 50.0, 50.0), 0.5, 1e-15);
}

TEST(SOUModelType, PureBrownian) {
  const SOUModel m({}, {}, 1.0, 1.0, 1);
  EXPECT_EQ(m.n_modes(), 0u);
  EXPECT_DOUBLE_EQ(acf_finite(m, 2.0, 3.0), 2.0);
}

TEST(SOUModelType, RejectsInvalidInput) {
  EXPECT_THROW(SOUModel({1.0, 2.0}, {1.0}, 0.0, 1.0, 1), InvalidArgument);
  EXPECT_THROW(SOUModel({0.0}, {1.0}, 0.0, 1.0, 1), InvalidArgument);
  EXPECT_THROW(SOUModel({1.0}, {1.0}, 0.0, 0.0, 1), InvalidArgument);
  EXPECT_THROW(SOUModel({1.0}, {1.0}, 0.0, 1.0, 0), InvalidArgument);
  EXPECT_THROW(SOUModel({}, {}, 0.0, 1.0, 1), InvalidArgument);
  EXPECT_THROW(sou_model(Spectrum{{0.0, 1.0}, {1, 1}}, {1.0, 1.0}, 0.0, 1.0, 1), InvalidArgument);
}

TEST(SOUModelType, ModesSortedWithTheirCoefficients) {
  const SOUModel m({3.0, 1.0, 2.0}, {0.3, 0.1, 0.2}, 0.0, 1.0, 1);
  EXPECT_EQ(m.rates(), (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_EQ(m.coefficients(), (std::vector<double>{0.1, 0.2, 0.3}));
}

TEST(SOUModelType, JsonRoundTripIsLossless) {
  const auto m = random_coefficient_model(circulant_spectrum(64, {1.0, 0.1}), 5, CoefficientLaw::LogNormal);
  const auto back = SOUModel::from_json(m.to_json());
  EXPECT_EQ(back.to_json(), m.to_json());
  EXPECT_EQ(back.digest(), m.digest());
  EXPECT_EQ(back.coefficient_m2(), m.coefficient_m2());
}

TEST(SOUModelType, JsonRejectsUnknownKeysAndZeroModes) {
  auto j = distinguished_model(rouse_cycle(6, 1.0), 1.0, 1).to_json();
  j["bogus"] = true;
  EXPECT_THROW(SOUModel::from_json(j), InvalidArgument);
  nlohmann::json z = {{"spectrum", {{"values", {0.0, 1.0}}, {"multiplicities", {1, 1}}}},
                      {"coefficients", {1.0, 1.0}}, {"c0", 0.0}, {"sigma", 1.0}, {"d", 1}};
  EXPECT_THROW(SOUModel::from_json(z), InvalidArgument);
}

TEST(SOUModelType, DigestTracksContent) {
  const auto a = distinguished_model(rouse_cycle(8, 1.0), 1.0, 1);
  const auto b = distinguished_model(rouse_cycle(8, 1.0), 1.0, 2);
  EXPECT_EQ(a.digest(), distinguished_model(rouse_cycle(8, 1.0), 1.0, 1).digest());
  EXPECT_NE(a.digest(), b.digest());
  EXPECT_EQ(a.digest().size(), 16u);
}

TEST(DistinguishedModel, RouseCoefficients) {
  const int n = 12;
  const double sigma = 1.7;
  const auto m = distinguished_model(rouse_cycle(n, 1.0), sigma, 1);
  EXPECT_NEAR(m.c0(), sigma / std::sqrt(n), 1e-15);
  EXPECT_EQ(m.n_modes(), static_cast<std::size_t>(n - 1));
  for (double c : m.coefficients()) EXPECT_NEAR(c, sigma / std::sqrt(n), 1e-15);
  EXPECT_FALSE(m.has_flag(kFlagNonExchangeable));
}

TEST(DistinguishedModel, SameLawAsGenericConstruction) {
  const int n = 16;
  const auto g = rouse_cycle(n, 1.0);
  const auto a = distinguished_model(g, 1.0, 1);
  const auto modes = nonzero_part(eig_spectrum(g.laplacian()));
  const auto b = sou_model(modes, std::vector<double>(n - 1, 1.0 / std::sqrt(n)), 1.0 / std::sqrt(n), 1.0, 1);
  for (double t : {0.01, 0.3, 1.0, 7.0, 40.0})
    for (double s : {0.05, 2.0}) EXPECT_NEAR(acf_finite(a, t, s), acf_finite(b, t, s), 1e-12);
}

TEST(DistinguishedModel, ClosedSpectrumMatchesDense) {
  const auto a = distinguished_model(hypercube(5, 0.2), 1.0, 1);
  const auto b = distinguished_model_from_spectrum(hypercube_spectrum(5, 0.2), 1.0, 1);
  ASSERT_EQ(a.n_modes(), b.n_modes());
  for (double t : {0.1, 1.0, 10.0}) EXPECT_NEAR(acf_finite(a, t, t), acf_finite(b, t, t), 1e-12);
}

TEST(DistinguishedModel, CompleteGraphSingleRate) {
  const int n = 10;
  const auto m = distinguished_model(complete_graph(n, complete_graph_unit_kappa(n)), 1.0, 1);
  EXPECT_EQ(m.spectrum().values.size(), 1u);
  EXPECT_NEAR(m.spectrum().values[0], n / (n - 1.0), 1e-12);
  EXPECT_EQ(m.spectrum().multiplicities[0], static_cast<std::size_t>(n - 1));
}

TEST(DistinguishedModel, DisconnectedGraphRejected) {
  EXPECT_THROW(distinguished_model(WeightedGraph(4, {{0, 1, 1.0}, {2, 3, 1.0}}, "pairs"), 1.0, 1), InvalidArgument);
}

TEST(DistinguishedModel, NonTransitiveGraphIsFlagged) {
  const auto m = distinguished_model(WeightedGraph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}}, "path"), 1.0, 1);
  EXPECT_TRUE(m.has_flag(kFlagNonExchangeable));
}

TEST(CoefficientMeasure, RouseAtoms) {
  const int n = 20;
  const double sigma = 1.3;
  const auto mu = coefficient_measure(distinguished_model(rouse_cycle(n, 1.0), sigma, 1));
  ASSERT_EQ(mu.atoms.size(), static_cast<std::size_t>(n));
  EXPECT_EQ(mu.atoms[0].location, 0.0);
  for (const auto& a : mu.atoms) EXPECT_NEAR(a.mass, sigma * sigma / n, 1e-15);
  EXPECT_NEAR(mu.total_mass(), sigma * sigma, 1e-13);
}

TEST(CoefficientMeasure, SingleModeOneAtom) {
  const auto mu = coefficient_measure(sou_model(Spectrum{{1.0}, {1}}, {1.0}, 0.0, 1.0, 1));
  double mass = 0.0;
  for (const auto& a : mu.atoms) mass += a.mass;
  EXPECT_DOUBLE_EQ(mass, 1.0);
}

TEST(CoefficientMeasure, HypercubeConcentratesAtHalf) {
  const auto mu = coefficient_measure(distinguished_model_from_spectrum(hypercube_spectrum(10, 0.1), 1.0, 1));
  EXPECT_NEAR(mu.total_mass(), 1.0, 1e-6);
  double central = 0.0;
  for (const auto& a : mu.atoms)
    if (a.location >= 0.35 && a.location <= 0.65) central += a.mass;
  EXPECT_NEAR(central, oracle::binomial_mass(10, 4, 6), 1e-12);
  double wide = 0.0;
  for (const auto& a : mu.atoms)
    if (a.location >= 0.2 && a.location <= 0.8) wide += a.mass;
  EXPECT_NEAR(wide, oracle::binomial_mass(10, 2, 8), 1e-12);
  EXPECT_GT(wide, 0.97);
}

TEST(CoefficientMeasure, MassEqualsModelMass) {
  const std::vector<SOUModel> models = {
      distinguished_model(rouse_cycle(9, 2.0), 0.7, 1),
      random_coefficient_model(circulant_spectrum(33, {1.0}), 1, CoefficientLaw::Uniform),
      random_string_model(16, 1.0, 2.0),
      SOUModel({1.0, 4.0}, {0.5, 0.25}, 0.1, 1.0, 3),
  };
  for (const auto& m : models) {
    const auto mu = coefficient_measure(m);
    double direct = m.c0() * m.c0();
    for (double c : m.coefficients()) direct += c * c;
    EXPECT_EQ(mu.total_mass(), m.total_mass());
    EXPECT_NEAR(mu.total_mass(), direct, 1e-14);
  }
}

TEST(RandomCoefficients, MomentsOfLaws) {
  EXPECT_NEAR(coefficient_law_moment(CoefficientLaw::Uniform, 2), 13.0 / 12.0, 1e-15);
  EXPECT_NEAR(coefficient_law_moment(CoefficientLaw::Uniform, 4), (std::pow(1.5, 5) - std::pow(0.5, 5)) / 5, 1e-15);
  EXPECT_NEAR(coefficient_law_moment(CoefficientLaw::LogNormal, 2), std::exp(2.0 * 0.0625), 1e-15);
  EXPECT_EQ(coefficient_law_moment(CoefficientLaw::Constant, 4), 1.0);
}

TEST(RandomCoefficients, MassApproachesSecondMoment) {
  const int n = 4096;
  const double m2 = 13.0 / 12.0;
  const double m4 = coefficient_law_moment(CoefficientLaw::Uniform, 4);
  const double sd = std::sqrt(oracle::random_integral_variance(n, m2, m4, [](double) { return 1.0; }));
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto m = random_coefficient_model(circulant_spectrum(n, {1.0}), seed, CoefficientLaw::Uniform);
    EXPECT_NEAR(m.total_mass(), m2, 3 * sd);
    EXPECT_EQ(m.coefficient_m2(), m2);
  }
}

TEST(RandomCoefficients, ConstantLawIsDistinguished) {
  const auto spec = circulant_spectrum(16, {1.0});
  const auto a = random_coefficient_model(spec, 99, CoefficientLaw::Constant);
  const auto b = distinguished_model_from_spectrum(spec, 1.0, 1);
  EXPECT_EQ(a.coefficients(), b.coefficients());
  EXPECT_EQ(a.c0(), b.c0());
}

TEST(RandomCoefficients, SeedDeterminism) {
  const auto spec = circulant_spectrum(128, {1.0});
  const auto a = random_coefficient_model(spec, 17, CoefficientLaw::LogNormal);
  EXPECT_EQ(a.coefficients(), random_coefficient_model(spec, 17, CoefficientLaw::LogNormal).coefficients());
  EXPECT_NE(a.coefficients(), random_coefficient_model(spec, 18, CoefficientLaw::LogNormal).coefficients());
}

TEST(RandomCoefficients, IntegralVarianceScalesInverselyWithN) {
  auto sample_var = [](int n) {
    std::vector<double> vals;
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
      const auto mu = coefficient_measure(random_coefficient_model(circulant_spectrum(n, {1.0}), seed,
                                                                   CoefficientLaw::Uniform));
      vals.push_back(mu.integrate([](double x) { return x; }));
    }
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
    double v = 0.0;
    for (double x : vals) v += (x - mean) * (x - mean);
    return v / (vals.size() - 1);
  };
  const double v1 = sample_var(4096);
  const double v2 = sample_var(8192);
  const double m2 = 13.0 / 12.0;
  const double m4 = coefficient_law_moment(CoefficientLaw::Uniform, 4);
  const double predicted = oracle::random_integral_variance(4096, m2, m4, [](double x) { return x; });
  EXPECT_GT(v1 / predicted, 0.4);
  EXPECT_LT(v1 / predicted, 1.8);
  EXPECT_GT(v1 / v2, 1.0);
  EXPECT_LT(v1 / v2, 4.0);
}

TEST(ConvergenceDiagnostic, RouseMomentsApproachLebesgue) {
  const std::vector<int> ns{16, 32, 64, 128};
  std::vector<CoefficientMeasure> measures;
  for (int n : ns) measures.push_back(coefficient_measure(distinguished_model(rouse_cycle(n, 1.0), 1.0, 1)));
  const auto table = measure_convergence_diagnostic(
      measures, {[](double x) { return x; }, [](double x) { return x * x; }, [](double) { return 1.0; }});
  for (std::size_t i = 0; i < ns.size(); ++i) {
    // Even n: distinct levels r = 0..n/2 at r/(n/2), end levels simple, interior doubled.
    const int half = ns[i] / 2;
    double second = 0.0;
    for (int r = 0; r <= half; ++r) {
      const double x = static_cast<double>(r) / half;
      second += (r == 0 || r == half ? 1.0 : 2.0) * x * x / ns[i];
    }
    EXPECT_NEAR(table[i][0], 0.5, 1e-12);
    EXPECT_NEAR(table[i][1], second, 1e-12);
    EXPECT_NEAR(table[i][2], 1.0, 1e-12);
  }
  for (std::size_t i = 1; i < ns.size(); ++i)
    EXPECT_LT(std::abs(table[i][1] - 1.0 / 3), std::abs(table[i - 1][1] - 1.0 / 3));
  EXPECT_LT(std::abs(table.back()[1] - 1.0 / 3), 2.0 / 128);
}

TEST(ConvergenceDiagnostic, RandomFamilyConcentrates) {
  std::vector<CoefficientMeasure> measures;
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    measures.push_back(coefficient_measure(
        random_coefficient_model(circulant_spectrum(4096, {1.0}), seed, CoefficientLaw::Uniform)));
  const auto table = measure_convergence_diagnostic(measures, {[](double x) { return x * x; }});
  const double m2 = 13.0 / 12.0;
  const double m4 = coefficient_law_moment(CoefficientLaw::Uniform, 4);
  const double sd = std::sqrt(oracle::random_integral_variance(4096, m2, m4, [](double x) { return x * x; }));
  for (const auto& row : table) EXPECT_NEAR(row[0], m2 / 3.0, 4 * sd + 1e-3);
}

TEST(ConvergenceDiagnostic, NeedsTwoMeasures) {
  EXPECT_THROW(measure_convergence_diagnostic({CoefficientMeasure{}}, {[](double) { return 1.0; }}), InvalidArgument);
}

TEST(RandomString, RescaledRouseSpectrum) {
  const int n = 64;
  const auto m = random_string_model(n, 1.0, 1.0);
  EXPECT_TRUE(m.has_flag(kFlagShortTimeAnomalous));
  EXPECT_NEAR(m.max_rate(), n * n * 4.0, 1e-6);
  EXPECT_NEAR(m.min_rate(), n * n * 4.0 * std::pow(std::sin(oracle::pi / n), 2), 1e-9);
  EXPECT_LT(1.0 / m.max_rate(), 1.0 / (n * n));
}

TEST(RandomString, SmallestChainIsFinite) {
  const auto m = random_string_model(3, 1.0, 1.0);
  EXPECT_EQ(m.n_modes(), 2u);
  for (double t : {1e-6, 1.0, 1e6}) EXPECT_TRUE(std::isfinite(acf_finite(m, t, t)));
  EXPECT_THROW(random_string_model(2, 1.0, 1.0), InvalidArgument);
}

TEST(AmbientDimension, ScalesAcfExactly) {
  const auto g = rouse_cycle(10, 1.0);
  const auto m1 = distinguished_model(g, 1.0, 1);
  const auto m3 = distinguished_model(g, 1.0, 3);
  for (double t : {0.1, 1.0, 10.0}) EXPECT_EQ(acf_finite(m3, t, 0.5 * t), 3.0 * acf_finite(m1, t, 0.5 * t));
}
