#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "sou/sou.h"

using nlohmann::json;

namespace {

// Takes ownership of a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  sou_string_free(s);
  return out;
}

std::vector<double> geometric(double lo, double hi, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / double(n - 1));
  return t;
}

const char* kRouse8 = R"({"kind":"graph","graph":{"family":"rouse","n":8}})";

}  // namespace

TEST(CApi, VersionIsNonEmpty) { EXPECT_NE(std::string(sou_version()).find('.'), std::string::npos); }

TEST(CApi, GraphRoundTripAndLaplacian) {
  sou_graph* g = nullptr;
  ASSERT_EQ(sou_graph_from_spec(R"({"family":"rouse","n":5,"kappa":2})", &g), SOU_OK);
  EXPECT_EQ(sou_graph_n_vertices(g), 5u);
  std::vector<double> lap(25);
  ASSERT_EQ(sou_graph_laplacian(g, lap.data(), lap.size()), SOU_OK);
  EXPECT_DOUBLE_EQ(lap[0], -4.0);
  EXPECT_DOUBLE_EQ(lap[1], 2.0);
  EXPECT_DOUBLE_EQ(lap[4], 2.0);
  EXPECT_DOUBLE_EQ(lap[2], 0.0);
  EXPECT_EQ(sou_graph_laplacian(g, lap.data(), 24), SOU_INVALID_ARGUMENT);
  char* text = nullptr;
  ASSERT_EQ(sou_graph_to_json(g, &text), SOU_OK);
  const json doc = json::parse(take(text));
  EXPECT_EQ(doc.at("n_vertices"), 5);
  EXPECT_EQ(doc.at("edges").size(), 5u);
  sou_graph_free(g);
}

TEST(CApi, StatusCodesAndLastError) {
  sou_graph* g = nullptr;
  EXPECT_EQ(sou_graph_from_spec(R"({"family":"rouse","n":5,"bogus":1})", &g), SOU_INVALID_ARGUMENT);
  EXPECT_EQ(g, nullptr);
  EXPECT_NE(std::string(sou_last_error()).find("bogus"), std::string::npos);
  EXPECT_EQ(sou_graph_from_spec("{not json", &g), SOU_INVALID_ARGUMENT);
  EXPECT_EQ(sou_graph_from_spec(nullptr, &g), SOU_INVALID_ARGUMENT);
  EXPECT_EQ(sou_graph_from_spec(R"({"family":"hypercube","n_dims":40})", &g), SOU_RESOURCE_LIMIT);
  EXPECT_EQ(sou_graph_from_spec(R"({"family":"rouse","n":5})", &g), SOU_OK);
  sou_graph_free(g);
  sou_graph_free(nullptr);
  sou_model_free(nullptr);
  sou_curve_free(nullptr);
  sou_string_free(nullptr);
}

TEST(CApi, SpectrumClosedMatchesDense) {
  char* a = nullptr;
  char* b = nullptr;
  const char* spec = R"({"family":"circulant","n":11,"kappas":[1.0,0.3]})";
  ASSERT_EQ(sou_spectrum_json(spec, "closed", nullptr, &a), SOU_OK);
  ASSERT_EQ(sou_spectrum_json(spec, "dense", nullptr, &b), SOU_OK);
  const json ja = json::parse(take(a));
  const json jb = json::parse(take(b));
  ASSERT_EQ(ja.at("values").size(), jb.at("values").size());
  for (std::size_t i = 0; i < ja.at("values").size(); ++i)
    EXPECT_NEAR(ja["values"][i].get<double>(), jb["values"][i].get<double>(), 1e-9);
  EXPECT_EQ(ja.at("multiplicities"), jb.at("multiplicities"));
  EXPECT_EQ(sou_spectrum_json(spec, "guess", nullptr, &a), SOU_INVALID_ARGUMENT);
}

TEST(CApi, ModelJsonRoundTripPreservesAcf) {
  sou_model* m = nullptr;
  ASSERT_EQ(sou_model_from_spec(kRouse8, &m), SOU_OK);
  char* text = nullptr;
  ASSERT_EQ(sou_model_to_json(m, &text), SOU_OK);
  sou_model* back = nullptr;
  ASSERT_EQ(sou_model_from_json(take(text).c_str(), &back), SOU_OK);
  double a = 0.0, b = 0.0;
  ASSERT_EQ(sou_model_acf(m, 2.5, 1.0, &a), SOU_OK);
  ASSERT_EQ(sou_model_acf(back, 2.5, 1.0, &b), SOU_OK);
  EXPECT_EQ(a, b);
  EXPECT_GT(a, 0.0);
  EXPECT_EQ(sou_model_acf(m, -1.0, 1.0, &a), SOU_INVALID_ARGUMENT);
  sou_model_free(m);
  sou_model_free(back);
}

TEST(CApi, FiniteCurveCsvRoundTripAndFit) {
  sou_model* m = nullptr;
  ASSERT_EQ(sou_model_from_spec(kRouse8, &m), SOU_OK);
  const auto t = geometric(1e-4, 1e-2, 30);
  sou_curve* c = nullptr;
  ASSERT_EQ(sou_msd_finite(m, t.data(), t.size(), &c), SOU_OK);
  EXPECT_EQ(sou_curve_size(c), 30u);
  EXPECT_EQ(sou_curve_has_stderr(c), 0);
  sou_fit fit{};
  ASSERT_EQ(sou_fit_exponent(c, 1e-4, 1e-2, SOU_REGIME_SHORT, &fit), SOU_OK);
  EXPECT_NEAR(fit.nu, 1.0, 0.01);
  EXPECT_EQ(fit.n_points, 30u);
  EXPECT_EQ(fit.regime, SOU_REGIME_SHORT);
  EXPECT_EQ(sou_fit_exponent(c, 1.0, 2.0, SOU_REGIME_LONG, &fit), SOU_INVALID_ARGUMENT);

  char* csv = nullptr;
  ASSERT_EQ(sou_curve_to_csv(c, R"(["note: x"])", &csv), SOU_OK);
  const std::string text = take(csv);
  EXPECT_EQ(text.rfind("# note: x\n", 0), 0u);
  sou_curve* back = nullptr;
  ASSERT_EQ(sou_curve_from_csv(text.c_str(), &back), SOU_OK);
  std::vector<double> v1(30), v2(30);
  ASSERT_EQ(sou_curve_data(c, nullptr, v1.data(), nullptr), SOU_OK);
  ASSERT_EQ(sou_curve_data(back, nullptr, v2.data(), nullptr), SOU_OK);
  EXPECT_EQ(v1, v2);
  sou_curve_free(back);
  sou_curve_free(c);
  sou_model_free(m);
}

TEST(CApi, SimulationIsDeterministicAcrossChunking) {
  sou_model* m = nullptr;
  ASSERT_EQ(sou_model_from_spec(kRouse8, &m), SOU_OK);
  const std::vector<double> t = {0.1, 0.5, 1.0, 2.0};
  sou_curve* a = nullptr;
  sou_curve* b = nullptr;
  ASSERT_EQ(sou_msd_simulate(m, t.data(), t.size(), 200, 11, 7, &a), SOU_OK);
  ASSERT_EQ(sou_msd_simulate(m, t.data(), t.size(), 200, 11, 64, &b), SOU_OK);
  std::vector<double> va(4), vb(4), se(4);
  ASSERT_EQ(sou_curve_data(a, nullptr, va.data(), se.data()), SOU_OK);
  ASSERT_EQ(sou_curve_data(b, nullptr, vb.data(), nullptr), SOU_OK);
  EXPECT_EQ(va, vb);
  EXPECT_EQ(sou_curve_has_stderr(a), 1);
  for (double s : se) EXPECT_GT(s, 0.0);
  char* paths = nullptr;
  ASSERT_EQ(sou_sample_paths_csv(m, t.data(), t.size(), 2, 11, &paths), SOU_OK);
  EXPECT_NE(take(paths).find("path_id,t,x"), std::string::npos);
  EXPECT_EQ(sou_msd_simulate(m, t.data(), t.size(), 0, 11, 7, &a), SOU_INVALID_ARGUMENT);
  sou_curve_free(a);
  sou_curve_free(b);
  sou_model_free(m);
}

TEST(CApi, LimitCurveMatchesHalfPower) {
  const auto t = geometric(1e2, 1e4, 40);
  sou_curve* c = nullptr;
  ASSERT_EQ(sou_msd_limit(R"({"kind":"rouse"})", nullptr, t.data(), t.size(), &c), SOU_OK);
  sou_fit fit{};
  ASSERT_EQ(sou_fit_exponent(c, 1e2, 1e4, SOU_REGIME_INTERMEDIATE, &fit), SOU_OK);
  EXPECT_NEAR(fit.nu, 0.5, 0.01);
  char* text = nullptr;
  ASSERT_EQ(sou_fit_to_json(&fit, &text), SOU_OK);
  EXPECT_EQ(json::parse(take(text)).at("regime_label"), "intermediate");
  sou_curve_free(c);
}

TEST(CApi, RunConfigAndReport) {
  const char* cfg = R"({"method":"analytic-limit","limit":{"shape":{"kind":"rouse"}},
    "grid":{"kind":"geometric","t_min":0.01,"t_max":1e6,"n_points":161}})";
  char* out = nullptr;
  ASSERT_EQ(sou_run_config(cfg, nullptr, &out), SOU_OK);
  const json doc = json::parse(take(out));
  EXPECT_EQ(doc.at("family"), "rouse");
  EXPECT_EQ(doc.at("summary").get<std::string>().rfind("family=rouse", 0), 0u);
  EXPECT_EQ(sou_run_config(R"({"method":"monte-carlo","model":{"kind":"graph","graph":{"family":"rouse","n":8}}})",
                           nullptr, &out),
            SOU_INVALID_ARGUMENT);
  EXPECT_NE(std::string(sou_last_error()).find("seed"), std::string::npos);

  int all_pass = -1;
  ASSERT_EQ(sou_report(R"({"only":["rouse"]})", &out, &all_pass), SOU_OK);
  const json rep = json::parse(take(out));
  EXPECT_EQ(all_pass, 1);
  EXPECT_EQ(rep.at("rows").size(), 1u);
  EXPECT_EQ(sou_report(R"({"colour":"red"})", &out, &all_pass), SOU_INVALID_ARGUMENT);
}
