#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "sagnac/errors.hpp"
#include "sagnac/scan.hpp"

using namespace sagnac;
using namespace sagnac::scan;
using std::numbers::pi;

namespace {

double note_double(const report::Table& t, const std::string& key) {
  const auto* n = t.find(key);
  if (n == nullptr) throw std::runtime_error("missing " + key);
  return std::get<double>(n->value);
}

std::vector<double> note_list(const report::Table& t, const std::string& key) {
  const auto* n = t.find(key);
  if (n == nullptr) throw std::runtime_error("missing " + key);
  return std::get<std::vector<double>>(n->value);
}

std::string csv(const report::Table& t) {
  std::ostringstream os;
  report::write_csv(os, t);
  return os.str();
}

}  // namespace

TEST(Fit, ExactPowerLaw) {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3.0 * v * v);
  const auto f = fit_loglog(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, std::log10(3.0), 1e-14);
  EXPECT_LT(f.residual, 1e-14);
  EXPECT_THROW(fit_loglog({1.0}, {1.0}), InvalidArgument);
  EXPECT_THROW(fit_loglog({1.0, 2.0}, {1.0, -1.0}), InvalidArgument);
}

TEST(Extrema, LocalMaximaAndSteadyOnset) {
  const std::vector<double> y{0, 1, 0, 2, 2, 1, 3};
  const auto m = local_maxima(y);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], 1u);
  EXPECT_EQ(m[1], 3u);

  std::vector<double> x, v;
  for (int i = 0; i <= 100; ++i) {
    x.push_back(0.1 * i);
    v.push_back(1.0 + (x.back() < 4.0 ? 0.5 * std::sin(5.0 * x.back()) : 0.0));
  }
  const auto onset = steady_onset(x, v, 1.0);
  ASSERT_TRUE(onset.has_value());
  EXPECT_NEAR(*onset, 4.0, 0.11);
  EXPECT_FALSE(steady_onset(x, v, 20.0).has_value());
}

TEST(ScanN, HeisenbergSlope) {
  auto cfg = config::parse("profile.value = 0.015\n");
  const auto out = run_scan_n(cfg);
  EXPECT_EQ(out.rows.size(), 20u);
  EXPECT_NEAR(note_double(out.table, "slope_F_global[omega_p=0.015]"), 2.0, 0.05);
  for (const auto& r : out.rows) EXPECT_LE(r.check, kRowTolerance);
}

TEST(ScanN, ProductStateHasUnitSlope) {
  auto cfg = config::parse("profile.value = 0.015\nstate.kind = product\n");
  const auto out = run_scan_n(cfg);
  EXPECT_NEAR(note_double(out.table, "slope_F_general[omega_p=0.015]"), 1.0, 0.05);
}

TEST(ScanN, RadiusSweepApproachesQuartic) {
  auto cfg = config::parse(
      "profile.value = 1\nsweep.variable = radius\nsweep.min = 10\nsweep.max = 100\nstate.N = 10\n");
  const auto out = run_scan_n(cfg);
  EXPECT_NEAR(note_double(out.table, "slope_F_partial[omega_p=1]"), 4.0, 0.05);
}

TEST(ScanN, WrongVariableRejected) {
  auto cfg = config::parse("profile.value = 1\nsweep.variable = tau\nsweep.min = 1\nsweep.max = 2\n");
  EXPECT_THROW(run_scan_n(cfg), ConfigError);
  EXPECT_THROW(run_scan_alpha(cfg), ConfigError);
}

TEST(ScanAlpha, PeriodicInPhase) {
  auto cfg = config::parse(
      "profile.value = 0.015\nstate.alpha_re = 2\nstate.N = 100\n"
      "sweep.variable = theta_alpha\nsweep.min = -1\nsweep.max = 1\nsweep.points = 41\nsweep.scale = linear\n");
  const auto out = run_scan_alpha(cfg);
  EXPECT_NEAR(out.rows.front().f_global, out.rows.back().f_global, 1e-9 * out.rows.front().f_global);
  const auto maxima = note_list(out.table, "maxima_F_global");
  ASSERT_FALSE(maxima.empty());
}

TEST(ScanAlpha, ZeroModulusIsFlat) {
  auto cfg = config::parse(
      "profile.value = 0.015\nstate.alpha_re = 0\nsweep.variable = theta_alpha\n"
      "sweep.min = 0\nsweep.max = 2\nsweep.points = 9\nsweep.scale = linear\n");
  const auto out = run_scan_alpha(cfg);
  for (const auto& r : out.rows) EXPECT_EQ(r.f_global, out.rows.front().f_global);
}

TEST(ScanAlpha, ModulusSweepAtOddMultipleOfPi) {
  auto cfg = config::parse(
      "profile.value = 0.015\nstate.alpha_re = -1\nstate.N = 100\nsweep.variable = abs_alpha\n"
      "sweep.min = 0.01\nsweep.max = 3\nsweep.points = 60\nsweep.scale = linear\n");
  const auto out = run_scan_alpha(cfg);
  EXPECT_TRUE(std::get<bool>(out.table.find("nondecreasing_F_global")->value));
}

TEST(ScanAlpha, ModulusSweepAtEvenMultipleOfPiDips) {
  auto cfg = config::parse(
      "profile.value = 0.015\nstate.alpha_re = 1\nstate.N = 100\nsweep.variable = abs_alpha\n"
      "sweep.min = 0.01\nsweep.max = 3\nsweep.points = 60\nsweep.scale = linear\n");
  const auto out = run_scan_alpha(cfg);
  EXPECT_FALSE(std::get<bool>(out.table.find("nondecreasing_F_global")->value));
}

TEST(ScanTau, StructureOfTheTauSweep) {
  auto cfg = config::parse(
      "state.N = 100\nsweep.variable = tau\nsweep.min = 0.05\nsweep.max = 6\n"
      "sweep.points = 120\nsweep.scale = linear\n");
  const auto out = run_scan_tau(cfg);
  const auto equal = note_list(out.table, "equality_tau_periods");
  EXPECT_EQ(equal, (std::vector<double>{1, 2, 3, 4, 5, 6}));
  const auto maxima = note_list(out.table, "maxima_F_global_per_N2");
  ASSERT_EQ(maxima.size(), 6u);
  for (std::size_t l = 1; l < maxima.size(); ++l) EXPECT_NEAR(maxima[l], l + 0.5, 0.05 + 1e-12);
  for (double r : note_list(out.table, "ratio_at_maxima")) EXPECT_GT(r, 2.5);
  EXPECT_EQ(out.table.columns.size(), out.table.rows.front().size());
}

TEST(ScanTau, RequiresConstantProfile) {
  auto cfg = config::parse(
      "profile.kind = piecewise\nprofile.segments = 1:3.14159265358979\nsweep.variable = tau\n"
      "sweep.min = 1\nsweep.max = 2\n");
  EXPECT_THROW(run_scan_tau(cfg), ConfigError);
}

TEST(Output, CsvIsDeterministicAndVersioned) {
  auto cfg = config::parse("profile.value = 0.005, 0.015\n");
  const auto a = csv(run_scan_n(cfg).table);
  const auto b = csv(run_scan_n(cfg).table);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("# sagnac-qfi v1\n", 0), 0u);
  EXPECT_NE(a.find("\nN,omega_p,tau,F_partial,F_global,F_general,beta,gamma,lambda1"), std::string::npos);
  EXPECT_NE(a.find("qfi_unit=time^2"), std::string::npos);
}

TEST(Output, JsonParses) {
  auto cfg = config::parse("profile.value = 1\n");
  std::ostringstream os;
  report::write_json(os, run_qfi(cfg).table);
  const auto doc = nlohmann::json::parse(os.str());
  EXPECT_EQ(doc["schema"], "sagnac-qfi v1");
  EXPECT_EQ(doc["columns"].size(), doc["rows"][0].size());
  EXPECT_TRUE(doc["summary"].contains("heisenberg_fraction"));
}

TEST(Coeffs, OneRowPerSeries) {
  auto cfg = config::parse("profile.value = 1, 0.5\n");
  const auto out = run_coeffs(cfg);
  ASSERT_EQ(out.table.rows.size(), 2u);
  EXPECT_NEAR(out.table.rows[0][5], 0.5, 1e-14);  // C2 at tau = pi
}

TEST(Oracle, DefaultSuitePasses) {
  auto cfg = config::parse("oracle.steps = 0\noracle.N = 1\n");
  const auto out = run_oracle_check(cfg, 1);
  EXPECT_TRUE(out.passed);
  EXPECT_EQ(out.table.rows.size(), 6u);
}

TEST(Oracle, CorruptedC2IsDetected) {
  auto cfg = config::parse("oracle.steps = 0\noracle.N = 1\ntest.corrupt_c2_sign = true\n");
  EXPECT_FALSE(run_oracle_check(cfg, 1).passed);
}

TEST(Oracle, RandomDrawsAreSeeded) {
  auto cfg = config::parse("oracle.steps = 0\noracle.N = 1\noracle.draws = 2\noracle.tau_periods = 1\n");
  const auto a = run_oracle_check(cfg, 42);
  const auto b = run_oracle_check(cfg, 42);
  EXPECT_EQ(csv(a.table), csv(b.table));
  EXPECT_EQ(a.table.rows.size(), 4u);
}

TEST(Oracle, SizeGuard) {
  auto cfg = config::parse("oracle.N = 4\n");
  EXPECT_THROW(run_oracle_check(cfg, 1), SizeGuardError);
}
