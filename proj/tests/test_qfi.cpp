#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "sagnac/errors.hpp"
#include "sagnac/qfi.hpp"

using namespace sagnac;
using std::numbers::pi;

namespace {

struct Point {
  model::PhysicalParams params;
  model::DerivedConstants k;
  model::CoefficientSet c;
};

Point at(double tau, double radius = 1.0, double rotation = 0.0) {
  Point s;
  s.params.ring_radius = radius;
  s.params.rotation_rate = rotation;
  s.k = model::derive_constants(s.params);
  s.c = model::coefficients(s.params, model::DrivingProfile::half_turn(tau), tau);
  return s;
}

double general(const Point& s, const states::StateFamily& f, int n_particles) {
  const auto gen = qfi::make_generator(s.params, s.k, s.c, n_particles);
  return qfi::qfi_general(states::correlations_generic(states::make_state(f), s.c.c1), gen, s.k).qfi;
}

}  // namespace

TEST(ClosedForm, FrozenHalfPeriodValues) {
  const auto s = at(pi);
  const double partial = qfi::qfi_partial_closed(0, 1, s.k, s.c);
  const double global = qfi::qfi_global_closed({-1.0, 0.0}, 1, s.k, s.c);
  EXPECT_NEAR(partial, 47.47841760435743, 1e-11);
  EXPECT_NEAR(global, 150.56454461489128, 1e-10);
  EXPECT_NEAR(qfi::qfi_difference({-1.0, 0.0}, 1, s.k, s.c).value, 103.08612701053386, 1e-10);
  EXPECT_NEAR(global - partial, qfi::qfi_difference({-1.0, 0.0}, 1, s.k, s.c).value, 1e-11);
}

TEST(ClosedForm, CommensurateValue) {
  model::PhysicalParams p;
  EXPECT_NEAR(qfi::qfi_commensurate(100, p), 394784.1760435743, 1e-8);
  p.ring_radius = 2.0;
  const auto s = at(2.0 * pi, 2.0);
  EXPECT_NEAR(qfi::qfi_commensurate(1, p), 631.6546816697189, 1e-10);
  EXPECT_NEAR(qfi::qfi_global_closed({0.3, 0.2}, 1, s.k, s.c), 631.6546816697189, 1e-10);
}

TEST(ClosedForm, ProductHasNoQuadraticTerm) {
  const auto s = at(2.0);
  const double f1 = qfi::qfi_product_closed(1, 1, s.k, s.c);
  EXPECT_NEAR(qfi::qfi_product_closed(1, 10, s.k, s.c), 10.0 * f1, 1e-10 * f1);
}

TEST(General, MatchesClosedFormsOnRandomDraws) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5), tau(0.2, 15.0), radius(0.2, 3.0);
  std::uniform_int_distribution<int> level(0, 3), count(1, 500);
  for (int k = 0; k < 40; ++k) {
    const auto s = at(tau(rng), radius(rng));
    const Complex alpha{u(rng), u(rng)};
    const int n = level(rng), big_n = count(rng);
    for (const states::StateFamily& f :
         {states::StateFamily{states::PartialDisplacedFock{alpha, n}},
          states::StateFamily{states::GlobalCoherent{alpha}},
          states::StateFamily{states::ProductDisplacedFock{alpha, n}}}) {
      const double closed = qfi::qfi_closed(f, big_n, s.k, s.c);
      EXPECT_LT(qfi::relative_difference(general(s, f, big_n), closed), 1e-10);
    }
  }
}

TEST(General, RadiusPolynomialReproducesQfi) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0), radius(0.1, 4.0);
  for (int k = 0; k < 20; ++k) {
    const auto s = at(1.0 + 3.0 * std::abs(u(rng)), radius(rng));
    const auto gen = qfi::make_generator(s.params, s.k, s.c, 7);
    const auto corr = states::correlations_closed_form(states::GlobalCoherent{{u(rng), u(rng)}}, s.c.c1);
    const auto b = qfi::qfi_general(corr, gen, s.k);
    EXPECT_LT(qfi::relative_difference(b.radius_polynomial(), b.qfi), 1e-12);
  }
}

TEST(General, LambdasAreRadiusIndependent) {
  const auto corr_for = [](const Point& s) {
    return states::correlations_closed_form(states::GlobalCoherent{{0.4, -0.7}}, s.c.c1);
  };
  const auto a = at(2.2, 0.5), b = at(2.2, 3.0);
  const auto ba = qfi::qfi_general(corr_for(a), qfi::make_generator(a.params, a.k, a.c, 3), a.k);
  const auto bb = qfi::qfi_general(corr_for(b), qfi::make_generator(b.params, b.k, b.c, 3), b.k);
  EXPECT_NEAR(ba.lambda1, bb.lambda1, 1e-12 * std::abs(ba.lambda1));
  EXPECT_NEAR(ba.lambda2, bb.lambda2, 1e-12 * std::abs(ba.lambda2));
  EXPECT_NEAR(ba.lambda3, bb.lambda3, 1e-12 * std::abs(ba.lambda3));
}

TEST(General, HeisenbergFraction) {
  const auto s = at(pi);
  const auto gen = qfi::make_generator(s.params, s.k, s.c, 1000);
  const auto b = qfi::qfi_general(
      states::correlations_closed_form(states::PartialDisplacedFock{{}, 0}, s.c.c1), gen, s.k);
  EXPECT_GT(b.heisenberg_fraction, 0.99);
  const auto p = qfi::qfi_general(
      states::correlations_closed_form(states::ProductDisplacedFock{{}, 0}, s.c.c1), gen, s.k);
  EXPECT_DOUBLE_EQ(p.heisenberg_fraction, 0.0);
}

TEST(General, RejectsUnrealizableCorrelations) {
  const auto s = at(pi);
  states::CorrelationSet bad;
  bad.var_x1 = 1.0;
  bad.cov_x1_x2 = -5.0;
  const auto gen = qfi::make_generator(s.params, s.k, s.c, 10);
  EXPECT_THROW(qfi::qfi_general(bad, gen, s.k), ConsistencyError);
  EXPECT_THROW(qfi::make_generator(s.params, s.k, s.c, 0), InvalidArgument);
}

TEST(Difference, RegimeClassification) {
  const auto s = at(pi);  // C1 = -1, so Re(C1 alpha*) = -Re(alpha)
  const double edge = -s.k.t_s * s.c.c2 / s.k.t_c;
  EXPECT_EQ(qfi::qfi_difference({-0.5, 0.0}, 10, s.k, s.c).advantage, qfi::Advantage::guaranteed);
  EXPECT_EQ(qfi::qfi_difference({0.1 - edge, 0.0}, 10, s.k, s.c).advantage, qfi::Advantage::guaranteed);
  const auto mid = qfi::qfi_difference({-edge / 2, 0.0}, 10, s.k, s.c);
  EXPECT_EQ(mid.advantage, qfi::Advantage::loses);
  EXPECT_FALSE(mid.global_wins());

  model::PhysicalParams zero_radius;
  zero_radius.ring_radius = 0.0;
  const auto k0 = model::derive_constants(zero_radius);
  EXPECT_EQ(qfi::qfi_difference({1.0, 0.0}, 10, k0, s.c).advantage, qfi::Advantage::evaluated);
}

TEST(Difference, NonNegativeInRegime) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0), tau(0.2, 20.0);
  int checked = 0;
  while (checked < 200) {
    const auto s = at(tau(rng));
    const Complex alpha{u(rng), u(rng)};
    const auto d = qfi::qfi_difference(alpha, 50, s.k, s.c);
    if (d.advantage != qfi::Advantage::guaranteed) continue;
    ++checked;
    EXPECT_GE(d.value, -1e-12);
  }
}

TEST(Invariance, DisplacementLeavesPartialQfiUnchanged) {
  const auto s = at(1.7);
  for (int n : {0, 1, 2}) {
    const auto gen = qfi::make_generator(s.params, s.k, s.c, 5);
    EXPECT_TRUE(qfi::displacement_invariance_check(n, {1.2, -0.8}, 5, s.k, s.c, gen));
  }
}

TEST(Invariance, RotationRateDoesNotEnter) {
  const states::StateFamily f = states::GlobalCoherent{{-0.6, 0.9}};
  const auto a = at(2.5, 1.0, 0.0), b = at(2.5, 1.0, 10.0);
  EXPECT_EQ(qfi::qfi_closed(f, 20, a.k, a.c), qfi::qfi_closed(f, 20, b.k, b.c));
  EXPECT_LT(qfi::relative_difference(general(a, f, 20), general(b, f, 20)), 1e-12);
}

TEST(Generator, ConstantTerm) {
  const auto s = at(pi, 1.0, 0.5);
  const auto g = qfi::make_generator(s.params, s.k, s.c, 4);
  EXPECT_NEAR(g.constant_term(), 4.0 * s.c.c0, 1e-15);
  EXPECT_NEAR(s.c.c0, s.k.sagnac_phase / (2.0 * pi) * pi, 1e-14);
}
