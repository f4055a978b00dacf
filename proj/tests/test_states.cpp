#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sagnac/errors.hpp"
#include "sagnac/states.hpp"

using namespace sagnac;
using namespace sagnac::states;

namespace {

void expect_complex_near(Complex a, Complex b, double tol) {
  EXPECT_NEAR(a.real(), b.real(), tol);
  EXPECT_NEAR(a.imag(), b.imag(), tol);
}

void expect_correlations_near(const CorrelationSet& a, const CorrelationSet& b, double tol) {
  EXPECT_NEAR(a.var_x1, b.var_x1, tol);
  EXPECT_NEAR(a.var_sz1, b.var_sz1, tol);
  EXPECT_NEAR(a.cov_x1_sz1, b.cov_x1_sz1, tol);
  EXPECT_NEAR(a.cov_x1_x2, b.cov_x1_x2, tol);
  EXPECT_NEAR(a.cov_sz1_sz2, b.cov_sz1_sz2, tol);
  EXPECT_NEAR(a.cov_x1_sz2, b.cov_x1_sz2, tol);
}

}  // namespace

TEST(DisplacedFock, CoherentColumnFrozen) {
  const auto v = displaced_fock_amplitudes({0.0, 2.0}, 0, 6);
  const Complex expected[] = {{0.13533528, 0}, {0, 0.27067057}, {-0.38278599, 0},
                              {0, -0.44200318}, {0.44200318, 0}, {0, 0.39533967}};
  for (int k = 0; k < 6; ++k) expect_complex_near(v(k), expected[k], 1e-8);
}

TEST(DisplacedFock, RealNegativeAlpha) {
  const auto v = displaced_fock_amplitudes({-1.0, 0.0}, 0, 8);
  double fact = 1.0;
  for (int k = 0; k < 8; ++k) {
    if (k > 0) fact *= k;
    const double expected = std::exp(-0.5) * (k % 2 ? -1.0 : 1.0) / std::sqrt(fact);
    expect_complex_near(v(k), {expected, 0.0}, 1e-15);
  }
}

TEST(DisplacedFock, ExcitedColumnFrozen) {
  const auto v = displaced_fock_amplitudes({0.7, -0.3}, 2, 6);
  const Complex expected[] = {{0.21164089709985678, 0.2222229419548496},
                              {-0.5259276292931441, -0.22539755541134765},
                              {0.0061357612541443, 0.0},
                              {0.43189784952151117, -0.18509907836636189},
                              {0.33249230890605125, -0.3491169243513539},
                              {0.1081251107300557, -0.2906739989756042}};
  for (int k = 0; k < 6; ++k) expect_complex_near(v(k), expected[k], 1e-13);
}

TEST(DisplacedFock, ColumnsAreOrthonormal) {
  const Complex alpha{1.1, 0.4};
  const std::size_t d = auto_truncation(alpha, 4, 1e-15);
  for (int n = 0; n <= 4; ++n)
    for (int m = 0; m <= n; ++m) {
      const Complex ip = displaced_fock_amplitudes(alpha, m, d).dot(displaced_fock_amplitudes(alpha, n, d));
      EXPECT_NEAR(std::abs(ip), m == n ? 1.0 : 0.0, 1e-12) << m << "," << n;
    }
}

TEST(DisplacedFock, LargeAlphaStaysFinite) {
  const auto v = displaced_fock_amplitudes({12.0, -5.0}, 3, auto_truncation({12.0, -5.0}, 3));
  EXPECT_TRUE(v.allFinite());
  EXPECT_NEAR(v.squaredNorm(), 1.0, 1e-9);
}

TEST(Truncation, AutoMeetsBound) {
  for (double bound : {1e-6, 1e-10, 1e-16}) {
    const std::size_t d = auto_truncation({2.0, 1.0}, 2, bound);
    EXPECT_LE(displaced_fock_leakage({2.0, 1.0}, 2, d), bound);
    EXPECT_GT(d, 7u);
  }
}

TEST(Truncation, ExplicitTooSmallReportsRequirement) {
  try {
    displaced_fock_state({2.0, 0.0}, 1, Truncation{5, 1e-10});
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.required_truncation(), 5u);
    EXPECT_NO_THROW(displaced_fock_state({2.0, 0.0}, 1, Truncation{e.required_truncation(), 1e-10}));
  }
}

TEST(Truncation, StateIsNormalized) {
  const auto v = displaced_fock_state({0.5, -1.5}, 2, {});
  EXPECT_NEAR(v.squaredNorm(), 1.0, 1e-14);
}

TEST(Branches, ValidationAndWeights) {
  const auto up = BranchState(Spin::up, displaced_fock_state({}, 0, {}));
  const auto down = BranchState(Spin::down, displaced_fock_state({}, 0, {}));
  EXPECT_THROW(GhzProductState(down, up, 1), InvalidArgument);
  EXPECT_THROW(GhzProductState(up, down, 0), InvalidArgument);
  EXPECT_THROW(GhzProductState(up, down, 1, 1.5), InvalidArgument);
  CVector bad = CVector::Zero(3);
  bad(0) = 2.0;
  EXPECT_THROW(BranchState(Spin::up, bad), InvalidArgument);

  const auto g = make_globally_entangled({0.3, 0.1}, {}, 4);
  EXPECT_EQ(g.n_particles(), 4);
  EXPECT_DOUBLE_EQ(g.weight(Spin::up), 0.5);
  EXPECT_EQ(g.up().truncation(), g.down().truncation());
  EXPECT_DOUBLE_EQ(make_product({0.3, 0.1}, 1).weight(Spin::down), 0.0);
}

TEST(Moments, CoherentQuadrature) {
  const Complex alpha{0.8, -0.6}, c1{0.3, 0.9};
  const auto m = quadrature_moments(displaced_fock_state(alpha, 0, {}), c1);
  EXPECT_NEAR(m.mean, 2.0 * (c1 * std::conj(alpha)).real(), 1e-12);
  EXPECT_NEAR(m.variance, std::norm(c1), 1e-12);
}

TEST(Moments, FockVariance) {
  const Complex c1{0.0, 1.0};
  for (int n = 0; n < 4; ++n) {
    const auto m = quadrature_moments(displaced_fock_state({}, n, {}), c1);
    EXPECT_NEAR(m.mean, 0.0, 1e-14);
    EXPECT_NEAR(m.variance, 2.0 * n + 1.0, 1e-12);
  }
}

TEST(Correlations, GenericMatchesClosedFormForRandomDraws) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-2.0, 2.0), tau(0.1, 12.0);
  std::uniform_int_distribution<int> level(0, 4);
  for (int k = 0; k < 20; ++k) {
    const Complex alpha{u(rng), u(rng)};
    const int n = level(rng);
    const Complex c1 = model::c1_of(1.0, tau(rng));
    for (const StateFamily& f : {StateFamily{PartialDisplacedFock{alpha, n}},
                                 StateFamily{GlobalCoherent{alpha}},
                                 StateFamily{ProductDisplacedFock{alpha, n}}}) {
      const auto generic = correlations_generic(make_state(f), c1);
      expect_correlations_near(generic, correlations_closed_form(f, c1), 1e-10);
    }
  }
}

TEST(Correlations, IndependentOfParticleLabel) {
  const Complex c1 = model::c1_of(1.0, 2.0);
  const auto a = correlations_generic(make_globally_entangled({0.5, 0.5}, {}, 1), c1);
  const auto b = correlations_generic(make_globally_entangled({0.5, 0.5}, {}, 50), c1);
  expect_correlations_near(a, b, 0.0);
}

TEST(Correlations, UnequalWeightsShrinkSpinVariance) {
  const auto up = BranchState(Spin::up, displaced_fock_state({}, 0, {}));
  const auto down = BranchState(Spin::down, displaced_fock_state({}, 0, {}));
  const auto c = correlations_generic(GhzProductState(up, down, 2, 0.25), {1.0, 0.0});
  EXPECT_NEAR(c.var_sz1, 0.75, 1e-15);
  EXPECT_NEAR(c.cov_sz1_sz2, 0.75, 1e-15);
}
