#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "sagnac/linalg.hpp"

using namespace sagnac;

namespace {

CMatrix random_matrix(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = scale * Complex{g(rng), g(rng)};
  return m;
}

}  // namespace

TEST(Expm, ZeroIsIdentity) {
  const CMatrix z = CMatrix::Zero(5, 5);
  EXPECT_LT(linalg::max_abs(linalg::expm(z) - CMatrix::Identity(5, 5)), 1e-15);
}

TEST(Expm, NilpotentIsExact) {
  CMatrix n = CMatrix::Zero(3, 3);
  n(0, 1) = 2.0;
  n(1, 2) = 3.0;
  CMatrix expected = CMatrix::Identity(3, 3) + n;
  expected(0, 2) = 3.0;
  EXPECT_LT(linalg::max_abs(linalg::expm(n) - expected), 1e-14);
}

TEST(Expm, MatchesEigenAcrossNorms) {
  std::mt19937_64 rng(7);
  for (double scale : {1e-4, 0.05, 0.3, 1.0, 4.0, 30.0}) {
    const CMatrix a = random_matrix(rng, 12, scale);
    const CMatrix ours = linalg::expm(a);
    const CMatrix ref = a.exp();
    EXPECT_LT(linalg::max_abs(ours - ref) / std::max(1.0, linalg::max_abs(ref)), 1e-11)
        << "scale " << scale;
  }
}

TEST(Expm, AntiHermitianGivesUnitary) {
  std::mt19937_64 rng(11);
  const CMatrix h = random_matrix(rng, 20, 3.0);
  const CMatrix u = linalg::expm(kI * (h + h.adjoint()));
  EXPECT_LT(linalg::max_abs(u.adjoint() * u - CMatrix::Identity(20, 20)), 1e-12);
}

TEST(Expm, HermitianAgainstEigendecomposition) {
  std::mt19937_64 rng(3);
  CMatrix h = random_matrix(rng, 10, 2.0);
  h = (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CMatrix ref = es.eigenvectors() *
                      es.eigenvalues().array().exp().matrix().cast<Complex>().asDiagonal() *
                      es.eigenvectors().adjoint();
  EXPECT_LT(linalg::max_abs(linalg::expm(h) - ref) / linalg::max_abs(ref), 1e-12);
}

TEST(Ladder, CommutatorIsIdentityBelowCutoff) {
  const std::size_t d = 9;
  const CMatrix a = linalg::annihilation(d);
  const CMatrix c = a * linalg::creation(d) - linalg::creation(d) * a;
  EXPECT_LT(linalg::max_abs_leading(c - CMatrix::Identity(9, 9), d - 1), 1e-14);
  EXPECT_NEAR(c(8, 8).real(), -8.0, 1e-14);
  EXPECT_LT(linalg::max_abs(linalg::creation(d) * a - linalg::number(d)), 1e-14);
}

TEST(Kron, BlockLayout) {
  CMatrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  const CMatrix b = CMatrix::Identity(2, 2);
  const CMatrix k = linalg::kron(a, b);
  EXPECT_EQ(k.rows(), 4);
  EXPECT_EQ(k(0, 2), Complex(2.0));
  EXPECT_EQ(k(3, 1), Complex(3.0));
  EXPECT_EQ(k(1, 2), Complex(0.0));

  CVector u(2), v(3);
  u << 1.0, kI;
  v << 1.0, 2.0, 3.0;
  const CVector w = linalg::kron(u, v);
  EXPECT_EQ(w.size(), 6);
  EXPECT_EQ(w(4), Complex(0.0, 2.0));
}

TEST(MaxAbs, LeadingBlock) {
  CMatrix m = CMatrix::Zero(4, 4);
  m(3, 3) = 10.0;
  m(1, 0) = Complex(0.0, -2.0);
  EXPECT_DOUBLE_EQ(linalg::max_abs(m), 10.0);
  EXPECT_DOUBLE_EQ(linalg::max_abs_leading(m, 3), 2.0);
}
