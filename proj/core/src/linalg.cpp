#include "sagnac/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace sagnac::linalg {
namespace {

// Backward-error thresholds on ||A||_1 for each diagonal Pade degree
// (Higham, SIAM J. Matrix Anal. Appl. 26, 2005).
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e+0;
constexpr double kTheta13 = 5.371920351148152e+0;

double norm1(const CMatrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Fills u (odd part) and v (even part) so that exp(a) ~ (v - u)^{-1} (v + u).
template <std::size_t N>
void pade_low(const CMatrix& a, const std::array<double, N>& b, CMatrix& u, CMatrix& v) {
  const auto n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  CMatrix odd = b[1] * id;
  CMatrix even = b[0] * id;
  CMatrix power = id;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    odd += b[k + 1] * power;
    even += b[k] * power;
  }
  u.noalias() = a * odd;
  v = std::move(even);
}

void pade13(const CMatrix& a, CMatrix& u, CMatrix& v) {
  constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  const auto n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  CMatrix tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  CMatrix odd = a6 * tmp;
  odd += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  u.noalias() = a * odd;
  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v.noalias() = a6 * tmp;
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace

CMatrix expm(const CMatrix& a) {
  const auto n = a.rows();
  if (n == 0) return a;

  CMatrix u(n, n);
  CMatrix v(n, n);
  const double norm = norm1(a);
  int squarings = 0;

  if (norm <= kTheta3) {
    pade_low(a, std::array<double, 4>{120.0, 60.0, 12.0, 1.0}, u, v);
  } else if (norm <= kTheta5) {
    pade_low(a, std::array<double, 6>{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0}, u, v);
  } else if (norm <= kTheta7) {
    pade_low(a,
             std::array<double, 8>{17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0,
                                   1512.0, 56.0, 1.0},
             u, v);
  } else if (norm <= kTheta9) {
    pade_low(a,
             std::array<double, 10>{17643225600.0, 8821612800.0, 2075673600.0,
                                    302702400.0, 30270240.0, 2162160.0, 110880.0, 3960.0,
                                    90.0, 1.0},
             u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    const CMatrix scaled = a * std::ldexp(1.0, -squarings);
    pade13(scaled, u, v);
  }

  CMatrix result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

CMatrix annihilation(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix a = CMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

CMatrix creation(std::size_t d) { return annihilation(d).adjoint(); }

CMatrix number(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix m = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) m(k, k) = static_cast<double>(k);
  return m;
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs_leading(const CMatrix& m, std::size_t block) {
  const auto b = std::min<Eigen::Index>(static_cast<Eigen::Index>(block),
                                        std::min(m.rows(), m.cols()));
  if (b == 0) return 0.0;
  return m.topLeftCorner(b, b).cwiseAbs().maxCoeff();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace sagnac::linalg
