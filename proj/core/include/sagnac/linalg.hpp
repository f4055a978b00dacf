#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace sagnac {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

}  // namespace sagnac

namespace sagnac::linalg {

/// Matrix exponential by scaling and squaring with a diagonal Pade approximant.
///
/// The Pade degree (3, 5, 7, 9 or 13) and the number of squarings are picked
/// from the 1-norm of the argument so that the backward error stays below
/// unit roundoff in double precision.
CMatrix expm(const CMatrix& a);

/// Truncated ladder operators on Fock levels 0..d-1.
CMatrix annihilation(std::size_t d);
CMatrix creation(std::size_t d);
CMatrix number(std::size_t d);

/// Largest entry modulus.
double max_abs(const CMatrix& m);

/// Largest entry modulus restricted to the leading `block` x `block` corner.
double max_abs_leading(const CMatrix& m, std::size_t block);

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

}  // namespace sagnac::linalg
