#pragma once

#include "sagnac/model.hpp"
#include "sagnac/states.hpp"

namespace sagnac::qfi {

/// Multi-atom generator T_C sum_k X_k + (N / omega) C0 + T_S C2 J_z.
struct GeneratorSpec {
  double t_c = 0.0;
  double t_s = 0.0;
  double c0 = 0.0;
  Complex c1{};
  double c2 = 0.0;
  double trap_frequency = 1.0;
  int n_particles = 1;

  /// c-number part (N / omega) C0; never enters the QFI.
  double constant_term() const noexcept { return n_particles * c0 / trap_frequency; }
};

GeneratorSpec make_generator(const model::PhysicalParams& params,
                             const model::DerivedConstants& constants,
                             const model::CoefficientSet& coeffs, int n_particles);

/// QFI split into single-site (beta) and two-site (gamma) parts, and into
/// powers of the reduced radius R: F = lambda1 R^2 + lambda2 R^3 + lambda3 R^4.
/// Units of qfi are time^2 (inverse variance of a rad/time parameter).
struct QfiBreakdown {
  double beta = 0.0;
  double gamma = 0.0;
  double qfi = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double reduced_radius = 0.0;
  double heisenberg_fraction = 0.0;  ///< 4 gamma N^2 / F, 0 when F == 0

  /// lambda1 R^2 + lambda2 R^3 + lambda3 R^4
  double radius_polynomial() const noexcept;
};

/// F = 4[(beta - gamma) N + gamma N^2] from a correlation set.
/// Throws ConsistencyError when the result is negative beyond roundoff.
QfiBreakdown qfi_general(const states::CorrelationSet& corr, const GeneratorSpec& gen,
                         const model::DerivedConstants& constants);

/// 4(2n+1) N T_C^2 |C1|^2 + 4 N^2 T_S^2 C2^2
double qfi_partial_closed(int n, int n_particles, const model::DerivedConstants& constants,
                          const model::CoefficientSet& coeffs);

/// 4 N^2 [2 T_C Re(C1 alpha*) + T_S C2]^2 + 4 N T_C^2 |C1|^2
double qfi_global_closed(Complex alpha, int n_particles, const model::DerivedConstants& constants,
                         const model::CoefficientSet& coeffs);

/// 4(2n+1) N T_C^2 |C1|^2, the unentangled spin-up product.
double qfi_product_closed(int n, int n_particles, const model::DerivedConstants& constants,
                          const model::CoefficientSet& coeffs);

/// Closed form for whichever family is named.
double qfi_closed(const states::StateFamily& family, int n_particles,
                  const model::DerivedConstants& constants, const model::CoefficientSet& coeffs);

enum class Advantage {
  guaranteed,  ///< Re(C1 a*) >= 0 or <= -T_S C2 / T_C: the global state never loses
  loses,       ///< strictly between the two bounds: the global state is worse
  evaluated,   ///< T_C == 0 makes the bound test meaningless; sign read from the value
};

struct QfiDifference {
  double value = 0.0;  ///< F(alpha,-alpha) - F(alpha,alpha)
  Advantage advantage = Advantage::evaluated;
  bool global_wins() const noexcept { return value >= 0.0; }
};

/// 16 N^2 [T_C Re(C1 alpha*) + T_S C2] [T_C Re(C1 alpha*)]
QfiDifference qfi_difference(Complex alpha, int n_particles,
                             const model::DerivedConstants& constants,
                             const model::CoefficientSet& coeffs);

/// 4 N^2 m^2 pi^2 r^4 / hbar^2: the common value of every closed form when
/// tau is a whole number of trap periods under a constant half-turn drive.
double qfi_commensurate(int n_particles, const model::PhysicalParams& params);

/// Checks F(alpha, alpha; n) == F(0, 0; n) within `rel_tol`, both from the
/// closed form and from correlations of explicitly displaced states.
bool displacement_invariance_check(int n, Complex alpha, int n_particles,
                                   const model::DerivedConstants& constants,
                                   const model::CoefficientSet& coeffs,
                                   const GeneratorSpec& gen, double rel_tol = 1e-12);

/// |a - b| / max(|a|, |b|), 0 when both vanish.
double relative_difference(double a, double b);

}  // namespace sagnac::qfi
