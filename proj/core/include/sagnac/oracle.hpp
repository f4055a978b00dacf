#pragma once

#include <cstddef>
#include <vector>

#include "sagnac/linalg.hpp"
#include "sagnac/model.hpp"
#include "sagnac/states.hpp"

// Brute-force checks on truncated Fock spaces. Nothing here uses the analytic
// generator or the closed-form correlations; it only needs the evolution operator.
namespace sagnac::oracle {

/// Dense operator on Fock levels 0..d-1.
using FockOperator = CMatrix;

inline constexpr std::size_t kDefaultHeadroom = 8;
inline constexpr std::size_t kDefaultSizeGuard = 200000;

/// exp(eta a^dagger - eta* a) on the truncated basis.
FockOperator build_displacement(Complex eta, std::size_t d);

/// exp(-i phase a^dagger a).
FockOperator free_rotation(double phase, std::size_t d);

/// U(tau) = exp(-i omega a^dagger a tau) exp(i Phi) D[eta] for one spin branch.
/// Throws TruncationError if D[eta] pushes the vacuum past the cutoff.
FockOperator build_evolution_closed(const model::PhysicalParams& params,
                                    const model::DrivingProfile& profile, double tau, Spin spin,
                                    std::size_t d);

/// Midpoint time-ordered product of exp(-i H(t_j) dt / hbar) over `steps` (>= 100) slices.
FockOperator build_evolution_stepped(const model::PhysicalParams& params,
                                     const model::DrivingProfile& profile, double tau, Spin spin,
                                     std::size_t d, int steps);

/// Number of leading levels m with D(eta)|m> leaking less than `bound` past the cutoff;
/// the block on which truncated operators are compared.
std::size_t trusted_levels(Complex eta, std::size_t d, double bound = 1e-14);

struct ConvergenceReport {
  std::vector<int> steps;
  std::vector<double> errors;  ///< max-norm on the trusted block vs the closed form
  double order = 0.0;          ///< from the last two entries
};

/// Closed vs stepped evolution at each step count in `steps` (increasing).
/// `trusted` = 0 picks trusted_levels for the larger branch displacement.
ConvergenceReport stepped_convergence(const model::PhysicalParams& params,
                                      const model::DrivingProfile& profile, double tau, Spin spin,
                                      std::size_t d, std::size_t trusted,
                                      const std::vector<int>& steps);

/// Default finite-difference step in Omega:
/// 1e-4 max(1, |Omega|) hbar / (m r^2 + hbar / omega).
double default_omega_step(const model::PhysicalParams& params);

/// i (d U^dagger / d Omega) U by central differences with one Richardson level.
/// Throws NumericalError when the result is not Hermitian on the leading
/// `trusted` levels (default trusted_levels for this branch) within `hermiticity_tol`.
FockOperator generator_numeric(const model::PhysicalParams& params,
                               const model::DrivingProfile& profile, double tau, Spin spin,
                               std::size_t d, double omega_step = 0.0, std::size_t trusted = 0,
                               double hermiticity_tol = 1e-6);

/// T_C [C1 a^dagger + h.c.] + C0 / omega + T_S C2 sigma_z for one spin branch.
FockOperator generator_analytic(const model::DerivedConstants& constants,
                                const model::CoefficientSet& coeffs, double trap_frequency,
                                Spin spin, std::size_t d);

/// Operators on one site (spin (x) Fock, spin-major ordering: up block first).
CMatrix site_operator(const FockOperator& up_block, const FockOperator& down_block);
CMatrix site_spin_z(std::size_t d);
CMatrix site_quadrature(Complex c1, std::size_t d);

/// Dense amplitude vector on ((spin) (x) Fock)^(x)N.
class MultiSiteState {
 public:
  MultiSiteState(CVector amplitudes, int sites, std::size_t d,
                 std::size_t size_guard = kDefaultSizeGuard);

  /// Explicit expansion of a two-branch state, padded to `d` levels per site.
  static MultiSiteState from(const states::GhzProductState& state, std::size_t d,
                             std::size_t size_guard = kDefaultSizeGuard);

  const CVector& amplitudes() const noexcept { return amplitudes_; }
  int sites() const noexcept { return sites_; }
  std::size_t truncation() const noexcept { return d_; }
  Eigen::Index site_dimension() const noexcept { return static_cast<Eigen::Index>(2 * d_); }

  /// O acting on site k (0-based) of `v`.
  CVector apply_site(const CMatrix& op, int site, const CVector& v) const;
  CVector apply_site(const CMatrix& op, int site) const { return apply_site(op, site, amplitudes_); }
  /// sum_k O_k |psi>
  CVector apply_sum(const CMatrix& op) const;
  /// (x)_k O |psi>
  CVector apply_each(const CMatrix& op) const;

  /// <psi| O_k |psi> (real part).
  double expectation(const CMatrix& op, int site) const;

 private:
  CVector amplitudes_;
  int sites_;
  std::size_t d_;
};

/// Dimension (2d)^N, throwing SizeGuardError above `guard`.
std::size_t checked_dimension(int sites, std::size_t d, std::size_t guard = kDefaultSizeGuard);

struct OracleOptions {
  std::size_t truncation = 0;      ///< 0 picks a cutoff from the state and the displacements
  double omega_step = 0.0;         ///< 0 uses default_omega_step
  double fidelity_step = 0.0;      ///< 0 uses 10 * omega_step
  double generator_shift = 0.0;    ///< constant c added to the generator (c * I)
  std::size_t size_guard = kDefaultSizeGuard;
};

/// Cutoff large enough that the evolution of every populated level of `state`
/// stays clear of the top `kDefaultHeadroom` levels.
std::size_t oracle_truncation(const states::GhzProductState& state,
                              const model::CoefficientSet& coeffs);

/// 4 Var(sum_k H_k) with H_k the numeric single-site generator.
double qfi_variance_numeric(const states::GhzProductState& state,
                            const model::PhysicalParams& params,
                            const model::DrivingProfile& profile, double tau,
                            const OracleOptions& options = {});

/// 8 (1 - |<psi(Omega)|psi(Omega + delta)>|) / delta^2 at a single step, no extrapolation.
double fidelity_estimate(const states::GhzProductState& state, const model::PhysicalParams& params,
                         const model::DrivingProfile& profile, double tau, double delta,
                         const OracleOptions& options = {});

/// Fidelity-susceptibility QFI with one Richardson level in delta.
/// Throws NumericalError if the overlap does not decay quadratically.
double qfi_fidelity_numeric(const states::GhzProductState& state,
                            const model::PhysicalParams& params,
                            const model::DrivingProfile& profile, double tau,
                            const OracleOptions& options = {});

struct CovarianceReduction {
  double full = 0.0;     ///< Cov(sum A_k, sum B_k) from the whole vector
  double reduced = 0.0;  ///< N Cov(A_1, B_1) + (N^2 - N) Cov(A_1, B_2)
  double error = 0.0;
  bool holds = false;
};

/// Symmetrized covariance identity for permutation-symmetric states; A, B Hermitian.
CovarianceReduction covariance_reduction_check(const MultiSiteState& state, const CMatrix& a,
                                               const CMatrix& b, double tol = 1e-10);

}  // namespace sagnac::oracle
