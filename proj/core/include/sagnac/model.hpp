#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sagnac/linalg.hpp"

namespace sagnac {

/// Branch label: eigenvalue of sigma_z on a site.
enum class Spin : int { up = 1, down = -1 };

constexpr double sign_of(Spin s) noexcept { return static_cast<double>(static_cast<int>(s)); }

}  // namespace sagnac

namespace sagnac::model {

/// Physical inputs of the ring interferometer. Natural units (m = hbar = 1) by default.
struct PhysicalParams {
  double mass = 1.0;
  double hbar = 1.0;
  double trap_frequency = 1.0;  ///< omega, rad/time
  double ring_radius = 1.0;     ///< r
  double rotation_rate = 0.0;   ///< Omega, the parameter being estimated

  /// Throws InvalidArgument unless m > 0, hbar > 0, omega > 0, r >= 0 and all finite.
  void validate() const;
};

struct DerivedConstants {
  double t_c = 0.0;                      ///< r sqrt(2m / (omega hbar))
  double t_s = 0.0;                      ///< 2 m pi r^2 / hbar ("Sagnac time")
  double sagnac_phase = 0.0;             ///< t_s * Omega
  double characteristic_momentum = 0.0;  ///< sqrt(m hbar omega / 2)
  double oscillator_length = 0.0;        ///< sqrt(hbar / (m omega))
  double reduced_radius = 0.0;           ///< r / oscillator_length
};

DerivedConstants derive_constants(const PhysicalParams& params);

/// Coupling prefactor sqrt(m omega / (2 hbar)) * r of the driving term.
double coupling(const PhysicalParams& params);

// ---------------------------------------------------------------------------
// Driving profile omega_p(t)

struct ConstantDrive {
  double value = 0.0;
};

struct Segment {
  double duration = 0.0;
  double value = 0.0;
};

struct PiecewiseDrive {
  std::vector<Segment> segments;
};

/// Samples on a uniform grid t_0 = 0 < t_1 < ... < t_{n-1}.
struct SampledDrive {
  std::vector<double> times;
  std::vector<double> values;
};

enum class ProfileKind { constant, piecewise, sampled };

enum class Normalization {
  strict,   ///< reject unless |integral - pi| <= 1e-8 pi
  rescale,  ///< multiply all values so the integral is exactly pi
};

/// Angular speed of the counter-rotating guides, omega_p(t) >= 0.
class DrivingProfile {
 public:
  static DrivingProfile constant(double value);
  /// Constant drive pi / tau, i.e. exactly half a turn in time tau.
  static DrivingProfile half_turn(double tau);
  static DrivingProfile piecewise(std::vector<Segment> segments);
  static DrivingProfile sampled(std::vector<double> times, std::vector<double> values);

  ProfileKind kind() const noexcept;
  const std::variant<ConstantDrive, PiecewiseDrive, SampledDrive>& data() const noexcept {
    return data_;
  }

  /// omega_p(t). Sampled profiles use local cubic interpolation.
  double value_at(double t) const;

  /// Copy with every value multiplied by `factor`.
  DrivingProfile scaled(double factor) const;

  /// Sampled copy of this profile on `samples` uniform points over [0, tau].
  DrivingProfile resampled(double tau, std::size_t samples) const;

  std::string describe() const;

 private:
  explicit DrivingProfile(std::variant<ConstantDrive, PiecewiseDrive, SampledDrive> d)
      : data_(std::move(d)) {}

  std::variant<ConstantDrive, PiecewiseDrive, SampledDrive> data_;
};

/// Integral of omega_p over [0, tau].
double profile_integral(const DrivingProfile& profile, double tau);

/// Enforces integral(omega_p, 0..tau) == pi according to `policy`.
DrivingProfile normalize(const DrivingProfile& profile, double tau,
                         Normalization policy = Normalization::strict);

// ---------------------------------------------------------------------------
// Generator coefficients

struct CoefficientSet {
  double c0 = 0.0;      ///< (phi_s / 2 pi)(omega tau - sin omega tau)
  Complex c1{};         ///< i sin(omega tau / 2) exp(i omega tau / 2)
  double c2 = 0.0;      ///< 1/2 (1 - (1/pi) int omega_p cos[omega (t - tau)] dt)
  Complex eta_up{};     ///< displacement amplitude for sigma_z = +1
  Complex eta_down{};   ///< displacement amplitude for sigma_z = -1
  double phi_up = 0.0;  ///< branch phase for sigma_z = +1
  double phi_down = 0.0;

  Complex eta(Spin s) const noexcept { return s == Spin::up ? eta_up : eta_down; }
  double phi(Spin s) const noexcept { return s == Spin::up ? phi_up : phi_down; }
};

/// C1(tau); depends only on omega tau.
Complex c1_of(double omega, double tau);

/// Re(C1 alpha*), the combination entering every coherent-state correlation.
inline double re_c1_alpha_conj(Complex c1, Complex alpha) {
  return (c1 * std::conj(alpha)).real();
}

/// All generator coefficients for a profile normalized over [0, tau].
///
/// Constant and piecewise profiles use closed-form integrals; sampled profiles
/// use composite Simpson rules (nested over the triangle t2 < t1 for the phase).
/// Throws InvalidArgument for tau <= 0 and InvalidProfile when the profile does
/// not integrate to pi.
CoefficientSet coefficients(const PhysicalParams& params, const DrivingProfile& profile,
                            double tau);

/// f(sigma_z, t) = sqrt(m omega / 2 hbar) r [Omega + sigma_z omega_p(t)].
double drive_amplitude(const PhysicalParams& params, const DrivingProfile& profile, Spin s,
                       double t);

// ---------------------------------------------------------------------------
// Quadrature on uniform grids (exposed for testing)

namespace quad {

/// Composite Simpson on uniform spacing h. Falls back to Simpson 3/8 on the
/// last three intervals for odd interval counts and to the trapezoid for two points.
template <typename T>
T simpson(std::span<const T> f, double h);

/// Running integrals F_i = int_0^{t_i} on a uniform grid, fourth-order accurate.
template <typename T>
std::vector<T> cumulative(std::span<const T> f, double h);

}  // namespace quad

}  // namespace sagnac::model
