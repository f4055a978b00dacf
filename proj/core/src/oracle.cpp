#include "sagnac/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "sagnac/errors.hpp"
#include "sagnac/format.hpp"

namespace sagnac::oracle {
namespace {

using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kGuardLeakage = 1e-10;
constexpr double kOracleLeakage = 1e-16;

std::size_t resolve_trusted(std::size_t d, std::size_t trusted, Complex eta) {
  if (trusted != 0) return std::min(trusted, d);
  return trusted_levels(eta, d);
}

Complex larger_displacement(const model::CoefficientSet& c) {
  return std::abs(c.eta_up) >= std::abs(c.eta_down) ? c.eta_up : c.eta_down;
}

model::PhysicalParams shifted(const model::PhysicalParams& p, double delta) {
  model::PhysicalParams q = p;
  q.rotation_rate += delta;
  return q;
}

// i (U^dagger(+h) - U^dagger(-h)) / (2h) U(0)
FockOperator central_generator(const model::PhysicalParams& params,
                               const model::DrivingProfile& profile, double tau, Spin spin,
                               std::size_t d, double h, const FockOperator& u0) {
  const FockOperator up = build_evolution_closed(shifted(params, h), profile, tau, spin, d);
  const FockOperator down = build_evolution_closed(shifted(params, -h), profile, tau, spin, d);
  return kI * ((up.adjoint() - down.adjoint()) / (2.0 * h)) * u0;
}

// Single-site evolution blocks for both spin labels.
CMatrix site_evolution(const model::PhysicalParams& params, const model::DrivingProfile& profile,
                       double tau, std::size_t d) {
  return site_operator(build_evolution_closed(params, profile, tau, Spin::up, d),
                       build_evolution_closed(params, profile, tau, Spin::down, d));
}

std::size_t pick_truncation(const states::GhzProductState& state,
                            const model::PhysicalParams& params,
                            const model::DrivingProfile& profile, double tau,
                            const OracleOptions& options) {
  if (options.truncation != 0) return std::max(options.truncation, state.truncation());
  return oracle_truncation(state, model::coefficients(params, profile, tau));
}

}  // namespace

std::size_t trusted_levels(Complex eta, std::size_t d, double bound) {
  std::size_t m = 0;
  while (m < d && states::displaced_fock_leakage(eta, static_cast<int>(m), d) < bound) ++m;
  return m;
}

FockOperator build_displacement(Complex eta, std::size_t d) {
  const CMatrix a = linalg::annihilation(d);
  return linalg::expm(eta * a.adjoint() - std::conj(eta) * a);
}

FockOperator free_rotation(double phase, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  FockOperator r = FockOperator::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) r(k, k) = std::exp(-kI * (phase * static_cast<double>(k)));
  return r;
}

FockOperator build_evolution_closed(const model::PhysicalParams& params,
                                    const model::DrivingProfile& profile, double tau, Spin spin,
                                    std::size_t d) {
  if (d < 2) throw InvalidArgument("truncation must be >= 2");
  const auto coeffs = model::coefficients(params, profile, tau);
  const Complex eta = coeffs.eta(spin);
  if (states::displaced_fock_leakage(eta, 0, d) > kGuardLeakage) {
    const auto need = states::auto_truncation(eta, 0, kGuardLeakage);
    throw TruncationError("displacement |eta| = " + format_double(std::abs(eta)) +
                              " overflows " + std::to_string(d) + " levels; use at least " +
                              std::to_string(need),
                          need);
  }
  return free_rotation(params.trap_frequency * tau, d) * std::exp(kI * coeffs.phi(spin)) *
         build_displacement(eta, d);
}

FockOperator build_evolution_stepped(const model::PhysicalParams& params,
                                     const model::DrivingProfile& profile, double tau, Spin spin,
                                     std::size_t d, int steps) {
  params.validate();
  if (steps < 100) throw InvalidArgument("step count must be >= 100");
  if (!(tau > 0.0)) throw InvalidArgument("tau must be > 0");
  const double dt = tau / steps;
  const CMatrix a = linalg::annihilation(d);
  const CMatrix free_part = params.trap_frequency * linalg::number(d);
  const CMatrix drive_part = kI * (a - a.adjoint());

  const auto n = static_cast<Eigen::Index>(d);
  FockOperator u = FockOperator::Identity(n, n);
  FockOperator step;
  double last_f = std::nan("");
  for (int j = 0; j < steps; ++j) {
    const double t = (j + 0.5) * dt;
    const double f = model::drive_amplitude(params, profile, spin, t);
    if (f != last_f) {
      // H / hbar = omega a^dagger a + i f (a - a^dagger)
      step = linalg::expm(-kI * dt * (free_part + f * drive_part));
      last_f = f;
    }
    u = step * u;
  }
  return u;
}

ConvergenceReport stepped_convergence(const model::PhysicalParams& params,
                                      const model::DrivingProfile& profile, double tau, Spin spin,
                                      std::size_t d, std::size_t trusted,
                                      const std::vector<int>& steps) {
  const FockOperator closed = build_evolution_closed(params, profile, tau, spin, d);
  const std::size_t block =
      resolve_trusted(d, trusted, larger_displacement(model::coefficients(params, profile, tau)));
  if (block == 0) throw TruncationError("no trusted levels at this cutoff", 0);
  ConvergenceReport out;
  for (int s : steps) {
    const FockOperator stepped = build_evolution_stepped(params, profile, tau, spin, d, s);
    out.steps.push_back(s);
    out.errors.push_back(linalg::max_abs_leading(stepped - closed, block));
  }
  if (out.errors.size() >= 2) {
    const auto k = out.errors.size() - 1;
    out.order = std::log(out.errors[k - 1] / out.errors[k]) /
                std::log(static_cast<double>(out.steps[k]) / out.steps[k - 1]);
  }
  return out;
}

double default_omega_step(const model::PhysicalParams& p) {
  const double inertia = p.mass * p.ring_radius * p.ring_radius + p.hbar / p.trap_frequency;
  return 1e-4 * std::max(1.0, std::abs(p.rotation_rate)) * p.hbar / inertia;
}

FockOperator generator_numeric(const model::PhysicalParams& params,
                               const model::DrivingProfile& profile, double tau, Spin spin,
                               std::size_t d, double omega_step, std::size_t trusted,
                               double hermiticity_tol) {
  const double h = omega_step > 0.0 ? omega_step : default_omega_step(params);
  const FockOperator u0 = build_evolution_closed(params, profile, tau, spin, d);
  const FockOperator coarse = central_generator(params, profile, tau, spin, d, h, u0);
  const FockOperator fine = central_generator(params, profile, tau, spin, d, 0.5 * h, u0);
  FockOperator g = (4.0 * fine - coarse) / 3.0;

  const std::size_t block =
      resolve_trusted(d, trusted, model::coefficients(params, profile, tau).eta(spin));
  const double asym = linalg::max_abs_leading(g - g.adjoint(), block);
  const double scale = std::max(1.0, linalg::max_abs_leading(g, block));
  if (asym > hermiticity_tol * scale)
    throw NumericalError("numeric generator not Hermitian on the trusted block (" +
                         format_double(asym) + "); reduce the step or raise the truncation");
  return g;
}

FockOperator generator_analytic(const model::DerivedConstants& k, const model::CoefficientSet& c,
                                double trap_frequency, Spin spin, std::size_t d) {
  const CMatrix a = linalg::annihilation(d);
  const auto n = static_cast<Eigen::Index>(d);
  const double shift = c.c0 / trap_frequency + k.t_s * c.c2 * sign_of(spin);
  return k.t_c * (c.c1 * a.adjoint() + std::conj(c.c1) * a) + shift * CMatrix::Identity(n, n);
}

CMatrix site_operator(const FockOperator& up_block, const FockOperator& down_block) {
  const Eigen::Index d = up_block.rows();
  CMatrix out = CMatrix::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d) = up_block;
  out.bottomRightCorner(d, d) = down_block;
  return out;
}

CMatrix site_spin_z(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return site_operator(CMatrix::Identity(n, n), -CMatrix::Identity(n, n));
}

CMatrix site_quadrature(Complex c1, std::size_t d) {
  const CMatrix a = linalg::annihilation(d);
  const CMatrix x = c1 * a.adjoint() + std::conj(c1) * a;
  return site_operator(x, x);
}

// ---------------------------------------------------------------------------

std::size_t checked_dimension(int sites, std::size_t d, std::size_t guard) {
  if (sites < 1) throw InvalidArgument("site count must be >= 1");
  double dim = 1.0;
  for (int k = 0; k < sites; ++k) dim *= 2.0 * static_cast<double>(d);
  if (dim > static_cast<double>(guard))
    throw SizeGuardError("Hilbert space (2*" + std::to_string(d) + ")^" + std::to_string(sites) +
                         " exceeds the size guard " + std::to_string(guard));
  return static_cast<std::size_t>(dim);
}

MultiSiteState::MultiSiteState(CVector amplitudes, int sites, std::size_t d,
                               std::size_t size_guard)
    : amplitudes_(std::move(amplitudes)), sites_(sites), d_(d) {
  const auto dim = checked_dimension(sites, d, size_guard);
  if (static_cast<std::size_t>(amplitudes_.size()) != dim)
    throw InvalidArgument("amplitude vector has the wrong dimension");
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > 1e-10)
    throw InvalidArgument("multi-site state not normalized");
}

MultiSiteState MultiSiteState::from(const states::GhzProductState& state, std::size_t d,
                                    std::size_t size_guard) {
  const int n = state.n_particles();
  checked_dimension(n, d, size_guard);
  if (d < state.truncation())
    throw TruncationError("oracle truncation below the state's own cutoff", state.truncation());
  const auto nd = static_cast<Eigen::Index>(d);

  CVector up = CVector::Zero(2 * nd);
  CVector down = CVector::Zero(2 * nd);
  up.head(nd) = state.up().padded(d);
  down.tail(nd) = state.down().padded(d);

  CVector up_all = up;
  CVector down_all = down;
  for (int k = 1; k < n; ++k) {
    up_all = linalg::kron(up_all, up);
    down_all = linalg::kron(down_all, down);
  }
  CVector psi = std::sqrt(state.weight(Spin::up)) * up_all +
                std::sqrt(state.weight(Spin::down)) * down_all;
  return MultiSiteState(std::move(psi), n, d, size_guard);
}

CVector MultiSiteState::apply_site(const CMatrix& op, int site, const CVector& v) const {
  if (site < 0 || site >= sites_) throw InvalidArgument("site index out of range");
  const Eigen::Index dim = site_dimension();
  Eigen::Index left = 1, right = 1;
  for (int k = 0; k < site; ++k) left *= dim;
  for (int k = site + 1; k < sites_; ++k) right *= dim;

  CVector out(v.size());
  for (Eigen::Index l = 0; l < left; ++l) {
    const Eigen::Index offset = l * dim * right;
    Eigen::Map<const RowMajor> in(v.data() + offset, dim, right);
    Eigen::Map<RowMajor> res(out.data() + offset, dim, right);
    res.noalias() = op * in;
  }
  return out;
}

CVector MultiSiteState::apply_sum(const CMatrix& op) const {
  CVector out = CVector::Zero(amplitudes_.size());
  for (int k = 0; k < sites_; ++k) out += apply_site(op, k);
  return out;
}

CVector MultiSiteState::apply_each(const CMatrix& op) const {
  CVector out = amplitudes_;
  for (int k = 0; k < sites_; ++k) out = apply_site(op, k, out);
  return out;
}

double MultiSiteState::expectation(const CMatrix& op, int site) const {
  return amplitudes_.dot(apply_site(op, site)).real();
}

// ---------------------------------------------------------------------------

std::size_t oracle_truncation(const states::GhzProductState& state,
                              const model::CoefficientSet& coeffs) {
  const int top = static_cast<int>(std::max(state.up().support(1e-20), state.down().support(1e-20)));
  const double reach = std::max(std::abs(coeffs.eta_up), std::abs(coeffs.eta_down));
  // Levels reached by D(eta)|top>, plus headroom for the truncation artefacts.
  std::size_t d = states::auto_truncation(Complex{reach, 0.0}, top, kOracleLeakage);
  d += kDefaultHeadroom;
  return std::max(d, state.truncation());
}

double qfi_variance_numeric(const states::GhzProductState& state,
                            const model::PhysicalParams& params,
                            const model::DrivingProfile& profile, double tau,
                            const OracleOptions& options) {
  const std::size_t d = pick_truncation(state, params, profile, tau, options);
  const auto psi = MultiSiteState::from(state, d, options.size_guard);
  const auto n = static_cast<Eigen::Index>(d);

  FockOperator g_up = generator_numeric(params, profile, tau, Spin::up, d, options.omega_step);
  FockOperator g_down = generator_numeric(params, profile, tau, Spin::down, d, options.omega_step);
  if (options.generator_shift != 0.0) {
    g_up += options.generator_shift * CMatrix::Identity(n, n);
    g_down += options.generator_shift * CMatrix::Identity(n, n);
  }
  const CVector h_psi = psi.apply_sum(site_operator(g_up, g_down));
  const double mean = psi.amplitudes().dot(h_psi).real();
  return 4.0 * (h_psi - mean * psi.amplitudes()).squaredNorm();
}

namespace {

double fidelity_at(const MultiSiteState& psi0, const CVector& reference,
                   const model::PhysicalParams& params, const model::DrivingProfile& profile,
                   double tau, std::size_t d, double delta) {
  CVector moved = psi0.apply_each(site_evolution(shifted(params, delta), profile, tau, d));
  moved.normalize();
  const Complex overlap = reference.dot(moved);
  const double mag = std::abs(overlap);
  if (mag == 0.0) throw NumericalError("states at Omega and Omega + delta are orthogonal");
  // 1 - |z| = |phase * ref - moved|^2 / 2, free of cancellation.
  const double one_minus = 0.5 * ((overlap / mag) * reference - moved).squaredNorm();
  return 8.0 * one_minus / (delta * delta);
}

}  // namespace

double fidelity_estimate(const states::GhzProductState& state, const model::PhysicalParams& params,
                         const model::DrivingProfile& profile, double tau, double delta,
                         const OracleOptions& options) {
  const std::size_t d = pick_truncation(state, params, profile, tau, options);
  const auto psi0 = MultiSiteState::from(state, d, options.size_guard);
  CVector reference = psi0.apply_each(site_evolution(params, profile, tau, d));
  reference.normalize();
  return fidelity_at(psi0, reference, params, profile, tau, d, delta);
}

double qfi_fidelity_numeric(const states::GhzProductState& state,
                            const model::PhysicalParams& params,
                            const model::DrivingProfile& profile, double tau,
                            const OracleOptions& options) {
  const std::size_t d = pick_truncation(state, params, profile, tau, options);
  const double delta = options.fidelity_step > 0.0
                           ? options.fidelity_step
                           : 10.0 * (options.omega_step > 0.0 ? options.omega_step
                                                              : default_omega_step(params));
  const auto psi0 = MultiSiteState::from(state, d, options.size_guard);
  CVector reference = psi0.apply_each(site_evolution(params, profile, tau, d));
  reference.normalize();

  const double coarse = fidelity_at(psi0, reference, params, profile, tau, d, delta);
  const double fine = fidelity_at(psi0, reference, params, profile, tau, d, 0.5 * delta);
  const double scale = std::max(std::abs(coarse), std::abs(fine));
  if (scale > 1e-300 && std::abs(coarse - fine) > 0.1 * scale)
    throw NumericalError("overlap decay is not quadratic in delta (" + format_double(coarse) +
                         " vs " + format_double(fine) + "); reduce the fidelity step");
  return (4.0 * fine - coarse) / 3.0;
}

CovarianceReduction covariance_reduction_check(const MultiSiteState& state, const CMatrix& a,
                                               const CMatrix& b, double tol) {
  const CVector& psi = state.amplitudes();
  const int n = state.sites();

  const CVector sum_a = state.apply_sum(a);
  const CVector sum_b = state.apply_sum(b);
  const double mean_a = psi.dot(sum_a).real();
  const double mean_b = psi.dot(sum_b).real();

  CovarianceReduction out;
  out.full = sum_a.dot(sum_b).real() - mean_a * mean_b;

  const CVector a1 = state.apply_site(a, 0);
  const CVector b1 = state.apply_site(b, 0);
  const double cov11 = a1.dot(b1).real() - psi.dot(a1).real() * psi.dot(b1).real();
  double cov12 = 0.0;
  if (n >= 2) {
    const CVector b2 = state.apply_site(b, 1);
    cov12 = a1.dot(b2).real() - psi.dot(a1).real() * psi.dot(b2).real();
  }
  const double big_n = n;
  out.reduced = big_n * cov11 + (big_n * big_n - big_n) * cov12;
  out.error = std::abs(out.full - out.reduced);
  out.holds = out.error <= tol * std::max(1.0, std::abs(out.full));
  return out;
}

}  // namespace sagnac::oracle
