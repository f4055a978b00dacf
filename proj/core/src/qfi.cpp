#include "sagnac/qfi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sagnac/errors.hpp"
#include "sagnac/format.hpp"

namespace sagnac::qfi {

using std::numbers::pi;

GeneratorSpec make_generator(const model::PhysicalParams& params,
                             const model::DerivedConstants& constants,
                             const model::CoefficientSet& coeffs, int n_particles) {
  if (n_particles < 1) throw InvalidArgument("particle number must be >= 1");
  GeneratorSpec g;
  g.t_c = constants.t_c;
  g.t_s = constants.t_s;
  g.c0 = coeffs.c0;
  g.c1 = coeffs.c1;
  g.c2 = coeffs.c2;
  g.trap_frequency = params.trap_frequency;
  g.n_particles = n_particles;
  return g;
}

double QfiBreakdown::radius_polynomial() const noexcept {
  const double r2 = reduced_radius * reduced_radius;
  return r2 * (lambda1 + reduced_radius * (lambda2 + reduced_radius * lambda3));
}

QfiBreakdown qfi_general(const states::CorrelationSet& c, const GeneratorSpec& g,
                         const model::DerivedConstants& constants) {
  if (g.n_particles < 1) throw InvalidArgument("particle number must be >= 1");
  const double n = g.n_particles;
  const double tc = g.t_c, ts2 = g.t_s * g.c2;

  QfiBreakdown out;
  out.beta = tc * tc * c.var_x1 + ts2 * ts2 * c.var_sz1 + 2.0 * tc * ts2 * c.cov_x1_sz1;
  out.gamma = tc * tc * c.cov_x1_x2 + ts2 * ts2 * c.cov_sz1_sz2 + 2.0 * tc * ts2 * c.cov_x1_sz2;
  out.qfi = 4.0 * ((out.beta - out.gamma) * n + out.gamma * n * n);

  const double scale =
      4.0 * n * (std::abs(out.beta) + n * std::abs(out.gamma)) + 1.0;
  if (out.qfi < -1e-12 * scale)
    throw ConsistencyError("negative QFI " + format_double(out.qfi) +
                           ": correlation set is not realizable by any state");

  // With T_C = sqrt(2) R / omega and T_S = 2 pi R^2 / omega, so that each
  // lambda is R-independent.
  const double w2 = g.trap_frequency * g.trap_frequency;
  out.reduced_radius = constants.reduced_radius;
  out.lambda1 = 8.0 / w2 * n * (c.var_x1 + (n - 1.0) * c.cov_x1_x2);
  out.lambda2 = 16.0 * std::sqrt(2.0) * pi / w2 * g.c2 * n *
                (c.cov_x1_sz1 + (n - 1.0) * c.cov_x1_sz2);
  out.lambda3 = 16.0 * pi * pi / w2 * g.c2 * g.c2 * n *
                (c.var_sz1 + (n - 1.0) * c.cov_sz1_sz2);

  out.heisenberg_fraction = out.qfi != 0.0 ? 4.0 * out.gamma * n * n / out.qfi : 0.0;
  return out;
}

double qfi_partial_closed(int n, int n_particles, const model::DerivedConstants& k,
                          const model::CoefficientSet& c) {
  const double big_n = n_particles;
  return 4.0 * (2.0 * n + 1.0) * big_n * k.t_c * k.t_c * std::norm(c.c1) +
         4.0 * big_n * big_n * k.t_s * k.t_s * c.c2 * c.c2;
}

double qfi_global_closed(Complex alpha, int n_particles, const model::DerivedConstants& k,
                         const model::CoefficientSet& c) {
  const double big_n = n_particles;
  const double bracket = 2.0 * k.t_c * model::re_c1_alpha_conj(c.c1, alpha) + k.t_s * c.c2;
  return 4.0 * big_n * big_n * bracket * bracket +
         4.0 * big_n * k.t_c * k.t_c * std::norm(c.c1);
}

double qfi_product_closed(int n, int n_particles, const model::DerivedConstants& k,
                          const model::CoefficientSet& c) {
  return 4.0 * (2.0 * n + 1.0) * n_particles * k.t_c * k.t_c * std::norm(c.c1);
}

double qfi_closed(const states::StateFamily& family, int n_particles,
                  const model::DerivedConstants& k, const model::CoefficientSet& c) {
  if (const auto* p = std::get_if<states::PartialDisplacedFock>(&family))
    return qfi_partial_closed(p->n, n_particles, k, c);
  if (const auto* g = std::get_if<states::GlobalCoherent>(&family))
    return qfi_global_closed(g->alpha, n_particles, k, c);
  return qfi_product_closed(std::get<states::ProductDisplacedFock>(family).n, n_particles, k, c);
}

QfiDifference qfi_difference(Complex alpha, int n_particles, const model::DerivedConstants& k,
                             const model::CoefficientSet& c) {
  const double big_n = n_particles;
  const double x = k.t_c * model::re_c1_alpha_conj(c.c1, alpha);
  QfiDifference d;
  d.value = 16.0 * big_n * big_n * (x + k.t_s * c.c2) * x;
  if (k.t_c == 0.0) {
    d.advantage = Advantage::evaluated;
  } else {
    const double re = model::re_c1_alpha_conj(c.c1, alpha);
    const bool in_regime = re >= 0.0 || re <= -k.t_s * c.c2 / k.t_c;
    d.advantage = in_regime ? Advantage::guaranteed : Advantage::loses;
  }
  return d;
}

double qfi_commensurate(int n_particles, const model::PhysicalParams& p) {
  p.validate();
  const double big_n = n_particles;
  const double r2 = p.ring_radius * p.ring_radius;
  return 4.0 * big_n * big_n * p.mass * p.mass * pi * pi * r2 * r2 / (p.hbar * p.hbar);
}

double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

bool displacement_invariance_check(int n, Complex alpha, int n_particles,
                                   const model::DerivedConstants& constants,
                                   const model::CoefficientSet& coeffs, const GeneratorSpec& gen,
                                   double rel_tol) {
  // The closed form has no alpha dependence, so it is the reference for both states.
  const double closed = qfi_partial_closed(n, n_particles, constants, coeffs);
  GeneratorSpec g = gen;
  g.n_particles = n_particles;
  const auto shifted = states::make_partially_entangled(alpha, n);
  const auto origin = states::make_partially_entangled(Complex{}, n);
  const double generic_shifted =
      qfi_general(states::correlations_generic(shifted, g.c1), g, constants).qfi;
  const double generic_origin =
      qfi_general(states::correlations_generic(origin, g.c1), g, constants).qfi;
  return relative_difference(generic_shifted, closed) <= rel_tol &&
         relative_difference(generic_origin, closed) <= rel_tol;
}

}  // namespace sagnac::qfi
