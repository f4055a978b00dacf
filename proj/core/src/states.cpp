#include "sagnac/states.hpp"

#include <algorithm>
#include <cmath>

#include "sagnac/errors.hpp"
#include "sagnac/format.hpp"

namespace sagnac::states {
namespace {

// Associated Laguerre polynomial L_n^{(k)}(x) by the three-term recurrence in n.
double laguerre(int n, double k, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + k - x;
  for (int j = 1; j < n; ++j) {
    const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

// <m|D(alpha)|n>
Complex displacement_element(Complex alpha, int m, int n) {
  const double r = std::abs(alpha);
  if (r == 0.0) return m == n ? Complex{1.0, 0.0} : Complex{};
  const double x = r * r;
  const double theta = std::arg(alpha);
  const int lo = std::min(m, n);
  const int k = std::abs(m - n);
  const double log_mag = 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(std::max(m, n) + 1.0)) +
                         k * std::log(r) - 0.5 * x;
  const double value = std::exp(log_mag) * laguerre(lo, k, x);
  if (m >= n) return value * std::exp(kI * (k * theta));
  // (-alpha*)^k
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * value * std::exp(-kI * (k * theta));
}

std::size_t poisson_cutoff(double mean, double bound) {
  if (mean == 0.0) return 1;
  // Past the mode the tail from k is bounded by pmf(k) / (1 - mean / (k + 1)).
  double log_pmf = -mean;
  std::size_t k = 0;
  while (true) {
    const double ratio = mean / static_cast<double>(k + 1);
    if (ratio < 1.0 && std::exp(log_pmf) / (1.0 - ratio) < bound) return k;
    log_pmf += std::log(ratio);
    ++k;
  }
}

void require_nonnegative_level(int n) {
  if (n < 0) throw InvalidArgument("Fock level n must be >= 0");
}

}  // namespace

BranchState::BranchState(Spin spin, CVector amplitudes)
    : spin_(spin), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw InvalidArgument("branch state needs at least one level");
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-12)
    throw InvalidArgument("branch amplitudes not normalized (norm^2 = " + format_double(norm2) + ")");
}

CVector BranchState::padded(std::size_t d) const {
  const auto n = static_cast<Eigen::Index>(d);
  if (n <= amplitudes_.size()) return amplitudes_;
  CVector out = CVector::Zero(n);
  out.head(amplitudes_.size()) = amplitudes_;
  return out;
}

std::size_t BranchState::support(double threshold) const {
  for (Eigen::Index k = amplitudes_.size() - 1; k > 0; --k)
    if (std::norm(amplitudes_(k)) > threshold) return static_cast<std::size_t>(k);
  return 0;
}

GhzProductState::GhzProductState(BranchState up, BranchState down, int n_particles,
                                 double up_weight)
    : up_(std::move(up)), down_(std::move(down)), n_particles_(n_particles), up_weight_(up_weight) {
  if (up_.spin() != Spin::up || down_.spin() != Spin::down)
    throw InvalidArgument("branch spin labels must be (up, down)");
  if (n_particles_ < 1) throw InvalidArgument("particle number must be >= 1");
  if (!(up_weight_ >= 0.0 && up_weight_ <= 1.0))
    throw InvalidArgument("branch weight must lie in [0, 1]");
}

std::size_t GhzProductState::truncation() const noexcept {
  return std::max(up_.truncation(), down_.truncation());
}

GhzProductState GhzProductState::with_particles(int n) const {
  return GhzProductState(up_, down_, n, up_weight_);
}

// ---------------------------------------------------------------------------

CVector displaced_fock_amplitudes(Complex alpha, int n, std::size_t d) {
  require_nonnegative_level(n);
  CVector out(static_cast<Eigen::Index>(d));
  for (Eigen::Index m = 0; m < out.size(); ++m)
    out(m) = displacement_element(alpha, static_cast<int>(m), n);
  return out;
}

double displaced_fock_leakage(Complex alpha, int n, std::size_t d) {
  require_nonnegative_level(n);
  const double x = std::norm(alpha);
  const auto top = static_cast<int>(std::max<std::size_t>(d, static_cast<std::size_t>(n)) + 64 +
                                    static_cast<std::size_t>(std::ceil(4.0 * x)));
  double tail = 0.0;
  for (int m = static_cast<int>(d); m <= top; ++m) tail += std::norm(displacement_element(alpha, m, n));
  return tail;
}

std::size_t auto_truncation(Complex alpha, int n, double bound) {
  require_nonnegative_level(n);
  std::size_t d = poisson_cutoff(std::norm(alpha), bound) + static_cast<std::size_t>(n) + 10;
  while (displaced_fock_leakage(alpha, n, d) > bound) ++d;
  return d;
}

CVector displaced_fock_state(Complex alpha, int n, const Truncation& trunc) {
  std::size_t d = trunc.levels;
  if (d == 0) {
    d = auto_truncation(alpha, n, trunc.leakage_bound);
  } else {
    const double leak = displaced_fock_leakage(alpha, n, d);
    if (leak > trunc.leakage_bound) {
      const auto need = auto_truncation(alpha, n, trunc.leakage_bound);
      throw TruncationError("truncation " + std::to_string(d) + " leaks " + format_double(leak) +
                                " of D(alpha)|" + std::to_string(n) + ">; use at least " +
                                std::to_string(need) + " levels",
                            need);
    }
  }
  CVector amps = displaced_fock_amplitudes(alpha, n, d);
  amps.normalize();
  return amps;
}

GhzProductState make_partially_entangled(Complex alpha, int n, const Truncation& trunc,
                                         int n_particles) {
  CVector spatial = displaced_fock_state(alpha, n, trunc);
  return GhzProductState(BranchState(Spin::up, spatial), BranchState(Spin::down, spatial),
                         n_particles);
}

GhzProductState make_globally_entangled(Complex alpha, const Truncation& trunc, int n_particles) {
  Truncation t = trunc;
  // Both branches share a cutoff; |alpha| and |-alpha| leak identically.
  if (t.levels == 0) t.levels = auto_truncation(alpha, 0, trunc.leakage_bound);
  return GhzProductState(BranchState(Spin::up, displaced_fock_state(alpha, 0, t)),
                         BranchState(Spin::down, displaced_fock_state(-alpha, 0, t)),
                         n_particles);
}

GhzProductState make_product(Complex alpha, int n, const Truncation& trunc, int n_particles) {
  CVector spatial = displaced_fock_state(alpha, n, trunc);
  return GhzProductState(BranchState(Spin::up, spatial), BranchState(Spin::down, spatial),
                         n_particles, 1.0);
}

GhzProductState make_state(const StateFamily& family, const Truncation& trunc, int n_particles) {
  return std::visit(
      [&](const auto& f) -> GhzProductState {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, PartialDisplacedFock>)
          return make_partially_entangled(f.alpha, f.n, trunc, n_particles);
        else if constexpr (std::is_same_v<F, GlobalCoherent>)
          return make_globally_entangled(f.alpha, trunc, n_particles);
        else
          return make_product(f.alpha, f.n, trunc, n_particles);
      },
      family);
}

// ---------------------------------------------------------------------------

QuadratureMoments quadrature_moments(const CVector& psi, Complex c1) {
  const Eigen::Index d = psi.size();
  // X maps level d-1 to level d, so work one level up to stay exact.
  CVector padded = CVector::Zero(d + 1);
  padded.head(d) = psi;
  CVector x_psi = CVector::Zero(d + 1);
  for (Eigen::Index m = 0; m <= d; ++m) {
    if (m >= 1) x_psi(m) += c1 * std::sqrt(static_cast<double>(m)) * padded(m - 1);
    if (m + 1 <= d) x_psi(m) += std::conj(c1) * std::sqrt(static_cast<double>(m + 1)) * padded(m + 1);
  }
  QuadratureMoments out;
  out.mean = padded.dot(x_psi).real();
  out.variance = (x_psi - out.mean * padded).squaredNorm();
  return out;
}

CorrelationSet correlations_generic(const GhzProductState& state, Complex c1) {
  const double p[2] = {state.weight(Spin::up), state.weight(Spin::down)};
  const double s[2] = {1.0, -1.0};
  const QuadratureMoments q[2] = {quadrature_moments(state.up().amplitudes(), c1),
                                  quadrature_moments(state.down().amplitudes(), c1)};

  const double mean_x = p[0] * q[0].mean + p[1] * q[1].mean;
  const double mean_s = p[0] - p[1];

  CorrelationSet c;
  for (int b = 0; b < 2; ++b) {
    const double dx = q[b].mean - mean_x;
    const double ds = s[b] - mean_s;
    c.var_x1 += p[b] * (q[b].variance + dx * dx);
    c.cov_x1_x2 += p[b] * dx * dx;
    c.cov_x1_sz1 += p[b] * dx * ds;
    c.cov_sz1_sz2 += p[b] * ds * ds;
  }
  c.var_sz1 = c.cov_sz1_sz2;  // sigma_z^2 = 1 on every site
  c.cov_x1_sz2 = c.cov_x1_sz1;
  return c;
}

CorrelationSet correlations_closed_form(const StateFamily& family, Complex c1) {
  const double c1_sq = std::norm(c1);
  CorrelationSet c;
  if (const auto* p = std::get_if<PartialDisplacedFock>(&family)) {
    c.var_x1 = (2.0 * p->n + 1.0) * c1_sq;
    c.var_sz1 = 1.0;
    c.cov_sz1_sz2 = 1.0;
  } else if (const auto* g = std::get_if<GlobalCoherent>(&family)) {
    const double re = model::re_c1_alpha_conj(c1, g->alpha);
    c.var_x1 = 4.0 * re * re + c1_sq;
    c.var_sz1 = 1.0;
    c.cov_x1_sz1 = 2.0 * re;
    c.cov_x1_x2 = 4.0 * re * re;
    c.cov_sz1_sz2 = 1.0;
    c.cov_x1_sz2 = 2.0 * re;
  } else {
    const auto& q = std::get<ProductDisplacedFock>(family);
    c.var_x1 = (2.0 * q.n + 1.0) * c1_sq;
  }
  return c;
}

}  // namespace sagnac::states
