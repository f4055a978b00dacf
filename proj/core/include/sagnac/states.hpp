#pragma once

#include <cstddef>
#include <variant>

#include "sagnac/linalg.hpp"
#include "sagnac/model.hpp"

namespace sagnac::states {

inline constexpr double kDefaultLeakageBound = 1e-10;

/// How to choose the Fock cutoff of a branch state.
struct Truncation {
  std::size_t levels = 0;  ///< 0 selects the cutoff automatically
  double leakage_bound = kDefaultLeakageBound;
};

/// One branch of a two-branch state: a spin label and a single-mode spatial state.
class BranchState {
 public:
  /// Throws InvalidArgument unless the amplitudes are normalized within 1e-12.
  BranchState(Spin spin, CVector amplitudes);

  Spin spin() const noexcept { return spin_; }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  std::size_t truncation() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }

  /// Same spatial state padded with zeros (or unchanged) to `d` levels.
  CVector padded(std::size_t d) const;

  /// Highest level carrying more than `threshold` probability.
  std::size_t support(double threshold = 1e-30) const;

 private:
  Spin spin_;
  CVector amplitudes_;
};

/// sqrt(w) (x)_k |up, psi_up>_k + sqrt(1 - w) (x)_k |down, psi_down>_k.
///
/// w = 1/2 gives the GHZ-type states; w = 1 is the unentangled product
/// (x)_k |up, psi_up>_k. The two branches are orthogonal at every site through
/// their spin factors, so the state is normalized whatever the spatial overlap.
class GhzProductState {
 public:
  GhzProductState(BranchState up, BranchState down, int n_particles, double up_weight = 0.5);

  const BranchState& up() const noexcept { return up_; }
  const BranchState& down() const noexcept { return down_; }
  const BranchState& branch(Spin s) const noexcept { return s == Spin::up ? up_ : down_; }
  int n_particles() const noexcept { return n_particles_; }
  double up_weight() const noexcept { return up_weight_; }
  double weight(Spin s) const noexcept { return s == Spin::up ? up_weight_ : 1.0 - up_weight_; }
  std::size_t truncation() const noexcept;

  GhzProductState with_particles(int n) const;

 private:
  BranchState up_;
  BranchState down_;
  int n_particles_;
  double up_weight_;
};

/// Single-site and two-site correlations entering the general QFI.
/// X is the quadrature C1 a^dagger + C1* a.
struct CorrelationSet {
  double var_x1 = 0.0;
  double var_sz1 = 0.0;
  double cov_x1_sz1 = 0.0;
  double cov_x1_x2 = 0.0;
  double cov_sz1_sz2 = 0.0;
  double cov_x1_sz2 = 0.0;
};

struct PartialDisplacedFock {
  Complex alpha;
  int n = 0;
};

struct GlobalCoherent {
  Complex alpha;
};

/// Spin-up product with D(alpha)|n> on every site (no spin entanglement).
struct ProductDisplacedFock {
  Complex alpha;
  int n = 0;
};

using StateFamily = std::variant<PartialDisplacedFock, GlobalCoherent, ProductDisplacedFock>;

/// Column n of the displacement operator, <m|D(alpha)|n> for m < d, from the
/// associated-Laguerre closed form.
CVector displaced_fock_amplitudes(Complex alpha, int n, std::size_t d);

/// Probability carried by D(alpha)|n> on levels >= d.
double displaced_fock_leakage(Complex alpha, int n, std::size_t d);

/// Smallest cutoff whose leakage for D(alpha)|n> is below `bound`, including
/// n + 10 headroom levels above the Poisson cutoff of |alpha|^2.
std::size_t auto_truncation(Complex alpha, int n, double bound = kDefaultLeakageBound);

/// Normalized D(alpha)|n> on a cutoff picked or checked by `trunc`.
/// Throws TruncationError (with the required cutoff) if an explicit cutoff leaks too much.
CVector displaced_fock_state(Complex alpha, int n, const Truncation& trunc);

/// (D(alpha)|up,n>)^N + (D(alpha)|down,n>)^N, normalized.
GhzProductState make_partially_entangled(Complex alpha, int n, const Truncation& trunc = {},
                                         int n_particles = 1);

/// (x)|up, alpha> + (x)|down, -alpha>, normalized.
GhzProductState make_globally_entangled(Complex alpha, const Truncation& trunc = {},
                                        int n_particles = 1);

/// (x)|up> D(alpha)|n>, a state with no two-site correlations.
GhzProductState make_product(Complex alpha, int n, const Truncation& trunc = {},
                             int n_particles = 1);

/// Builds whichever family is named.
GhzProductState make_state(const StateFamily& family, const Truncation& trunc = {},
                           int n_particles = 1);

/// Correlations computed from the branch amplitudes by branch averaging.
///
/// Operators diagonal in the spin label never connect the two branches, which
/// differ in every spin factor, so every one- and two-site moment is the
/// weighted average of the branch moments. This also holds at N = 1.
CorrelationSet correlations_generic(const GhzProductState& state, Complex c1);

/// Closed-form correlations for the named families.
CorrelationSet correlations_closed_form(const StateFamily& family, Complex c1);

/// Mean and variance of X = c1 a^dagger + c1* a in a single-mode state.
struct QuadratureMoments {
  double mean = 0.0;
  double variance = 0.0;
};
QuadratureMoments quadrature_moments(const CVector& amplitudes, Complex c1);

}  // namespace sagnac::states
