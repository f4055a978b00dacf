#include "sagnac/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sagnac/errors.hpp"
#include "sagnac/format.hpp"

namespace sagnac::model {

using std::numbers::pi;

namespace {

constexpr double kStrictNormalization = 1e-8;
constexpr double kGridUniformity = 1e-9;

bool finite(double x) { return std::isfinite(x); }

void require_nonnegative(double v, const char* what) {
  if (!finite(v) || v < 0.0)
    throw InvalidProfile(std::string(what) + ": driving speed must be finite and >= 0");
}

struct Interval {
  double begin;
  double end;
  double value;
};

// Constant and piecewise profiles as a list of intervals clipped to [0, tau].
std::vector<Interval> intervals(const DrivingProfile& profile, double tau) {
  std::vector<Interval> out;
  if (const auto* c = std::get_if<ConstantDrive>(&profile.data())) {
    out.push_back({0.0, tau, c->value});
    return out;
  }
  const auto& segs = std::get<PiecewiseDrive>(profile.data()).segments;
  double t = 0.0;
  for (const auto& s : segs) {
    if (t >= tau) break;
    const double end = std::min(t + s.duration, tau);
    out.push_back({t, end, s.value});
    t += s.duration;
  }
  if (t < tau * (1.0 - 1e-12))
    throw InvalidArgument("piecewise profile covers only " + format_double(t) +
                          " of the evolution time " + format_double(tau));
  return out;
}

double grid_step(const SampledDrive& s) {
  return (s.times.back() - s.times.front()) / static_cast<double>(s.times.size() - 1);
}

void require_grid_end(const SampledDrive& s, double tau) {
  if (std::abs(s.times.back() - tau) > kGridUniformity * std::max(1.0, tau))
    throw InvalidArgument("sampled profile ends at " + format_double(s.times.back()) +
                          " but tau = " + format_double(tau));
}

}  // namespace

// ---------------------------------------------------------------------------

void PhysicalParams::validate() const {
  if (!finite(mass) || mass <= 0.0) throw InvalidArgument("mass must be > 0");
  if (!finite(hbar) || hbar <= 0.0) throw InvalidArgument("hbar must be > 0");
  if (!finite(trap_frequency) || trap_frequency <= 0.0)
    throw InvalidArgument("trap frequency must be > 0");
  if (!finite(ring_radius) || ring_radius < 0.0)
    throw InvalidArgument("ring radius must be >= 0");
  if (!finite(rotation_rate)) throw InvalidArgument("rotation rate must be finite");
}

DerivedConstants derive_constants(const PhysicalParams& p) {
  p.validate();
  const double m = p.mass, hbar = p.hbar, w = p.trap_frequency, r = p.ring_radius;
  DerivedConstants c;
  c.t_c = r * std::sqrt(2.0 * m / (w * hbar));
  c.t_s = 2.0 * m * pi * r * r / hbar;
  c.sagnac_phase = c.t_s * p.rotation_rate;
  c.characteristic_momentum = std::sqrt(m * hbar * w / 2.0);
  c.oscillator_length = std::sqrt(hbar / (m * w));
  c.reduced_radius = r / c.oscillator_length;
  return c;
}

double coupling(const PhysicalParams& p) {
  return std::sqrt(p.mass * p.trap_frequency / (2.0 * p.hbar)) * p.ring_radius;
}

// ---------------------------------------------------------------------------

DrivingProfile DrivingProfile::constant(double value) {
  require_nonnegative(value, "constant profile");
  return DrivingProfile(ConstantDrive{value});
}

DrivingProfile DrivingProfile::half_turn(double tau) {
  if (!finite(tau) || tau <= 0.0) throw InvalidArgument("tau must be > 0");
  return constant(pi / tau);
}

DrivingProfile DrivingProfile::piecewise(std::vector<Segment> segments) {
  if (segments.empty()) throw InvalidProfile("piecewise profile needs at least one segment");
  for (const auto& s : segments) {
    if (!finite(s.duration) || s.duration <= 0.0)
      throw InvalidProfile("piecewise segment durations must be > 0");
    require_nonnegative(s.value, "piecewise profile");
  }
  return DrivingProfile(PiecewiseDrive{std::move(segments)});
}

DrivingProfile DrivingProfile::sampled(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size())
    throw InvalidProfile("sampled profile: times and values differ in length");
  if (times.size() < 2) throw InvalidProfile("sampled profile needs at least 2 samples");
  if (times.front() != 0.0) throw InvalidProfile("sampled profile must start at t = 0");
  const double h = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(h > 0.0)) throw InvalidProfile("sampled profile times must increase");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - static_cast<double>(i) * h) > kGridUniformity * times.back())
      throw InvalidProfile("sampled profile grid must be uniform");
  }
  for (double v : values) require_nonnegative(v, "sampled profile");
  return DrivingProfile(SampledDrive{std::move(times), std::move(values)});
}

ProfileKind DrivingProfile::kind() const noexcept {
  switch (data_.index()) {
    case 0: return ProfileKind::constant;
    case 1: return ProfileKind::piecewise;
    default: return ProfileKind::sampled;
  }
}

double DrivingProfile::value_at(double t) const {
  if (const auto* c = std::get_if<ConstantDrive>(&data_)) return c->value;
  if (const auto* pw = std::get_if<PiecewiseDrive>(&data_)) {
    double start = 0.0;
    for (const auto& s : pw->segments) {
      if (t < start + s.duration) return s.value;
      start += s.duration;
    }
    return pw->segments.back().value;
  }
  const auto& s = std::get<SampledDrive>(data_);
  const std::size_t n = s.times.size();
  const double h = grid_step(s);
  const double x = std::clamp(t / h, 0.0, static_cast<double>(n - 1));
  auto i = static_cast<std::size_t>(x);
  if (i >= n - 1) i = n - 2;
  if (n < 4) {
    const double w = x - static_cast<double>(i);
    return (1.0 - w) * s.values[i] + w * s.values[i + 1];
  }
  // Four-point Lagrange stencil, shifted inward at the ends.
  std::size_t j0 = i == 0 ? 0 : i - 1;
  if (j0 + 3 > n - 1) j0 = n - 4;
  double result = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    double w = 1.0;
    for (std::size_t b = 0; b < 4; ++b) {
      if (a == b) continue;
      w *= (x - static_cast<double>(j0 + b)) / (static_cast<double>(a) - static_cast<double>(b));
    }
    result += w * s.values[j0 + a];
  }
  return result;
}

DrivingProfile DrivingProfile::scaled(double factor) const {
  if (!finite(factor) || factor < 0.0) throw InvalidProfile("scale factor must be >= 0");
  if (const auto* c = std::get_if<ConstantDrive>(&data_)) return constant(c->value * factor);
  if (const auto* pw = std::get_if<PiecewiseDrive>(&data_)) {
    auto segs = pw->segments;
    for (auto& s : segs) s.value *= factor;
    return piecewise(std::move(segs));
  }
  auto s = std::get<SampledDrive>(data_);
  for (auto& v : s.values) v *= factor;
  return sampled(std::move(s.times), std::move(s.values));
}

DrivingProfile DrivingProfile::resampled(double tau, std::size_t samples) const {
  if (samples < 2) throw InvalidProfile("resampling needs at least 2 samples");
  std::vector<double> t(samples), v(samples);
  const double h = tau / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    t[i] = static_cast<double>(i) * h;
    v[i] = value_at(t[i]);
  }
  t.back() = tau;
  return sampled(std::move(t), std::move(v));
}

std::string DrivingProfile::describe() const {
  std::ostringstream os;
  if (const auto* c = std::get_if<ConstantDrive>(&data_)) {
    os << "constant(" << format_double(c->value) << ")";
  } else if (const auto* pw = std::get_if<PiecewiseDrive>(&data_)) {
    os << "piecewise(";
    for (std::size_t i = 0; i < pw->segments.size(); ++i) {
      if (i) os << ",";
      os << format_double(pw->segments[i].duration) << ":" << format_double(pw->segments[i].value);
    }
    os << ")";
  } else {
    const auto& s = std::get<SampledDrive>(data_);
    os << "sampled(n=" << s.times.size() << ",end=" << format_double(s.times.back()) << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace quad {

template <typename T>
T simpson(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return T{};
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  std::size_t intervals = n - 1;
  T tail{};
  if (intervals % 2 == 1) {
    // Simpson 3/8 on the last three intervals.
    const std::size_t k = n - 4;
    tail = 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
    intervals -= 3;
  }
  T sum{};
  if (intervals > 0) {
    sum = f[0] + f[intervals];
    for (std::size_t i = 1; i < intervals; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    sum *= h / 3.0;
  }
  return sum + tail;
}

template <typename T>
std::vector<T> cumulative(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  std::vector<T> out(n, T{});
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  if (n == 3) {
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
  } else {
    // Cubic through the first four samples, integrated over the first interval.
    out[1] = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
  }
  for (std::size_t i = 2; i < n; ++i)
    out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
  return out;
}

template double simpson<double>(std::span<const double>, double);
template Complex simpson<Complex>(std::span<const Complex>, double);
template std::vector<double> cumulative<double>(std::span<const double>, double);
template std::vector<Complex> cumulative<Complex>(std::span<const Complex>, double);

}  // namespace quad

// ---------------------------------------------------------------------------

double profile_integral(const DrivingProfile& profile, double tau) {
  if (!finite(tau) || tau <= 0.0) throw InvalidArgument("tau must be > 0");
  if (const auto* s = std::get_if<SampledDrive>(&profile.data())) {
    require_grid_end(*s, tau);
    return quad::simpson<double>(s->values, grid_step(*s));
  }
  double sum = 0.0;
  for (const auto& iv : intervals(profile, tau)) sum += iv.value * (iv.end - iv.begin);
  return sum;
}

DrivingProfile normalize(const DrivingProfile& profile, double tau, Normalization policy) {
  const double integral = profile_integral(profile, tau);
  if (policy == Normalization::strict) {
    if (std::abs(integral - pi) > kStrictNormalization * pi)
      throw InvalidProfile("driving profile integrates to " + format_double(integral) +
                           " over tau = " + format_double(tau) + ", expected pi");
    return profile;
  }
  if (!(integral > 0.0)) throw InvalidProfile("cannot rescale a profile with zero integral");
  return profile.scaled(pi / integral);
}

Complex c1_of(double omega, double tau) {
  const double half = 0.5 * omega * tau;
  return kI * std::sin(half) * std::exp(kI * half);
}

double drive_amplitude(const PhysicalParams& params, const DrivingProfile& profile, Spin s,
                       double t) {
  return coupling(params) * (params.rotation_rate + sign_of(s) * profile.value_at(t));
}

CoefficientSet coefficients(const PhysicalParams& params, const DrivingProfile& profile,
                            double tau) {
  params.validate();
  if (!finite(tau) || tau <= 0.0) throw InvalidArgument("tau must be > 0");
  const double integral = profile_integral(profile, tau);
  if (std::abs(integral - pi) > kStrictNormalization * pi)
    throw InvalidProfile("driving profile integrates to " + format_double(integral) +
                         ", expected pi over tau");

  const double w = params.trap_frequency;
  const double kappa = coupling(params);
  const double omega_rot = params.rotation_rate;
  const auto constants = derive_constants(params);

  CoefficientSet out;
  out.c0 = constants.sagnac_phase / (2.0 * pi) * (w * tau - std::sin(w * tau));
  out.c1 = c1_of(w, tau);

  double cos_integral = 0.0;
  Complex eta[2];
  double phi[2];
  const Spin spins[2] = {Spin::up, Spin::down};

  if (const auto* s = std::get_if<SampledDrive>(&profile.data())) {
    const double h = grid_step(*s);
    const std::size_t n = s->times.size();
    std::vector<double> cos_terms(n);
    for (std::size_t i = 0; i < n; ++i)
      cos_terms[i] = s->values[i] * std::cos(w * (s->times[i] - tau));
    cos_integral = quad::simpson<double>(cos_terms, h);

    std::vector<Complex> forward(n), backward(n);
    std::vector<double> inner(n);
    for (int b = 0; b < 2; ++b) {
      const double sigma = sign_of(spins[b]);
      for (std::size_t i = 0; i < n; ++i) {
        const double f = kappa * (omega_rot + sigma * s->values[i]);
        forward[i] = f * std::exp(kI * (w * s->times[i]));
        backward[i] = f * std::exp(-kI * (w * s->times[i]));
      }
      eta[b] = -quad::simpson<Complex>(forward, h);
      // phi = int_0^tau f(t1) Im[e^{i w t1} int_0^{t1} f(t2) e^{-i w t2} dt2] dt1
      const auto running = quad::cumulative<Complex>(backward, h);
      for (std::size_t i = 0; i < n; ++i) {
        const double f = kappa * (omega_rot + sigma * s->values[i]);
        inner[i] = f * (std::exp(kI * (w * s->times[i])) * running[i]).imag();
      }
      phi[b] = quad::simpson<double>(inner, h);
    }
  } else {
    const auto ivs = intervals(profile, tau);
    std::vector<Complex> phase_integral(ivs.size());
    for (std::size_t j = 0; j < ivs.size(); ++j) {
      const auto& iv = ivs[j];
      phase_integral[j] = (std::exp(kI * (w * iv.end)) - std::exp(kI * (w * iv.begin))) / (kI * w);
      cos_integral += iv.value * (std::sin(w * (iv.end - tau)) - std::sin(w * (iv.begin - tau))) / w;
    }
    for (int b = 0; b < 2; ++b) {
      const double sigma = sign_of(spins[b]);
      Complex e{};
      Complex earlier{};  // sum over previous intervals of f_k E_k
      double p = 0.0;
      for (std::size_t j = 0; j < ivs.size(); ++j) {
        const double f = kappa * (omega_rot + sigma * ivs[j].value);
        const double len = ivs[j].end - ivs[j].begin;
        e += f * phase_integral[j];
        p += f * f * (w * len - std::sin(w * len)) / (w * w);
        p += f * (phase_integral[j] * std::conj(earlier)).imag();
        earlier += f * phase_integral[j];
      }
      eta[b] = -e;
      phi[b] = p;
    }
  }

  out.c2 = 0.5 * (1.0 - cos_integral / pi);
  out.eta_up = eta[0];
  out.eta_down = eta[1];
  out.phi_up = phi[0];
  out.phi_down = phi[1];
  return out;
}

}  // namespace sagnac::model
