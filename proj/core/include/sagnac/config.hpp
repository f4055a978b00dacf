#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sagnac/model.hpp"
#include "sagnac/states.hpp"

namespace sagnac::config {

enum class StateKind { partial, global, product };
enum class SweepVariable { n_particles, theta_alpha, abs_alpha, tau, radius };
enum class SweepScale { linear, log };

struct Sweep {
  SweepVariable variable = SweepVariable::n_particles;
  double min = 100.0;
  double max = 1000.0;
  int points = 20;
  SweepScale scale = SweepScale::log;

  /// Grid values in sweep order. N sweeps are rounded to integers.
  std::vector<double> values() const;
};

struct OracleSection {
  int max_particles = 2;
  std::vector<double> tau_periods{0.25, 0.5, 1.0};
  std::size_t truncation = 0;
  int steps = 10000;
  int draws = 0;  ///< extra random (alpha, n) cases drawn from the seed
};

/// One profile/tau pair fully resolved for evaluation.
struct ResolvedDrive {
  model::DrivingProfile profile;
  double tau;
  double mean_rate;  ///< pi / tau
};

struct ScanConfig {
  model::PhysicalParams params;

  std::string profile_kind = "constant";  ///< constant | piecewise | sampled
  std::vector<double> profile_values;      ///< constant: one value per series
  std::vector<model::Segment> segments;
  std::vector<double> samples;  ///< sampled: values on a uniform grid over [0, tau]
  model::Normalization normalization = model::Normalization::strict;

  std::optional<double> tau;
  std::optional<double> tau_periods;

  StateKind state_kind = StateKind::global;
  Complex alpha{-1.0, 0.0};
  int fock_level = 0;
  std::size_t truncation = 0;
  int n_particles = 100;

  Sweep sweep;
  OracleSection oracle;
  bool corrupt_c2_sign = false;

  /// Drive for series `k` (only constant profiles have more than one).
  ResolvedDrive drive(std::size_t series = 0) const;
  std::size_t series_count() const;

  /// Drive for a tau sweep: constant omega_p = pi / tau.
  ResolvedDrive drive_for_tau(double tau) const;

  states::StateFamily family(Complex alpha) const;
  states::StateFamily family() const { return family(alpha); }
};

/// Parses flat `key = value` text. `#` starts a comment. Unknown keys and
/// malformed values raise ConfigError naming `source:line`.
ScanConfig parse(std::string_view text, std::string_view source = "<config>");

/// Reads `path` (if non-empty) then applies each `key=value` override in order.
ScanConfig load(const std::filesystem::path& path, const std::vector<std::string>& overrides);

/// Applies text and overrides on top of the defaults; used by both entry points.
ScanConfig build(std::string_view text, std::string_view source,
                 const std::vector<std::string>& overrides);

/// Every recognised key, sorted.
std::vector<std::string> known_keys();

std::string to_string(StateKind kind);
std::string to_string(SweepVariable variable);

/// Parameter and profile echo written at the top of every output file.
std::vector<std::string> header_lines(const ScanConfig& cfg);

}  // namespace sagnac::config
