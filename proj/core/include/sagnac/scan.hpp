#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sagnac/config.hpp"
#include "sagnac/qfi.hpp"
#include "sagnac/report.hpp"

namespace sagnac::scan {

struct ScanRow {
  double x = 0.0;  ///< swept value in the sweep's units
  double omega_p = 0.0;  ///< pi / tau, the mean drive rate
  double tau = 0.0;
  double f_partial = 0.0;
  double f_global = 0.0;
  double f_general = 0.0;  ///< configured state, from its correlations
  qfi::QfiBreakdown breakdown;
  model::CoefficientSet coeffs;
  model::DerivedConstants constants;
  double check = 0.0;  ///< relative gap between f_general and the matching closed form
};

struct ScanOutput {
  std::vector<ScanRow> rows;
  report::Table table;
  bool passed = true;
};

/// Rows agree with the closed form to this relative tolerance or the run fails.
inline constexpr double kRowTolerance = 1e-10;

/// Evaluates one row. Throws VerificationError when f_general strays from the closed form.
ScanRow evaluate(const config::ScanConfig& cfg, const model::PhysicalParams& params,
                 const config::ResolvedDrive& drive, Complex alpha, int n_particles, double x);

ScanOutput run_coeffs(const config::ScanConfig& cfg);
ScanOutput run_qfi(const config::ScanConfig& cfg);
/// Sweeps N (or the ring radius) per drive series and fits log10 F against log10 x.
ScanOutput run_scan_n(const config::ScanConfig& cfg);
/// Sweeps theta_alpha (units of pi) at fixed |alpha|, or |alpha| at fixed phase.
ScanOutput run_scan_alpha(const config::ScanConfig& cfg);
/// Sweeps tau (units of T0) with omega_p = pi / tau per row.
ScanOutput run_scan_tau(const config::ScanConfig& cfg);
/// Dual-oracle suite; `passed` is false when any identity fails.
ScanOutput run_oracle_check(const config::ScanConfig& cfg, std::uint64_t seed);

inline constexpr double kOracleTolerance = 1e-5;
inline constexpr double kGeneratorTolerance = 1e-6;
inline constexpr int kOracleMaxParticles = 3;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< root-mean-square residual in log10 units
};

/// Ordinary least squares on (log10 x, log10 y).
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Interior indices with y[i-1] < y[i] >= y[i+1].
std::vector<std::size_t> local_maxima(const std::vector<double>& y);

/// First x_i such that every window [x_j, x_j + window] with j >= i (inside the
/// data) has (max - min) / max|y| below `rel`.
std::optional<double> steady_onset(const std::vector<double>& x, const std::vector<double>& y,
                                   double window, double rel = 0.01);

}  // namespace sagnac::scan
