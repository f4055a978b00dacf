#include "sagnac/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sagnac/errors.hpp"
#include "sagnac/format.hpp"
#include "sagnac/oracle.hpp"

namespace sagnac::scan {
namespace {

using std::numbers::pi;
using config::SweepVariable;

const std::vector<std::string> kRowColumns = {
    "omega_p", "tau",     "F_partial", "F_global", "F_general", "beta",  "gamma",
    "lambda1", "lambda2", "lambda3",   "C1_re",    "C1_im",     "C2",    "T_C",
    "T_S",     "phi_s",   "check_rel"};

std::vector<double> row_values(const ScanRow& r) {
  const auto& b = r.breakdown;
  return {r.x,        r.omega_p,         r.tau,             r.f_partial,          r.f_global,
          r.f_general, b.beta,           b.gamma,           b.lambda1,            b.lambda2,
          b.lambda3,  r.coeffs.c1.real(), r.coeffs.c1.imag(), r.coeffs.c2,          r.constants.t_c,
          r.constants.t_s, r.constants.sagnac_phase, r.check};
}

report::Table make_table(const config::ScanConfig& cfg, const std::string& command,
                         const std::string& x_name) {
  report::Table t;
  t.command = command;
  t.header = config::header_lines(cfg);
  t.columns.push_back(x_name);
  t.columns.insert(t.columns.end(), kRowColumns.begin(), kRowColumns.end());
  return t;
}

void require_variable(const config::ScanConfig& cfg, std::initializer_list<SweepVariable> allowed,
                      const std::string& command) {
  for (auto v : allowed)
    if (cfg.sweep.variable == v) return;
  throw ConfigError("key 'sweep.variable': " + command + " does not sweep '" +
                    config::to_string(cfg.sweep.variable) + "'");
}

// Correlations depend only on the single-site branches, so one evaluation
// serves every N in a sweep.
struct SeriesCache {
  const config::ResolvedDrive* drive = nullptr;
  Complex alpha;
  states::CorrelationSet corr;
  bool valid = false;
};

ScanRow evaluate_cached(const config::ScanConfig& cfg, const model::PhysicalParams& params,
                        const config::ResolvedDrive& drive, Complex alpha, int n_particles,
                        double x, SeriesCache* cache) {
  ScanRow row;
  row.x = x;
  row.tau = drive.tau;
  row.omega_p = drive.mean_rate;
  row.constants = model::derive_constants(params);
  row.coeffs = model::coefficients(params, drive.profile, drive.tau);

  const auto family = cfg.family(alpha);
  row.f_partial = qfi::qfi_partial_closed(cfg.fock_level, n_particles, row.constants, row.coeffs);
  row.f_global = qfi::qfi_global_closed(alpha, n_particles, row.constants, row.coeffs);

  states::CorrelationSet corr;
  if (cache && cache->valid && cache->drive == &drive && cache->alpha == alpha) {
    corr = cache->corr;
  } else {
    const auto state = states::make_state(family, states::Truncation{cfg.truncation}, 1);
    corr = states::correlations_generic(state, row.coeffs.c1);
    if (cache) *cache = {&drive, alpha, corr, true};
  }
  const auto gen = qfi::make_generator(params, row.constants, row.coeffs, n_particles);
  row.breakdown = qfi::qfi_general(corr, gen, row.constants);
  row.f_general = row.breakdown.qfi;

  const double closed = qfi::qfi_closed(family, n_particles, row.constants, row.coeffs);
  row.check = qfi::relative_difference(row.f_general, closed);
  if (!(row.check <= kRowTolerance))
    throw VerificationError("row x=" + format_double(x) + ": general-form QFI " +
                            format_double(row.f_general) + " disagrees with the closed form " +
                            format_double(closed) + " (relative " + format_double(row.check) + ")");
  return row;
}

void append(ScanOutput& out, ScanRow row) {
  out.table.rows.push_back(row_values(row));
  out.rows.push_back(std::move(row));
}

std::vector<double> pick(const std::vector<double>& xs, const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  for (auto i : idx) out.push_back(xs[i]);
  return out;
}


}  // namespace

ScanRow evaluate(const config::ScanConfig& cfg, const model::PhysicalParams& params,
                 const config::ResolvedDrive& drive, Complex alpha, int n_particles, double x) {
  return evaluate_cached(cfg, params, drive, alpha, n_particles, x, nullptr);
}

ScanOutput run_coeffs(const config::ScanConfig& cfg) {
  ScanOutput out;
  auto& t = out.table;
  t.command = "coeffs";
  t.header = config::header_lines(cfg);
  t.columns = {"omega_p", "tau",  "C0",      "C1_re",  "C1_im",  "C2",          "eta_up_re",
               "eta_up_im", "eta_down_re", "eta_down_im", "phi_up", "phi_down", "T_C", "T_S",
               "phi_s",   "reduced_radius"};
  for (std::size_t s = 0; s < cfg.series_count(); ++s) {
    const auto drive = cfg.drive(s);
    const auto k = model::derive_constants(cfg.params);
    const auto c = model::coefficients(cfg.params, drive.profile, drive.tau);
    t.rows.push_back({drive.mean_rate, drive.tau, c.c0, c.c1.real(), c.c1.imag(), c.c2,
                      c.eta_up.real(), c.eta_up.imag(), c.eta_down.real(), c.eta_down.imag(),
                      c.phi_up, c.phi_down, k.t_c, k.t_s, k.sagnac_phase, k.reduced_radius});
  }
  return out;
}

ScanOutput run_qfi(const config::ScanConfig& cfg) {
  ScanOutput out;
  out.table = make_table(cfg, "qfi", "N");
  for (std::size_t s = 0; s < cfg.series_count(); ++s) {
    const auto drive = cfg.drive(s);
    append(out, evaluate(cfg, cfg.params, drive, cfg.alpha, cfg.n_particles, cfg.n_particles));
  }
  const auto& r = out.rows.front();
  out.table.summary.push_back({"heisenberg_fraction", r.breakdown.heisenberg_fraction});
  out.table.summary.push_back({"difference_global_minus_partial", r.f_global - r.f_partial});
  return out;
}

ScanOutput run_scan_n(const config::ScanConfig& cfg) {
  require_variable(cfg, {SweepVariable::n_particles, SweepVariable::radius}, "scan-n");
  const bool by_radius = cfg.sweep.variable == SweepVariable::radius;
  ScanOutput out;
  out.table = make_table(cfg, "scan-n", by_radius ? "radius" : "N");
  const auto xs = cfg.sweep.values();

  for (std::size_t s = 0; s < cfg.series_count(); ++s) {
    std::vector<double> f_global, f_general, f_partial;
    std::vector<double> x_used;
    // Neither r nor N enters the drive or the correlations.
    const auto drive = cfg.drive(s);
    SeriesCache cache;
    for (double x : xs) {
      auto params = cfg.params;
      int n = cfg.n_particles;
      if (by_radius)
        params.ring_radius = x;
      else
        n = static_cast<int>(x);
      auto row = evaluate_cached(cfg, params, drive, cfg.alpha, n, x, &cache);
      f_global.push_back(row.f_global);
      f_partial.push_back(row.f_partial);
      f_general.push_back(row.f_general);
      x_used.push_back(x);
      append(out, std::move(row));
    }
    const std::string tag = "[omega_p=" + format_double(drive.mean_rate) + "]";
    const auto g = fit_loglog(x_used, f_global);
    const auto p = fit_loglog(x_used, f_partial);
    const auto e = fit_loglog(x_used, f_general);
    out.table.summary.push_back({"slope_F_global" + tag, g.slope});
    out.table.summary.push_back({"residual_F_global" + tag, g.residual});
    out.table.summary.push_back({"slope_F_partial" + tag, p.slope});
    out.table.summary.push_back({"residual_F_partial" + tag, p.residual});
    out.table.summary.push_back({"slope_F_general" + tag, e.slope});
    out.table.summary.push_back({"residual_F_general" + tag, e.residual});
  }
  return out;
}

ScanOutput run_scan_alpha(const config::ScanConfig& cfg) {
  require_variable(cfg, {SweepVariable::theta_alpha, SweepVariable::abs_alpha}, "scan-alpha");
  const bool by_phase = cfg.sweep.variable == SweepVariable::theta_alpha;
  ScanOutput out;
  out.table = make_table(cfg, "scan-alpha", by_phase ? "theta_alpha" : "abs_alpha");
  const auto drive = cfg.drive(0);
  const double magnitude = std::abs(cfg.alpha);
  const double phase = magnitude == 0.0 ? 0.0 : std::arg(cfg.alpha);

  std::vector<double> xs, fs;
  for (double x : cfg.sweep.values()) {
    const Complex a = by_phase ? std::polar(magnitude, pi * x) : std::polar(x, phase);
    auto row = evaluate(cfg, cfg.params, drive, a, cfg.n_particles, x);
    xs.push_back(x);
    fs.push_back(row.f_global);
    append(out, std::move(row));
  }
  out.table.summary.push_back({"maxima_F_global", pick(xs, local_maxima(fs))});
  bool monotone = true;
  for (std::size_t i = 1; i < fs.size(); ++i) monotone = monotone && fs[i] >= fs[i - 1];
  out.table.summary.push_back({"nondecreasing_F_global", monotone});
  out.table.summary.push_back({"max_F_global", *std::max_element(fs.begin(), fs.end())});
  out.table.summary.push_back({"min_F_global", *std::min_element(fs.begin(), fs.end())});
  return out;
}

ScanOutput run_scan_tau(const config::ScanConfig& cfg) {
  require_variable(cfg, {SweepVariable::tau}, "scan-tau");
  ScanOutput out;
  out.table = make_table(cfg, "scan-tau", "tau_periods");
  for (const char* c : {"F_global_per_N2", "F_partial_per_N2", "difference_per_N2"})
    out.table.columns.push_back(c);

  const double period = 2.0 * pi / cfg.params.trap_frequency;
  const double n2 = static_cast<double>(cfg.n_particles) * cfg.n_particles;
  std::vector<double> xs, g, p, d;
  for (double x : cfg.sweep.values()) {
    if (!(x > 0.0)) throw ConfigError("key 'sweep.min': tau must be > 0");
    const auto drive = cfg.drive_for_tau(x * period);
    auto row = evaluate(cfg, cfg.params, drive, cfg.alpha, cfg.n_particles, x);
    xs.push_back(x);
    g.push_back(row.f_global / n2);
    p.push_back(row.f_partial / n2);
    d.push_back(g.back() - p.back());
    append(out, std::move(row));
    out.table.rows.back().insert(out.table.rows.back().end(), {g.back(), p.back(), d.back()});
  }

  const auto maxima = local_maxima(g);
  out.table.summary.push_back({"maxima_F_global_per_N2", pick(xs, maxima)});
  std::vector<double> ratios;
  for (auto i : maxima) ratios.push_back(p[i] > 0.0 ? g[i] / p[i] : std::nan(""));
  out.table.summary.push_back({"ratio_at_maxima", ratios});
  std::vector<double> equal;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(d[i]) <= 1e-9 * std::max(1.0, std::abs(g[i]))) equal.push_back(xs[i]);
  out.table.summary.push_back({"equality_tau_periods", equal});
  const auto onset = steady_onset(xs, p, 1.0);
  out.table.summary.push_back(
      {"steady_onset_F_partial_per_N2", onset ? *onset : std::numeric_limits<double>::quiet_NaN()});
  return out;
}

ScanOutput run_oracle_check(const config::ScanConfig& cfg, std::uint64_t seed) {
  const auto& o = cfg.oracle;
  if (o.max_particles > kOracleMaxParticles)
    throw SizeGuardError("oracle.N = " + std::to_string(o.max_particles) +
                         " exceeds the dense-simulation limit of " +
                         std::to_string(kOracleMaxParticles) + " sites");

  ScanOutput out;
  auto& t = out.table;
  t.command = "oracle-check";
  t.header = config::header_lines(cfg);
  t.header.push_back("seed=" + std::to_string(seed) +
                     " corrupt_c2_sign=" + (cfg.corrupt_c2_sign ? "true" : "false"));
  t.columns = {"N",           "state",          "n",           "alpha_re",     "alpha_im",
               "tau_periods", "truncation",     "F_closed",    "F_variance",   "F_fidelity",
               "rel_variance", "rel_fidelity",  "generator_error", "evolution_error", "pass"};

  struct Case {
    int n_particles;
    config::StateKind kind;
    Complex alpha;
    int level;
    double periods;
  };
  std::vector<Case> cases;
  for (int n = 1; n <= o.max_particles; ++n)
    for (auto kind : {config::StateKind::partial, config::StateKind::global})
      for (double periods : o.tau_periods)
        cases.push_back({n, kind, cfg.alpha, cfg.fock_level, periods});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.0, 1.5), angle(-pi, pi);
  std::uniform_int_distribution<int> level(0, 2), pick_kind(0, 1);
  std::uniform_int_distribution<std::size_t> pick_tau(0, o.tau_periods.size() - 1);
  for (int k = 0; k < o.draws; ++k) {
    const Complex a = std::polar(radius(rng), angle(rng));
    const int lvl = level(rng);
    const auto kind = pick_kind(rng) == 0 ? config::StateKind::partial : config::StateKind::global;
    cases.push_back({1, kind, a, lvl, o.tau_periods[pick_tau(rng)]});
  }

  const double period = 2.0 * pi / cfg.params.trap_frequency;
  const auto k = model::derive_constants(cfg.params);
  std::vector<std::pair<double, double>> evolution_cache;
  int failures = 0;
  double worst_variance = 0.0, worst_fidelity = 0.0, worst_generator = 0.0, worst_evolution = 0.0;

  for (const auto& c : cases) {
    const double tau = c.periods * period;
    const auto profile = model::DrivingProfile::half_turn(tau);
    const auto coeffs = model::coefficients(cfg.params, profile, tau);
    const states::StateFamily family =
        c.kind == config::StateKind::partial
            ? states::StateFamily{states::PartialDisplacedFock{c.alpha, c.level}}
            : states::StateFamily{states::GlobalCoherent{c.alpha}};
    const auto state = states::make_state(family, states::Truncation{cfg.truncation}, c.n_particles);

    oracle::OracleOptions opts;
    opts.truncation = o.truncation;
    const std::size_t d = o.truncation != 0 ? std::max(o.truncation, state.truncation())
                                            : oracle::oracle_truncation(state, coeffs);
    opts.truncation = d;

    const double closed = qfi::qfi_closed(family, c.n_particles, k, coeffs);
    const double variance = oracle::qfi_variance_numeric(state, cfg.params, profile, tau, opts);
    const double fidelity = oracle::qfi_fidelity_numeric(state, cfg.params, profile, tau, opts);
    const double rel_v = qfi::relative_difference(variance, closed);
    const double rel_f = qfi::relative_difference(fidelity, closed);

    // Generator comparison on the levels the state populates.
    const std::size_t trusted = std::max(state.up().support(1e-20), state.down().support(1e-20)) + 1;
    auto analytic_coeffs = coeffs;
    if (cfg.corrupt_c2_sign) analytic_coeffs.c2 = -analytic_coeffs.c2;
    double gen_err = 0.0;
    for (Spin s : {Spin::up, Spin::down}) {
      const auto numeric = oracle::generator_numeric(cfg.params, profile, tau, s, d, 0.0, trusted);
      const auto analytic =
          oracle::generator_analytic(k, analytic_coeffs, cfg.params.trap_frequency, s, d);
      const double scale = std::max(1.0, linalg::max_abs_leading(analytic, trusted));
      gen_err = std::max(gen_err, linalg::max_abs_leading(numeric - analytic, trusted) / scale);
    }

    double evo_err = 0.0;
    if (o.steps > 0) {
      const auto it = std::find_if(evolution_cache.begin(), evolution_cache.end(),
                                   [&](const auto& e) { return e.first == c.periods; });
      if (it != evolution_cache.end()) {
        evo_err = it->second;
      } else {
        const auto closed_u = oracle::build_evolution_closed(cfg.params, profile, tau, Spin::up, d);
        const auto stepped_u =
            oracle::build_evolution_stepped(cfg.params, profile, tau, Spin::up, d, o.steps);
        evo_err = linalg::max_abs_leading(stepped_u - closed_u, trusted);
        evolution_cache.emplace_back(c.periods, evo_err);
      }
    }

    const bool pass = rel_v <= kOracleTolerance && rel_f <= kOracleTolerance &&
                      gen_err <= kGeneratorTolerance && (o.steps == 0 || evo_err < 1e-6);
    if (!pass) ++failures;
    worst_variance = std::max(worst_variance, rel_v);
    worst_fidelity = std::max(worst_fidelity, rel_f);
    worst_generator = std::max(worst_generator, gen_err);
    worst_evolution = std::max(worst_evolution, evo_err);

    t.rows.push_back({static_cast<double>(c.n_particles),
                      c.kind == config::StateKind::partial ? 0.0 : 1.0,
                      static_cast<double>(c.kind == config::StateKind::partial ? c.level : 0),
                      c.alpha.real(), c.alpha.imag(), c.periods, static_cast<double>(d), closed,
                      variance, fidelity, rel_v, rel_f, gen_err, evo_err, pass ? 1.0 : 0.0});
  }

  out.passed = failures == 0;
  t.summary.push_back({"passed", out.passed});
  t.summary.push_back({"cases", static_cast<std::int64_t>(cases.size())});
  t.summary.push_back({"failures", static_cast<std::int64_t>(failures)});
  t.summary.push_back({"state_codes", std::string("0=partial,1=global")});
  t.summary.push_back({"tolerance_qfi", kOracleTolerance});
  t.summary.push_back({"tolerance_generator", kGeneratorTolerance});
  t.summary.push_back({"worst_rel_variance", worst_variance});
  t.summary.push_back({"worst_rel_fidelity", worst_fidelity});
  t.summary.push_back({"worst_generator_error", worst_generator});
  t.summary.push_back({"worst_evolution_error", worst_evolution});
  return out;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit needs two or more points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw InvalidArgument("log-log fit needs positive data");
    const double lx = std::log10(x[i]), ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InvalidArgument("log-log fit needs distinct x values");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log10(y[i]) - (f.intercept + f.slope * std::log10(x[i]));
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& y) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.push_back(i);
  return out;
}

std::optional<double> steady_onset(const std::vector<double>& x, const std::vector<double>& y,
                                   double window, double rel) {
  const std::size_t n = x.size();
  // steady[j]: the window starting at x[j] lies inside the data and is flat.
  std::vector<int> steady(n, -1);
  for (std::size_t j = 0; j < n; ++j) {
    if (x[j] + window > x.back()) break;
    double lo = y[j], hi = y[j], mag = std::abs(y[j]);
    for (std::size_t k = j; k < n && x[k] <= x[j] + window; ++k) {
      lo = std::min(lo, y[k]);
      hi = std::max(hi, y[k]);
      mag = std::max(mag, std::abs(y[k]));
    }
    steady[j] = mag > 0.0 && (hi - lo) / mag < rel ? 1 : 0;
  }
  std::optional<double> onset;
  for (std::size_t j = n; j-- > 0;) {
    if (steady[j] == -1) continue;
    if (steady[j] == 0) break;
    onset = x[j];
  }
  return onset;
}

}  // namespace sagnac::scan
