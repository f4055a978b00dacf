#include "sagnac/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "sagnac/errors.hpp"
#include "sagnac/format.hpp"

namespace sagnac::config {
namespace {

using std::numbers::pi;

struct Entry {
  std::string value;
  std::string origin;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail(const Entry& e, const std::string& key, const std::string& msg) {
  throw ConfigError(e.origin + ": key '" + key + "': " + msg);
}

double to_double(const Entry& e, const std::string& key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty())
    fail(e, key, "expected a number, got '" + std::string(text) + "'");
  if (!std::isfinite(v)) fail(e, key, "value must be finite");
  return v;
}

long to_integer(const Entry& e, const std::string& key, long lo) {
  long v = 0;
  const auto& t = e.value;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    fail(e, key, "expected an integer, got '" + t + "'");
  if (v < lo) fail(e, key, "must be >= " + std::to_string(lo));
  return v;
}

std::vector<double> to_list(const Entry& e, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split(e.value, ',')) out.push_back(to_double(e, key, item));
  return out;
}

bool to_bool(const Entry& e, const std::string& key) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  fail(e, key, "expected true or false, got '" + e.value + "'");
}

template <typename T>
T to_enum(const Entry& e, const std::string& key, const std::map<std::string, T>& names) {
  const auto it = names.find(e.value);
  if (it != names.end()) return it->second;
  std::string options;
  for (const auto& [name, _] : names) options += (options.empty() ? "" : "|") + name;
  fail(e, key, "expected one of " + options + ", got '" + e.value + "'");
}

using Setter = std::function<void(ScanConfig&, const Entry&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"params.mass", [](ScanConfig& c, const Entry& e, const std::string& k) { c.params.mass = to_double(e, k, e.value); }},
      {"params.hbar", [](ScanConfig& c, const Entry& e, const std::string& k) { c.params.hbar = to_double(e, k, e.value); }},
      {"params.omega", [](ScanConfig& c, const Entry& e, const std::string& k) { c.params.trap_frequency = to_double(e, k, e.value); }},
      {"params.radius", [](ScanConfig& c, const Entry& e, const std::string& k) { c.params.ring_radius = to_double(e, k, e.value); }},
      {"params.rotation", [](ScanConfig& c, const Entry& e, const std::string& k) { c.params.rotation_rate = to_double(e, k, e.value); }},
      {"profile.kind",
       [](ScanConfig& c, const Entry& e, const std::string& k) {
         c.profile_kind = e.value;
         if (e.value != "constant" && e.value != "piecewise" && e.value != "sampled")
           fail(e, k, "expected constant|piecewise|sampled, got '" + e.value + "'");
       }},
      {"profile.value",
       [](ScanConfig& c, const Entry& e, const std::string& k) {
         c.profile_values = to_list(e, k);
         for (double v : c.profile_values)
           if (!(v > 0.0)) fail(e, k, "drive values must be > 0");
       }},
      {"profile.segments",
       [](ScanConfig& c, const Entry& e, const std::string& k) {
         c.segments.clear();
         for (const auto& item : split(e.value, ',')) {
           const auto parts = split(item, ':');
           if (parts.size() != 2) fail(e, k, "segments are duration:value pairs, got '" + item + "'");
           c.segments.push_back({to_double(e, k, parts[0]), to_double(e, k, parts[1])});
         }
       }},
      {"profile.samples", [](ScanConfig& c, const Entry& e, const std::string& k) { c.samples = to_list(e, k); }},
      {"profile.normalize",
       [](ScanConfig& c, const Entry& e, const std::string& k) {
         c.normalization = to_enum<model::Normalization>(
             e, k, {{"strict", model::Normalization::strict}, {"rescale", model::Normalization::rescale}});
       }},
      {"time.tau",
       [](ScanConfig& c, const Entry& e, const std::string& k) {
         c.tau = to_double(e, k, e.value);
         if (!(*c.tau > 0.0)) fail(e, k, "must be > 0");
       }},
      {"time.tau_periods",
       [](ScanConfig& c, const Entry& e, const std::string& k) {
         c.tau_periods = to_double(e, k, e.value);
         if (!(*c.tau_periods > 0.0)) fail(e, k, "must be > 0");
       }},
      {"state.kind",
       [](ScanConfig& c, const Entry& e, const std::string& k) {
         c.state_kind = to_enum<StateKind>(
             e, k, {{"partial", StateKind::partial}, {"global", StateKind::global}, {"product", StateKind::product}});
       }},
      {"state.alpha_re", [](ScanConfig& c, const Entry& e, const std::string& k) { c.alpha.real(to_double(e, k, e.value)); }},
      {"state.alpha_im", [](ScanConfig& c, const Entry& e, const std::string& k) { c.alpha.imag(to_double(e, k, e.value)); }},
      {"state.n", [](ScanConfig& c, const Entry& e, const std::string& k) { c.fock_level = static_cast<int>(to_integer(e, k, 0)); }},
      {"state.truncation", [](ScanConfig& c, const Entry& e, const std::string& k) { c.truncation = static_cast<std::size_t>(to_integer(e, k, 0)); }},
      {"state.N", [](ScanConfig& c, const Entry& e, const std::string& k) { c.n_particles = static_cast<int>(to_integer(e, k, 1)); }},
      {"sweep.variable",
       [](ScanConfig& c, const Entry& e, const std::string& k) {
         c.sweep.variable = to_enum<SweepVariable>(e, k,
                                                   {{"N", SweepVariable::n_particles},
                                                    {"theta_alpha", SweepVariable::theta_alpha},
                                                    {"abs_alpha", SweepVariable::abs_alpha},
                                                    {"tau", SweepVariable::tau},
                                                    {"radius", SweepVariable::radius}});
       }},
      {"sweep.min", [](ScanConfig& c, const Entry& e, const std::string& k) { c.sweep.min = to_double(e, k, e.value); }},
      {"sweep.max", [](ScanConfig& c, const Entry& e, const std::string& k) { c.sweep.max = to_double(e, k, e.value); }},
      {"sweep.points", [](ScanConfig& c, const Entry& e, const std::string& k) { c.sweep.points = static_cast<int>(to_integer(e, k, 2)); }},
      {"sweep.scale",
       [](ScanConfig& c, const Entry& e, const std::string& k) {
         c.sweep.scale = to_enum<SweepScale>(e, k, {{"linear", SweepScale::linear}, {"log", SweepScale::log}});
       }},
      {"oracle.N", [](ScanConfig& c, const Entry& e, const std::string& k) { c.oracle.max_particles = static_cast<int>(to_integer(e, k, 1)); }},
      {"oracle.tau_periods",
       [](ScanConfig& c, const Entry& e, const std::string& k) {
         c.oracle.tau_periods = to_list(e, k);
         for (double v : c.oracle.tau_periods)
           if (!(v > 0.0)) fail(e, k, "periods must be > 0");
       }},
      {"oracle.truncation", [](ScanConfig& c, const Entry& e, const std::string& k) { c.oracle.truncation = static_cast<std::size_t>(to_integer(e, k, 0)); }},
      {"oracle.steps", [](ScanConfig& c, const Entry& e, const std::string& k) { c.oracle.steps = static_cast<int>(to_integer(e, k, 0)); }},
      {"oracle.draws", [](ScanConfig& c, const Entry& e, const std::string& k) { c.oracle.draws = static_cast<int>(to_integer(e, k, 0)); }},
      {"test.corrupt_c2_sign", [](ScanConfig& c, const Entry& e, const std::string& k) { c.corrupt_c2_sign = to_bool(e, k); }},
  };
  return table;
}

void assign(std::map<std::string, Entry>& entries, std::string_view line, const std::string& origin) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ConfigError(origin + ": expected key = value");
  const auto key = trim(line.substr(0, eq));
  const auto value = trim(line.substr(eq + 1));
  if (key.empty()) throw ConfigError(origin + ": empty key");
  if (!setters().contains(key)) throw ConfigError(origin + ": unknown key '" + key + "'");
  entries[key] = Entry{value, origin};
}

void validate(const ScanConfig& c, const std::map<std::string, Entry>& entries) {
  auto origin = [&](const std::string& key) {
    const auto it = entries.find(key);
    return it == entries.end() ? std::string("<default>") : it->second.origin;
  };
  try {
    c.params.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  if (c.tau && c.tau_periods)
    throw ConfigError(origin("time.tau_periods") + ": time.tau and time.tau_periods are exclusive");

  const auto& s = c.sweep;
  if (!(s.min < s.max))
    throw ConfigError(origin("sweep.max") + ": key 'sweep.max': sweep range [" +
                      format_double(s.min) + ", " + format_double(s.max) + "] is empty");
  if (s.scale == SweepScale::log && !(s.min > 0.0))
    throw ConfigError(origin("sweep.min") + ": key 'sweep.min': log scale needs a positive range");
  if (s.variable == SweepVariable::n_particles && s.min < 1.0)
    throw ConfigError(origin("sweep.min") + ": key 'sweep.min': particle number must be >= 1");
  if ((s.variable == SweepVariable::tau || s.variable == SweepVariable::radius ||
       s.variable == SweepVariable::abs_alpha) &&
      s.min < 0.0)
    throw ConfigError(origin("sweep.min") + ": key 'sweep.min': must be >= 0");
  if (c.state_kind != StateKind::global && c.fock_level < 0)
    throw ConfigError(origin("state.n") + ": key 'state.n': must be >= 0");
}

}  // namespace

std::vector<double> Sweep::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    double v = scale == SweepScale::log ? std::pow(10.0, std::log10(min) + t * (std::log10(max) - std::log10(min)))
                                        : min + t * (max - min);
    if (i == points - 1) v = max;
    if (variable == SweepVariable::n_particles) v = std::round(v);
    out.push_back(v);
  }
  return out;
}

std::size_t ScanConfig::series_count() const {
  return profile_kind == "constant" ? std::max<std::size_t>(1, profile_values.size()) : 1;
}

ResolvedDrive ScanConfig::drive(std::size_t series) const {
  std::optional<double> t = tau;
  if (tau_periods) t = *tau_periods * 2.0 * pi / params.trap_frequency;

  if (profile_kind == "constant") {
    if (profile_values.empty()) {
      if (!t) throw ConfigError("constant profile needs profile.value or a tau");
      return drive_for_tau(*t);
    }
    if (series >= profile_values.size()) throw ConfigError("profile series index out of range");
    const double v = profile_values[series];
    if (!t) return {model::DrivingProfile::constant(v), pi / v, v};
    return {model::normalize(model::DrivingProfile::constant(v), *t, normalization), *t, pi / *t};
  }
  if (profile_kind == "piecewise") {
    if (segments.empty()) throw ConfigError("piecewise profile needs profile.segments");
    double total = 0.0;
    for (const auto& s : segments) total += s.duration;
    const double end = t.value_or(total);
    return {model::normalize(model::DrivingProfile::piecewise(segments), end, normalization), end,
            pi / end};
  }
  if (samples.size() < 2) throw ConfigError("sampled profile needs at least two profile.samples");
  if (!t) throw ConfigError("sampled profile needs time.tau or time.tau_periods");
  std::vector<double> times(samples.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    times[i] = *t * static_cast<double>(i) / static_cast<double>(times.size() - 1);
  times.back() = *t;
  return {model::normalize(model::DrivingProfile::sampled(times, samples), *t, normalization), *t,
          pi / *t};
}

ResolvedDrive ScanConfig::drive_for_tau(double t) const {
  if (profile_kind != "constant")
    throw ConfigError("a tau sweep recomputes omega_p = pi / tau and needs profile.kind = constant");
  if (!(t > 0.0)) throw ConfigError("tau must be > 0");
  return {model::DrivingProfile::half_turn(t), t, pi / t};
}

states::StateFamily ScanConfig::family(Complex a) const {
  switch (state_kind) {
    case StateKind::partial: return states::PartialDisplacedFock{a, fock_level};
    case StateKind::product: return states::ProductDisplacedFock{a, fock_level};
    case StateKind::global: break;
  }
  return states::GlobalCoherent{a};
}

ScanConfig build(std::string_view text, std::string_view source,
                 const std::vector<std::string>& overrides) {
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    const auto body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    assign(entries, body, std::string(source) + ":" + std::to_string(number));
  }
  for (const auto& o : overrides) assign(entries, o, "--set " + o);

  ScanConfig cfg;
  for (const auto& [key, entry] : entries) setters().at(key)(cfg, entry, key);
  validate(cfg, entries);
  return cfg;
}

ScanConfig parse(std::string_view text, std::string_view source) { return build(text, source, {}); }

ScanConfig load(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::string text;
  if (!path.empty()) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  return build(text, path.empty() ? "<none>" : path.string(), overrides);
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& [key, _] : setters()) out.push_back(key);
  return out;
}

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::partial: return "partial";
    case StateKind::product: return "product";
    case StateKind::global: break;
  }
  return "global";
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::n_particles: return "N";
    case SweepVariable::theta_alpha: return "theta_alpha";
    case SweepVariable::abs_alpha: return "abs_alpha";
    case SweepVariable::tau: return "tau";
    case SweepVariable::radius: return "radius";
  }
  return "?";
}

std::vector<std::string> header_lines(const ScanConfig& c) {
  const auto& p = c.params;
  std::vector<std::string> out;
  out.push_back("mass=" + format_double(p.mass) + " hbar=" + format_double(p.hbar) +
                " omega=" + format_double(p.trap_frequency) + " radius=" + format_double(p.ring_radius) +
                " rotation=" + format_double(p.rotation_rate));
  std::string profile = "profile=" + c.profile_kind;
  if (c.profile_kind == "constant") {
    std::string values;
    for (double v : c.profile_values) values += (values.empty() ? "" : ",") + format_double(v);
    profile += " value=" + (values.empty() ? std::string("pi/tau") : values);
  } else if (c.profile_kind == "piecewise") {
    std::string segs;
    for (const auto& s : c.segments)
      segs += (segs.empty() ? "" : ",") + format_double(s.duration) + ":" + format_double(s.value);
    profile += " segments=" + segs;
  } else {
    profile += " samples=" + std::to_string(c.samples.size());
  }
  profile += std::string(" normalize=") +
             (c.normalization == model::Normalization::strict ? "strict" : "rescale");
  if (c.tau) profile += " tau=" + format_double(*c.tau);
  if (c.tau_periods) profile += " tau_periods=" + format_double(*c.tau_periods);
  out.push_back(profile);
  out.push_back("state=" + to_string(c.state_kind) + " alpha=" + format_double(c.alpha.real()) +
                (c.alpha.imag() < 0 ? "" : "+") + format_double(c.alpha.imag()) + "i" +
                " n=" + std::to_string(c.fock_level) + " N=" + std::to_string(c.n_particles) +
                " truncation=" + (c.truncation == 0 ? std::string("auto") : std::to_string(c.truncation)));
  out.push_back("qfi_unit=time^2 tau_unit=time theta_alpha_unit=pi sweep_tau_unit=T0");
  return out;
}

}  // namespace sagnac::config
