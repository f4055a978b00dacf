#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "sagnac/config.hpp"
#include "sagnac/errors.hpp"
#include "sagnac/report.hpp"
#include "sagnac/scan.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitVerification = 3;

using Runner = std::function<sagnac::scan::ScanOutput(const sagnac::config::ScanConfig&, std::uint64_t)>;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QFI of a multi-atom Sagnac interferometer: sweeps, single points and oracle checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 20240601;

  const std::map<std::string, std::pair<std::string, Runner>> commands = {
      {"coeffs", {"Generator coefficients and derived constants",
                  [](const auto& c, std::uint64_t) { return sagnac::scan::run_coeffs(c); }}},
      {"qfi", {"QFI at a single configuration",
               [](const auto& c, std::uint64_t) { return sagnac::scan::run_qfi(c); }}},
      {"scan-n", {"Sweep particle number (or ring radius) and fit log-log slopes",
                  [](const auto& c, std::uint64_t) { return sagnac::scan::run_scan_n(c); }}},
      {"scan-alpha", {"Sweep the phase or modulus of alpha",
                      [](const auto& c, std::uint64_t) { return sagnac::scan::run_scan_alpha(c); }}},
      {"scan-tau", {"Sweep tau in trap periods with omega_p = pi / tau",
                    [](const auto& c, std::uint64_t) { return sagnac::scan::run_scan_tau(c); }}},
      {"oracle-check", {"Brute-force verification on truncated Fock spaces",
                        [](const auto& c, std::uint64_t s) { return sagnac::scan::run_oracle_check(c, s); }}},
  };

  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "Override one key (key=value), repeatable")->take_all();
    sub->add_option("--out", out_path, "Output file (default stdout)");
    sub->add_option("--format", format, "Output format (default csv; json for oracle-check)")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "Seed for randomized oracle draws");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const auto& runner = commands.at(name).second;

  sagnac::scan::ScanOutput result;
  try {
    const auto cfg = sagnac::config::load(config_path, overrides);
    result = runner(cfg, seed);
  } catch (const sagnac::VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const sagnac::ConsistencyError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const sagnac::NumericalError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const sagnac::TruncationError& e) {
    std::cerr << "error: " << e.what();
    if (e.required_truncation() != 0)
      std::cerr << " (hint: --set oracle.truncation=" << e.required_truncation() << ")";
    std::cerr << '\n';
    return kExitConfig;
  } catch (const sagnac::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  if (format.empty()) format = name == "oracle-check" ? "json" : "csv";
  const auto fmt = format == "json" ? sagnac::report::Format::json : sagnac::report::Format::csv;
  if (out_path.empty()) {
    sagnac::report::write(std::cout, result.table, fmt);
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kExitConfig;
    }
    sagnac::report::write(f, result.table, fmt);
  }

  if (!result.passed) {
    std::cerr << "verification failed: see the report summary\n";
    return kExitVerification;
  }
  return 0;
}
