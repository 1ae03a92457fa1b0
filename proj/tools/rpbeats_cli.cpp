#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rpbeats/config.hpp"
#include "rpbeats/dynamics.hpp"
#include "rpbeats/errors.hpp"
#include "rpbeats/pipeline.hpp"
#include "rpbeats/validation.hpp"

using namespace rpbeats;

namespace {

constexpr int kConfigError = 1;
constexpr int kValidationFailure = 2;

struct Common {
  std::string config_path;
  std::string preset;
  std::string out;
  int threads = 1;
  std::string noise;
};

ExperimentConfig load(const Common& o) {
  if (o.config_path.empty() == o.preset.empty()) throw ConfigError("give exactly one of --config or --preset");
  ExperimentConfig c = o.config_path.empty() ? preset_config(o.preset) : load_config(o.config_path);
  if (!o.noise.empty()) {
    bool found = false;
    for (auto m : {NoiseMethod::None, NoiseMethod::Kraus, NoiseMethod::KrausCircuit, NoiseMethod::PerGate,
                   NoiseMethod::EchoSynthetic})
      if (o.noise == to_string(m)) {
        c.noise = m;
        found = true;
      }
    if (!found) throw ConfigError("unknown noise method '" + o.noise + "'");
  }
  return c;
}

void emit(const CsvTable& table, const std::string& out) {
  if (out.empty() || out == "-") {
    write_csv(std::cout, table);
  } else {
    write_csv_file(out, table);
    std::cerr << "wrote " << table.rows.size() << " rows to " << out << "\n";
  }
}

std::string output_path(const Common& o, const ExperimentConfig& c) { return o.out.empty() ? c.output_path : o.out; }

void add_common(CLI::App* cmd, Common& o) {
  cmd->add_option("--config", o.config_path, "YAML experiment configuration");
  cmd->add_option("--preset", o.preset, "named preset (octalin, dmb)");
  cmd->add_option("--out", o.out, "output CSV path (default: config output or stdout)");
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--noise", o.noise, "override noise_method");
}

int cmd_simulate(const Common& o, const std::string& field, bool sectors, const std::string& compare) {
  auto c = load(o);
  if (!field.empty()) {
    if (field == "zero") c.field_regime = FieldRegime::Zero;
    else if (field == "high") c.field_regime = FieldRegime::High;
    else throw ConfigError("--field must be zero or high");
  }
  const auto S = run_simulate(c, c.field_regime, o.threads);
  std::vector<TimeSeries> extra;
  if (sectors) extra = run_sector_traces(c, c.field_regime, o.threads);
  auto table = series_table(S, extra);
  table.metadata = run_metadata(c);
  table.metadata.insert(table.metadata.begin() + 2, {"value", "singlet probability"});
  table.metadata.push_back({"field_regime", to_string(c.field_regime)});
  table.metadata.push_back({"field_t", std::to_string(c.field_regime == FieldRegime::Zero ? c.zero.field_t : c.high.field_t)});
  if (!compare.empty()) {
    const double rms = rms_deviation(S, read_series_csv(compare));
    table.metadata.push_back({"rms_vs_" + compare, std::to_string(rms)});
    std::cerr << "rms deviation from " << compare << ": " << rms << "\n";
  }
  emit(table, output_path(o, c));
  const auto [lo, hi] = std::minmax_element(S.values.begin(), S.values.end());
  std::cerr << "S(0)=" << S.values.front() << " S(end)=" << S.values.back() << " min=" << *lo << " max=" << *hi
            << " samples=" << S.size();
  if (clamp_warning_count()) std::cerr << " clamped=" << clamp_warning_count();
  std::cerr << "\n";
  return 0;
}

int cmd_trmfe(const Common& o) {
  const auto c = load(o);
  const auto r = run_trmfe(c, o.threads);
  CsvTable table;
  table.metadata = run_metadata(c);
  table.metadata.insert(table.metadata.begin() + 2, {"value", "observed ratio I_B/I_0"});
  table.metadata.push_back({"edge_until_ns", std::to_string(r.ratio.edge_until)});
  table.metadata.push_back({"edge_after_ns", std::to_string(r.ratio.edge_after)});
  table.columns = {"time_ns", "value", "I_B", "I_0", "S_B", "S_0"};
  std::size_t j = 0;
  for (std::size_t k = 0; k < r.S_B.size(); ++k) {
    if (j >= r.ratio.ratio.size() || r.ratio.ratio.times[j] != r.S_B.times[k]) continue;
    table.rows.push_back({r.S_B.times[k], r.ratio.ratio.values[j], r.ratio.intensity_B.values[k],
                          r.ratio.intensity_0.values[k], r.S_B.values[k], r.S_0.values[k]});
    ++j;
  }
  emit(table, output_path(o, c));
  std::size_t best = 0;
  for (std::size_t k = 0; k < r.ratio.ratio.size(); ++k) {
    const double t = r.ratio.ratio.times[k];
    if (t < r.ratio.edge_until || t > r.ratio.edge_after) continue;
    if (r.ratio.ratio.values[k] > r.ratio.ratio.values[best] || r.ratio.ratio.times[best] < r.ratio.edge_until) best = k;
  }
  std::cerr << "max R=" << r.ratio.ratio.values[best] << " at t=" << r.ratio.ratio.times[best] << " ns\n";
  return 0;
}

int cmd_validate(const std::string& suite, int threads) {
  std::vector<std::string> suites;
  if (suite == "all") suites = validation_suites();
  else suites = {suite};
  bool ok = true;
  for (const auto& s : suites) {
    const auto report = run_validation_suite(s, threads);
    print_report(std::cout, report);
    ok = ok && report.passed();
  }
  return ok ? 0 : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radical-pair quantum beat simulator"};
  app.require_subcommand(1);
  Common common;

  auto* sim = app.add_subcommand("simulate", "singlet probability S(t) as CSV");
  add_common(sim, common);
  std::string field, compare;
  bool sectors = false;
  sim->add_option("--field", field, "zero or high (default: config field_regime)");
  sim->add_flag("--sectors", sectors, "add one column per representative nuclear state");
  sim->add_option("--compare", compare, "CSV to compare against (RMS deviation, reported only)");

  auto* trmfe = app.add_subcommand("trmfe", "time-resolved magnetic field effect ratio as CSV");
  add_common(trmfe, common);

  auto* val = app.add_subcommand("validate", "run a built-in validation suite");
  std::string suite = "all";
  int vthreads = 1;
  val->add_option("--suite", suite, "suite name or 'all'");
  val->add_option("--threads", vthreads, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (sim->parsed()) return cmd_simulate(common, field, sectors, compare);
    if (trmfe->parsed()) return cmd_trmfe(common);
    if (val->parsed()) return cmd_validate(suite, vthreads);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const UnphysicalParameters& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}
