#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rpbeats/config.hpp"
#include "rpbeats/dynamics.hpp"
#include "rpbeats/postprocess.hpp"

namespace rpbeats {

// Noiseless (electron 2, electron 1) state for the configured initial state.
ElectronTrace noiseless_trace(const ExperimentConfig& c, FieldRegime regime, int threads = 1);

// Applies the configured relaxation method to a noiseless trace.
ElectronTrace apply_noise_method(const ExperimentConfig& c, FieldRegime regime, const ElectronTrace& clean,
                                 int threads = 1);

TimeSeries run_simulate(const ExperimentConfig& c, FieldRegime regime, int threads = 1);
// Singlet traces of each |I,I> representative (one group only), noise applied.
std::vector<TimeSeries> run_sector_traces(const ExperimentConfig& c, FieldRegime regime, int threads = 1);

struct TrmfeResult {
  TimeSeries S_B, S_0;
  RatioResult ratio;
};
TrmfeResult run_trmfe(const ExperimentConfig& c, int threads = 1);

// Columns time_ns, value[, extra...]; `# key: value` metadata lines first.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
CsvTable series_table(const TimeSeries& main, const std::vector<TimeSeries>& extra = {});
void write_csv(std::ostream& os, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);
// Reads the first two columns of a CSV written by write_csv or any numeric two-column file.
TimeSeries read_series_csv(const std::string& path);
// RMS deviation of `reference` from `model`, with reference interpolated linearly onto the model grid
// inside their common time range.
double rms_deviation(const TimeSeries& model, const TimeSeries& reference);

std::vector<std::pair<std::string, std::string>> run_metadata(const ExperimentConfig& c);

}  // namespace rpbeats
