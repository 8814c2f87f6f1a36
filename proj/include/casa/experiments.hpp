#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "casa/metrics.hpp"
#include "casa/scenario.hpp"

namespace casa {

struct SweepRow {
  std::string x;       // alpha, SNR or error-type tag, already formatted
  std::string metric;  // classical | ca | casa | casa.<error type>
  Penalty penalty = Penalty::None;
  Application application = Application::NonTP;
  double value_db = 0.0;
};

struct SweepResult {
  std::string study;
  Seed seed;
  std::size_t n_scenes = 0;
  std::string config_summary;
  std::vector<SweepRow> rows;

  // Lookup by (x, metric, penalty, application); throws ParameterError if absent.
  double value(const std::string& x, const std::string& metric, Penalty penalty = Penalty::None,
               Application application = Application::NonTP) const;
};

struct StudyOptions {
  std::size_t n_scenes = 10;
  SceneParams scene;
  double sdr_cap_db = kDefaultSdrCapDb;
};

// Deletion and substitution hit slot 2, swapping exchanges slots 1 and 2
// (1-based), mirroring the two-source labelling error table.
std::vector<ErrorType> standard_error_types();

// x = error type; metrics classical, ca, casa (no penalty).
SweepResult run_classification_study(Seed seed, double snr_db, const StudyOptions& options = {});

// Default alpha grid: 0.0 to 1.0 in steps of 0.05 (21 points).
std::vector<double> default_alpha_grid();

// x = alpha; contaminates targets 1 and 2 with 60 dB noise floors.
SweepResult run_contamination_sweep(Seed seed, const std::vector<double>& alphas,
                                    const StudyOptions& options = {});

// x = SNR; metric = casa.<error type>; five penalty configurations each.
SweepResult run_penalty_study(Seed seed, const std::vector<double>& snrs_db,
                              const StudyOptions& options = {});

// Columns: study,x,metric,penalty,application,value_db,seed
void write_csv(const SweepResult& result, std::ostream& out);

// Table-shaped text summary (rows = metrics, columns = x values).
std::string summarize(const SweepResult& result);

// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace casa
