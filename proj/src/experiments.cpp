#include "casa/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "casa/error.hpp"

namespace casa {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double SweepResult::value(const std::string& x, const std::string& metric, Penalty penalty,
                          Application application) const {
  for (const auto& r : rows) {
    if (r.x != x || r.metric != metric || r.penalty != penalty) continue;
    if (penalty != Penalty::None && r.application != application) continue;
    return r.value_db;
  }
  throw ParameterError("no sweep row for x=" + x + " metric=" + metric);
}

std::vector<ErrorType> standard_error_types() {
  return {ErrorType::deletion(1), ErrorType::substitution(1), ErrorType::swapping(0, 1)};
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

namespace {

// Stream indices below keep scene, noise and contamination draws independent.
constexpr std::uint64_t kOracleStream = 1000;
constexpr std::uint64_t kContaminationStream = 2000;

void require_scenes(const StudyOptions& options) {
  if (options.n_scenes == 0) throw ParameterError("n_scenes must be at least 1");
}

std::vector<ClassLabel> labels_of(const Scene& scene) {
  std::vector<ClassLabel> out;
  for (const auto& t : scene.targets) out.push_back(t.label);
  return out;
}

// Accumulates per-scene values for a fixed row layout, then averages.
class RowAccumulator {
 public:
  void add(std::size_t slot, SweepRow row) {
    if (slot == sums_.size()) {
      rows_.push_back(std::move(row));
      sums_.push_back(rows_.back().value_db);
    } else {
      sums_.at(slot) += row.value_db;
    }
  }

  std::vector<SweepRow> mean(std::size_t n) const {
    auto out = rows_;
    for (std::size_t i = 0; i < out.size(); ++i) out[i].value_db = sums_[i] / static_cast<double>(n);
    return out;
  }

 private:
  std::vector<SweepRow> rows_;
  std::vector<double> sums_;
};

std::string scene_summary(const StudyOptions& o) {
  std::ostringstream s;
  s << "targets=" << o.scene.n_targets << " interferences=" << o.scene.n_interferences
    << " duration_s=" << format_double(o.scene.duration_s) << " sample_rate=" << o.scene.sample_rate
    << " cap_db=" << format_double(o.sdr_cap_db);
  return s.str();
}

}  // namespace

SweepResult run_classification_study(Seed seed, double snr_db, const StudyOptions& options) {
  require_scenes(options);
  const double cap = options.sdr_cap_db;
  MetricConfig casa_config;
  casa_config.sdr_cap_db = cap;

  RowAccumulator acc;
  for (std::size_t s = 0; s < options.n_scenes; ++s) {
    const Seed scene_seed = derive_seed(seed, s);
    const Scene scene = make_scene(options.scene, scene_seed);
    const auto oracle = oracle_predictions(scene, snr_db, derive_seed(scene_seed, kOracleStream));
    std::size_t slot = 0;
    for (const auto& error : standard_error_types()) {
      const auto predictions = inject_error(oracle, error, labels_of(scene));
      const std::string x = to_string(error.kind);
      acc.add(slot++, {x, "classical", Penalty::None, Application::NonTP,
                       classical_sdr(predictions, scene.targets, cap).final_db});
      acc.add(slot++, {x, "ca", Penalty::None, Application::NonTP, ca_sdr(predictions, scene.targets, cap).final_db});
      acc.add(slot++, {x, "casa", Penalty::None, Application::NonTP,
                       casa_sdr(predictions, scene.targets, &scene.mixture, casa_config).final_db});
    }
  }

  SweepResult result;
  result.study = "classification";
  result.seed = seed;
  result.n_scenes = options.n_scenes;
  result.config_summary = scene_summary(options) + " snr_db=" + format_double(snr_db);
  result.rows = acc.mean(options.n_scenes);
  return result;
}

SweepResult run_contamination_sweep(Seed seed, const std::vector<double>& alphas, const StudyOptions& options) {
  require_scenes(options);
  if (alphas.empty()) throw ParameterError("alpha grid is empty");
  for (double a : alphas)
    if (!(a >= 0.0 && a <= 1.0)) throw ParameterError("alpha " + format_double(a) + " outside [0, 1]");
  if (options.scene.n_targets < 2) throw ParameterError("contamination needs at least two targets");
  const double cap = options.sdr_cap_db;
  MetricConfig casa_config;
  casa_config.sdr_cap_db = cap;

  RowAccumulator acc;
  for (std::size_t s = 0; s < options.n_scenes; ++s) {
    const Seed scene_seed = derive_seed(seed, s);
    const Scene scene = make_scene(options.scene, scene_seed);
    const Seed sweep_seed = derive_seed(scene_seed, kContaminationStream);
    std::size_t slot = 0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      ContaminationSpec spec;
      spec.alpha = alphas[i];
      const auto predictions = cross_contaminate(scene.targets, spec, derive_seed(sweep_seed, i));
      const std::string x = format_double(alphas[i]);
      acc.add(slot++, {x, "classical", Penalty::None, Application::NonTP,
                       classical_sdr(predictions, scene.targets, cap).final_db});
      acc.add(slot++, {x, "ca", Penalty::None, Application::NonTP, ca_sdr(predictions, scene.targets, cap).final_db});
      acc.add(slot++, {x, "casa", Penalty::None, Application::NonTP,
                       casa_sdr(predictions, scene.targets, &scene.mixture, casa_config).final_db});
    }
  }

  SweepResult result;
  result.study = "contamination";
  result.seed = seed;
  result.n_scenes = options.n_scenes;
  result.config_summary = scene_summary(options) + " pair=1,2 noise_snr_db=60";
  result.rows = acc.mean(options.n_scenes);
  return result;
}

SweepResult run_penalty_study(Seed seed, const std::vector<double>& snrs_db, const StudyOptions& options) {
  require_scenes(options);
  if (snrs_db.empty()) throw ParameterError("SNR list is empty");
  const std::pair<Penalty, Application> configs[] = {
      {Penalty::None, Application::NonTP},
      {Penalty::InputLevel, Application::NonTP},
      {Penalty::InputLevel, Application::ErrorBased},
      {Penalty::OutputLevel, Application::NonTP},
      {Penalty::OutputLevel, Application::ErrorBased},
  };

  RowAccumulator acc;
  for (std::size_t s = 0; s < options.n_scenes; ++s) {
    const Seed scene_seed = derive_seed(seed, s);
    const Scene scene = make_scene(options.scene, scene_seed);
    std::size_t slot = 0;
    for (std::size_t i = 0; i < snrs_db.size(); ++i) {
      const auto oracle = oracle_predictions(scene, snrs_db[i], derive_seed(scene_seed, kOracleStream + i));
      for (const auto& error : standard_error_types()) {
        const auto predictions = inject_error(oracle, error, labels_of(scene));
        const std::string metric = "casa." + to_string(error.kind);
        for (const auto& [penalty, application] : configs) {
          MetricConfig config;
          config.penalty = penalty;
          config.application = application;
          config.sdr_cap_db = options.sdr_cap_db;
          const double v = casa_sdr(predictions, scene.targets, &scene.mixture, config).final_db;
          acc.add(slot++, {format_double(snrs_db[i]), metric, penalty, application, v});
        }
      }
    }
  }

  SweepResult result;
  result.study = "penalties";
  result.seed = seed;
  result.n_scenes = options.n_scenes;
  result.config_summary = scene_summary(options);
  result.rows = acc.mean(options.n_scenes);
  return result;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  out << "study,x,metric,penalty,application,value_db,seed\n";
  for (const auto& r : result.rows) {
    out << result.study << ',' << r.x << ',' << r.metric << ',' << to_string(r.penalty) << ','
        << (r.penalty == Penalty::None ? std::string_view("-") : to_string(r.application)) << ','
        << format_double(r.value_db) << ',' << result.seed.value << '\n';
  }
}

std::string summarize(const SweepResult& result) {
  std::vector<std::string> xs, keys;
  std::map<std::pair<std::string, std::string>, double> cells;
  const auto push_unique = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto& r : result.rows) {
    std::string key = r.metric;
    if (r.penalty != Penalty::None)
      key += " " + std::string(to_string(r.penalty)) + "/" + std::string(to_string(r.application));
    push_unique(xs, r.x);
    push_unique(keys, key);
    cells[{key, r.x}] = r.value_db;
  }

  std::ostringstream out;
  out << result.study << " (seed " << result.seed.value << ", " << result.n_scenes << " scenes, dB)\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-40s", "metric");
  out << buf;
  for (const auto& x : xs) {
    std::snprintf(buf, sizeof buf, "%14s", x.c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& k : keys) {
    std::snprintf(buf, sizeof buf, "%-40s", k.c_str());
    out << buf;
    for (const auto& x : xs) {
      const auto it = cells.find({k, x});
      if (it == cells.end())
        std::snprintf(buf, sizeof buf, "%14s", "-");
      else
        std::snprintf(buf, sizeof buf, "%14.2f", it->second);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace casa
