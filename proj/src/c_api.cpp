#include "casa_sdr.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <new>
#include <string>

#include "casa/error.hpp"
#include "casa/experiments.hpp"
#include "casa/manifest.hpp"
#include "casa/wav.hpp"

struct casa_signal {
  casa::AudioSignal signal;
};

struct casa_report {
  casa::MetricReport report;
  // Label strings handed out through casa_source_record.
  std::vector<std::string> reference_labels;
  std::vector<std::string> estimate_labels;
};

struct casa_sweep {
  casa::SweepResult result;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

casa_status fail(casa_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `fn`, translating library exceptions into status codes.
template <class Fn>
casa_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CASA_OK;
  } catch (const casa::DimensionError& e) {
    return fail(CASA_ERROR_DIMENSION, e.what());
  } catch (const casa::DomainError& e) {
    return fail(CASA_ERROR_DOMAIN, e.what());
  } catch (const casa::ConfigError& e) {
    return fail(CASA_ERROR_CONFIG, e.what());
  } catch (const casa::ParameterError& e) {
    return fail(CASA_ERROR_PARAMETER, e.what());
  } catch (const casa::FormatError& e) {
    return fail(CASA_ERROR_FORMAT, e.what());
  } catch (const casa::IoError& e) {
    return fail(CASA_ERROR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CASA_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CASA_ERROR_INTERNAL, e.what());
  }
}

casa_status null_argument(const char* name) {
  return fail(CASA_ERROR_PARAMETER, std::string("argument '") + name + "' must not be NULL");
}

casa::MetricConfig to_config(const casa_metric_config& c) {
  casa::MetricConfig out;
  switch (c.variant) {
    case CASA_VARIANT_CLASSICAL: out.variant = casa::Variant::Classical; break;
    case CASA_VARIANT_CA: out.variant = casa::Variant::CA; break;
    case CASA_VARIANT_CASA: out.variant = casa::Variant::CASA; break;
    default: throw casa::ConfigError("unknown metric variant " + std::to_string(c.variant));
  }
  switch (c.penalty) {
    case CASA_PENALTY_NONE: out.penalty = casa::Penalty::None; break;
    case CASA_PENALTY_INPUT: out.penalty = casa::Penalty::InputLevel; break;
    case CASA_PENALTY_OUTPUT: out.penalty = casa::Penalty::OutputLevel; break;
    default: throw casa::ConfigError("unknown penalty " + std::to_string(c.penalty));
  }
  switch (c.application) {
    case CASA_APPLY_NON_TP: out.application = casa::Application::NonTP; break;
    case CASA_APPLY_ERROR_BASED: out.application = casa::Application::ErrorBased; break;
    default: throw casa::ConfigError("unknown penalty application " + std::to_string(c.application));
  }
  out.sdr_cap_db = c.sdr_cap_db;
  return out;
}

std::vector<casa::LabeledSource> to_sources(const casa_labeled_source* items, size_t n, const char* what) {
  if (n > 0 && items == nullptr) throw casa::ParameterError(std::string("argument '") + what + "' must not be NULL");
  std::vector<casa::LabeledSource> out;
  for (size_t i = 0; i < n; ++i) {
    if (items[i].signal == nullptr)
      throw casa::ParameterError(std::string(what) + "[" + std::to_string(i) + "] has no signal");
    auto label = items[i].label ? casa::ClassLabel::parse(items[i].label) : casa::ClassLabel::none();
    out.push_back({items[i].signal->signal, std::move(label)});
  }
  return out;
}

casa_report* wrap(casa::MetricReport report) {
  auto* out = new casa_report{std::move(report), {}, {}};
  for (const auto& s : out->report.per_source) {
    out->reference_labels.push_back(s.reference_label ? s.reference_label->to_string() : std::string());
    out->estimate_labels.push_back(s.estimate_label ? s.estimate_label->to_string() : std::string());
  }
  return out;
}

}  // namespace

extern "C" {

const char* casa_last_error(void) { return g_last_error.c_str(); }

const char* casa_status_string(casa_status status) {
  switch (status) {
    case CASA_OK: return "ok";
    case CASA_ERROR_DIMENSION: return "dimension error";
    case CASA_ERROR_DOMAIN: return "domain error";
    case CASA_ERROR_CONFIG: return "configuration error";
    case CASA_ERROR_PARAMETER: return "parameter error";
    case CASA_ERROR_FORMAT: return "format error";
    case CASA_ERROR_IO: return "I/O error";
    case CASA_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

casa_status casa_signal_create(const double* samples, size_t length, uint32_t sample_rate, casa_signal** out) {
  if (!out) return null_argument("out");
  if (!samples && length > 0) return null_argument("samples");
  return guarded([&] {
    *out = new casa_signal{casa::AudioSignal(std::vector<double>(samples, samples + length), sample_rate)};
  });
}

casa_status casa_signal_load(const char* path, int channel, casa_signal** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    std::optional<unsigned> ch;
    if (channel >= 0) ch = static_cast<unsigned>(channel);
    *out = new casa_signal{casa::load_audio(path, ch)};
  });
}

casa_status casa_signal_save(const casa_signal* signal, const char* path, int float32) {
  if (!signal) return null_argument("signal");
  if (!path) return null_argument("path");
  return guarded([&] {
    casa::save_audio(path, signal->signal, float32 ? casa::WavEncoding::Float32 : casa::WavEncoding::Pcm16);
  });
}

size_t casa_signal_length(const casa_signal* signal) { return signal ? signal->signal.size() : 0; }
uint32_t casa_signal_sample_rate(const casa_signal* signal) { return signal ? signal->signal.sample_rate() : 0; }
const double* casa_signal_samples(const casa_signal* signal) {
  return signal ? signal->signal.samples().data() : nullptr;
}
void casa_signal_destroy(casa_signal* signal) { delete signal; }

casa_status casa_sdr(const casa_signal* estimate, const casa_signal* reference, double cap_db, double* out_db) {
  if (!estimate) return null_argument("estimate");
  if (!reference) return null_argument("reference");
  if (!out_db) return null_argument("out_db");
  return guarded([&] { *out_db = casa::sdr(estimate->signal, reference->signal, cap_db); });
}

void casa_metric_config_init(casa_metric_config* config) {
  if (!config) return;
  config->variant = CASA_VARIANT_CASA;
  config->penalty = CASA_PENALTY_NONE;
  config->application = CASA_APPLY_NON_TP;
  config->sdr_cap_db = casa::kDefaultSdrCapDb;
}

casa_status casa_evaluate(const casa_labeled_source* predictions, size_t n_predictions,
                          const casa_labeled_source* references, size_t n_references, const casa_signal* mixture,
                          const casa_metric_config* config, casa_report** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto preds = to_sources(predictions, n_predictions, "predictions");
    const auto refs = to_sources(references, n_references, "references");
    *out = wrap(casa::evaluate(preds, refs, mixture ? &mixture->signal : nullptr, to_config(*config)));
  });
}

casa_status casa_evaluate_manifest(const char* manifest_path, const double* cap_override, casa_report** out) {
  if (!manifest_path) return null_argument("manifest_path");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto manifest = casa::load_manifest(manifest_path);
    if (cap_override) manifest.config.sdr_cap_db = *cap_override;
    *out = wrap(casa::evaluate_manifest(manifest));
  });
}

double casa_report_final_db(const casa_report* report) { return report ? report->report.final_db : NAN; }
size_t casa_report_denominator(const casa_report* report) { return report ? report->report.denominator : 0; }

void casa_report_counts(const casa_report* report, size_t* tp, size_t* fn, size_t* fp) {
  if (!report) return;
  if (tp) *tp = report->report.counts.tp;
  if (fn) *fn = report->report.counts.fn;
  if (fp) *fp = report->report.counts.fp;
}

size_t casa_report_source_count(const casa_report* report) { return report ? report->report.per_source.size() : 0; }

casa_status casa_report_source(const casa_report* report, size_t index, casa_source_record* out) {
  if (!report) return null_argument("report");
  if (!out) return null_argument("out");
  if (index >= report->report.per_source.size()) return fail(CASA_ERROR_PARAMETER, "source index out of range");
  const auto& s = report->report.per_source[index];
  out->reference_index = s.reference_index ? static_cast<long>(*s.reference_index) : -1;
  out->reference_label = s.reference_label ? report->reference_labels[index].c_str() : nullptr;
  out->estimate_index = s.estimate_index ? static_cast<long>(*s.estimate_index) : -1;
  out->estimate_label = s.estimate_label ? report->estimate_labels[index].c_str() : nullptr;
  out->tag = static_cast<casa_tag>(s.tag);
  out->has_raw_sdr = s.raw_sdr_db.has_value();
  out->raw_sdr_db = s.raw_sdr_db.value_or(NAN);
  out->penalty_db = s.penalty_db;
  out->contribution_db = s.contribution_db;
  g_last_error.clear();
  return CASA_OK;
}

size_t casa_report_pair_count(const casa_report* report) {
  return report && report->report.assignment ? report->report.assignment->pairs.size() : 0;
}

casa_status casa_report_pair(const casa_report* report, size_t index, size_t* estimate, size_t* reference) {
  if (!report) return null_argument("report");
  if (index >= casa_report_pair_count(report)) return fail(CASA_ERROR_PARAMETER, "pair index out of range");
  const auto& p = report->report.assignment->pairs[index];
  if (estimate) *estimate = p.estimate;
  if (reference) *reference = p.reference;
  g_last_error.clear();
  return CASA_OK;
}

casa_status casa_report_write(const casa_report* report, const char* path) {
  if (!report) return null_argument("report");
  if (!path) return null_argument("path");
  return guarded([&] {
    std::ofstream out(path);
    if (!out) throw casa::IoError(std::string("cannot write report '") + path + "'");
    casa::write_report(report->report, out);
    if (!out) throw casa::IoError(std::string("short write to '") + path + "'");
  });
}

void casa_report_destroy(casa_report* report) { delete report; }

void casa_study_params_init(casa_study_params* params) {
  if (!params) return;
  const casa::StudyOptions defaults;
  params->name = "classification";
  params->seed = 42;
  params->snrs_db = nullptr;
  params->n_snrs = 0;
  params->alphas = nullptr;
  params->n_alphas = 0;
  params->n_scenes = defaults.n_scenes;
  params->n_targets = defaults.scene.n_targets;
  params->n_interferences = defaults.scene.n_interferences;
  params->duration_s = defaults.scene.duration_s;
  params->sample_rate = defaults.scene.sample_rate;
  params->sdr_cap_db = defaults.sdr_cap_db;
}

casa_status casa_study_run(const casa_study_params* params, casa_sweep** out) {
  if (!params) return null_argument("params");
  if (!params->name) return null_argument("params->name");
  if (!out) return null_argument("out");
  return guarded([&] {
    casa::StudyOptions options;
    options.n_scenes = params->n_scenes;
    options.scene.n_targets = params->n_targets;
    options.scene.n_interferences = params->n_interferences;
    options.scene.duration_s = params->duration_s;
    options.scene.sample_rate = params->sample_rate;
    options.sdr_cap_db = params->sdr_cap_db;
    const casa::Seed seed{params->seed};
    const std::string name = params->name;
    std::vector<double> snrs;
    if (params->snrs_db) snrs.assign(params->snrs_db, params->snrs_db + params->n_snrs);

    casa::SweepResult result;
    if (name == "classification") {
      result = casa::run_classification_study(seed, snrs.empty() ? 10.0 : snrs.front(), options);
    } else if (name == "contamination") {
      std::vector<double> alphas = casa::default_alpha_grid();
      if (params->alphas) alphas.assign(params->alphas, params->alphas + params->n_alphas);
      result = casa::run_contamination_sweep(seed, alphas, options);
    } else if (name == "penalties") {
      result = casa::run_penalty_study(seed, snrs.empty() ? std::vector<double>{6.0, 30.0} : snrs, options);
    } else {
      throw casa::ParameterError("unknown study '" + name + "' (expected classification, contamination or penalties)");
    }
    auto* sweep = new casa_sweep{std::move(result), {}};
    sweep->summary = casa::summarize(sweep->result);
    *out = sweep;
  });
}

size_t casa_sweep_row_count(const casa_sweep* sweep) { return sweep ? sweep->result.rows.size() : 0; }

casa_status casa_sweep_write_csv(const casa_sweep* sweep, const char* path) {
  if (!sweep) return null_argument("sweep");
  if (!path) return null_argument("path");
  return guarded([&] {
    std::ofstream out(path);
    if (!out) throw casa::IoError(std::string("cannot write CSV '") + path + "'");
    casa::write_csv(sweep->result, out);
    if (!out) throw casa::IoError(std::string("short write to '") + path + "'");
  });
}

const char* casa_sweep_summary(const casa_sweep* sweep) { return sweep ? sweep->summary.c_str() : ""; }
void casa_sweep_destroy(casa_sweep* sweep) { delete sweep; }

void casa_scene_export_params_init(casa_scene_export_params* params) {
  if (!params) return;
  params->seed = 42;
  params->n_targets = 3;
  params->n_interferences = 2;
  params->duration_s = 10.0;
  params->sample_rate = 16000;
  params->snr_db = 10.0;
  params->error = "none";
  params->float32 = 1;
}

casa_status casa_export_scene(const casa_scene_export_params* params, const char* directory) {
  if (!params) return null_argument("params");
  if (!directory) return null_argument("directory");
  return guarded([&] {
    namespace fs = std::filesystem;
    casa::SceneParams sp;
    sp.n_targets = params->n_targets;
    sp.n_interferences = params->n_interferences;
    sp.duration_s = params->duration_s;
    sp.sample_rate = params->sample_rate;
    const casa::Seed seed{params->seed};
    const auto scene = casa::make_scene(sp, seed);
    auto predictions = casa::oracle_predictions(scene, params->snr_db, casa::derive_seed(seed, 1000));

    const std::string error = params->error ? params->error : "none";
    if (error != "none") {
      const auto kind = casa::parse_error_kind(error);
      for (const auto& e : casa::standard_error_types())
        if (e.kind == kind) predictions = casa::inject_error(std::move(predictions), e);
    }

    const fs::path dir(directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw casa::IoError("cannot create directory '" + dir.string() + "': " + ec.message());
    const auto encoding = params->float32 ? casa::WavEncoding::Float32 : casa::WavEncoding::Pcm16;

    casa::EvaluationManifest manifest;
    manifest.mixture = "mixture.wav";
    casa::save_audio(dir / "mixture.wav", scene.mixture, encoding);
    for (std::size_t i = 0; i < scene.targets.size(); ++i) {
      const std::string ref = "reference_" + std::to_string(i + 1) + ".wav";
      const std::string est = "prediction_" + std::to_string(i + 1) + ".wav";
      casa::save_audio(dir / ref, scene.targets[i].signal, encoding);
      casa::save_audio(dir / est, predictions[i].signal, encoding);
      manifest.references.push_back({ref, scene.targets[i].label});
      manifest.predictions.push_back({est, predictions[i].label});
    }
    std::ofstream out(dir / "manifest.txt");
    if (!out) throw casa::IoError("cannot write manifest in '" + dir.string() + "'");
    out << "# synthetic scene, seed " << params->seed << ", oracle predictions at " << params->snr_db
        << " dB SNR, labelling error: " << error << '\n'
        << casa::format_manifest(manifest);
  });
}

}  // extern "C"
