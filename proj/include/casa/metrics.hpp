#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "casa/assignment.hpp"
#include "casa/signal.hpp"

namespace casa {

// Returned by sdr() when the estimate reproduces the reference exactly, and
// the upper clamp for every SDR value.
inline constexpr double kDefaultSdrCapDb = 100.0;

// 10 log10(|s|^2 / |s_hat - s|^2), clamped to `cap_db`.
double sdr(const AudioSignal& estimate, const AudioSignal& reference,
           double cap_db = kDefaultSdrCapDb);

enum class ClassificationTag { TP, FN, FP, FNPlusFP };

constexpr int error_count(ClassificationTag tag) {
  switch (tag) {
    case ClassificationTag::TP: return 0;
    case ClassificationTag::FN: return 1;
    case ClassificationTag::FP: return 1;
    case ClassificationTag::FNPlusFP: return 2;
  }
  return 0;
}

std::string_view to_string(ClassificationTag tag);
ClassificationTag parse_tag(std::string_view text);

// One aligned slot. A missing side means the slot is unmatched.
struct AlignedLabels {
  std::optional<ClassLabel> reference;
  std::optional<ClassLabel> predicted;
};

// nullopt for a slot that asserts nothing about anything: an unmatched
// prediction carrying the None-label.
std::optional<ClassificationTag> classify_error(const AlignedLabels& slot);
std::vector<std::optional<ClassificationTag>> classify_errors(const std::vector<AlignedLabels>& aligned);

enum class Variant { Classical, CA, CASA };
enum class Penalty { None, InputLevel, OutputLevel };
enum class Application { NonTP, ErrorBased };

std::string_view to_string(Variant v);
std::string_view to_string(Penalty p);
std::string_view to_string(Application a);
Variant parse_variant(std::string_view text);
Penalty parse_penalty(std::string_view text);
Application parse_application(std::string_view text);

struct MetricConfig {
  Variant variant = Variant::CASA;
  Penalty penalty = Penalty::None;
  Application application = Application::NonTP;
  double sdr_cap_db = kDefaultSdrCapDb;

  // Throws ConfigError when a penalty is requested for a non-CASA variant.
  void validate() const;
};

// max(sdr(mixture, reference), 0)
double input_level_penalty(const AudioSignal& mixture, const AudioSignal& reference,
                           double cap_db = kDefaultSdrCapDb);

// sdr(matched_estimate, reference). Not clamped at zero.
double output_level_penalty(const AudioSignal& reference, const AudioSignal& matched_estimate,
                            double cap_db = kDefaultSdrCapDb);

struct PenaltyInput {
  ClassificationTag tag;
  double raw_sdr_db;         // ignored unless tag == TP
  double penalty_magnitude;  // ignored for TP
};

// Per-source contributions in dB. With Penalty::None every non-TP slot is 0.
std::vector<double> apply_penalties(const std::vector<PenaltyInput>& sources, Penalty penalty,
                                    Application application);

struct SourceRecord {
  std::optional<std::size_t> reference_index;
  std::optional<ClassLabel> reference_label;
  std::optional<std::size_t> estimate_index;
  std::optional<ClassLabel> estimate_label;
  std::optional<double> raw_sdr_db;
  ClassificationTag tag = ClassificationTag::TP;
  double penalty_db = 0.0;  // magnitude before sign and error multiplicity
  double contribution_db = 0.0;
};

struct Counts {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  friend bool operator==(const Counts&, const Counts&) = default;
};

struct MetricReport {
  MetricConfig config;
  double final_db = 0.0;
  std::size_t denominator = 0;
  std::vector<SourceRecord> per_source;
  std::optional<Assignment> assignment;
  Counts counts;
};

// Sum of contributions in record order divided by the denominator. Every
// metric computes final_db through this function.
double mean_contribution(const std::vector<SourceRecord>& records, std::size_t denominator);

Counts count_tags(const std::vector<SourceRecord>& records);

MetricReport classical_sdr(const std::vector<AudioSignal>& estimates,
                           const std::vector<AudioSignal>& references,
                           double cap_db = kDefaultSdrCapDb);

// Same score; labels are copied into the records but never consulted.
MetricReport classical_sdr(const std::vector<LabeledSource>& predictions,
                           const std::vector<LabeledSource>& references,
                           double cap_db = kDefaultSdrCapDb);

MetricReport ca_sdr(const std::vector<LabeledSource>& predictions,
                    const std::vector<LabeledSource>& references,
                    double cap_db = kDefaultSdrCapDb);

MetricReport casa_sdr(const std::vector<LabeledSource>& predictions,
                      const std::vector<LabeledSource>& references,
                      const AudioSignal* mixture, const MetricConfig& config);

// Dispatches on config.variant.
MetricReport evaluate(const std::vector<LabeledSource>& predictions,
                      const std::vector<LabeledSource>& references,
                      const AudioSignal* mixture, const MetricConfig& config);

}  // namespace casa
