#include "casa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "casa/error.hpp"

namespace casa {

double sdr(const AudioSignal& estimate, const AudioSignal& reference, double cap_db) {
  if (!std::isfinite(cap_db)) throw ParameterError("SDR cap must be finite");
  require_compatible(estimate, reference);
  const auto s = reference.samples();
  const auto e = estimate.samples();
  double ref_energy = 0.0, err_energy = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = e[i] - s[i];
    ref_energy += s[i] * s[i];
    err_energy += d * d;
  }
  if (ref_energy == 0.0) throw DomainError("SDR is undefined for a zero-energy reference");
  if (err_energy == 0.0) return cap_db;
  return std::min(10.0 * std::log10(ref_energy / err_energy), cap_db);
}

std::string_view to_string(ClassificationTag tag) {
  switch (tag) {
    case ClassificationTag::TP: return "TP";
    case ClassificationTag::FN: return "FN";
    case ClassificationTag::FP: return "FP";
    case ClassificationTag::FNPlusFP: return "FN+FP";
  }
  return "?";
}

ClassificationTag parse_tag(std::string_view text) {
  if (text == "TP") return ClassificationTag::TP;
  if (text == "FN") return ClassificationTag::FN;
  if (text == "FP") return ClassificationTag::FP;
  if (text == "FN+FP") return ClassificationTag::FNPlusFP;
  throw FormatError("unknown classification tag '" + std::string(text) + "'");
}

std::optional<ClassificationTag> classify_error(const AlignedLabels& slot) {
  if (slot.reference && slot.reference->is_none())
    throw ParameterError("reference labels must be named classes");
  if (!slot.reference && !slot.predicted) throw ParameterError("aligned slot has neither side");
  if (!slot.predicted) return ClassificationTag::FN;
  if (!slot.reference) {
    if (slot.predicted->is_none()) return std::nullopt;
    return ClassificationTag::FP;
  }
  if (slot.predicted->is_none()) return ClassificationTag::FN;
  if (*slot.predicted == *slot.reference) return ClassificationTag::TP;
  return ClassificationTag::FNPlusFP;
}

std::vector<std::optional<ClassificationTag>> classify_errors(const std::vector<AlignedLabels>& aligned) {
  std::vector<std::optional<ClassificationTag>> out;
  out.reserve(aligned.size());
  for (const auto& slot : aligned) out.push_back(classify_error(slot));
  return out;
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Classical: return "classical";
    case Variant::CA: return "ca";
    case Variant::CASA: return "casa";
  }
  return "?";
}

std::string_view to_string(Penalty p) {
  switch (p) {
    case Penalty::None: return "none";
    case Penalty::InputLevel: return "input";
    case Penalty::OutputLevel: return "output";
  }
  return "?";
}

std::string_view to_string(Application a) {
  switch (a) {
    case Application::NonTP: return "non-tp";
    case Application::ErrorBased: return "error-based";
  }
  return "?";
}

Variant parse_variant(std::string_view text) {
  if (text == "classical") return Variant::Classical;
  if (text == "ca") return Variant::CA;
  if (text == "casa") return Variant::CASA;
  throw FormatError("unknown metric variant '" + std::string(text) + "' (expected classical, ca or casa)");
}

Penalty parse_penalty(std::string_view text) {
  if (text == "none") return Penalty::None;
  if (text == "input" || text == "ip") return Penalty::InputLevel;
  if (text == "output" || text == "op") return Penalty::OutputLevel;
  throw FormatError("unknown penalty '" + std::string(text) + "' (expected none, input or output)");
}

Application parse_application(std::string_view text) {
  if (text == "non-tp") return Application::NonTP;
  if (text == "error-based" || text == "eb") return Application::ErrorBased;
  throw FormatError("unknown penalty application '" + std::string(text) + "' (expected non-tp or error-based)");
}

void MetricConfig::validate() const {
  if (penalty != Penalty::None && variant != Variant::CASA)
    throw ConfigError("penalties are only defined for the casa variant");
  if (!std::isfinite(sdr_cap_db)) throw ConfigError("sdr_cap_db must be finite");
}

double input_level_penalty(const AudioSignal& mixture, const AudioSignal& reference, double cap_db) {
  return std::max(sdr(mixture, reference, cap_db), 0.0);
}

double output_level_penalty(const AudioSignal& reference, const AudioSignal& matched_estimate, double cap_db) {
  return sdr(matched_estimate, reference, cap_db);
}

std::vector<double> apply_penalties(const std::vector<PenaltyInput>& sources, Penalty penalty,
                                    Application application) {
  std::vector<double> out;
  out.reserve(sources.size());
  for (const auto& s : sources) {
    if (s.tag == ClassificationTag::TP) {
      out.push_back(s.raw_sdr_db);
    } else if (penalty == Penalty::None) {
      out.push_back(0.0);
    } else {
      const double multiplicity = application == Application::ErrorBased ? error_count(s.tag) : 1.0;
      out.push_back(-(multiplicity * s.penalty_magnitude));
    }
  }
  return out;
}

double mean_contribution(const std::vector<SourceRecord>& records, std::size_t denominator) {
  if (denominator == 0) throw DimensionError("metric denominator is zero");
  double sum = 0.0;
  for (const auto& r : records) sum += r.contribution_db;
  return sum / static_cast<double>(denominator);
}

Counts count_tags(const std::vector<SourceRecord>& records) {
  Counts c;
  for (const auto& r : records) {
    switch (r.tag) {
      case ClassificationTag::TP: ++c.tp; break;
      case ClassificationTag::FN: ++c.fn; break;
      case ClassificationTag::FP: ++c.fp; break;
      case ClassificationTag::FNPlusFP: ++c.fn; ++c.fp; break;
    }
  }
  return c;
}

namespace {

void require_named_references(const std::vector<LabeledSource>& references) {
  if (references.empty()) throw DimensionError("at least one reference is required");
  for (std::size_t i = 0; i < references.size(); ++i)
    if (references[i].label.is_none())
      throw ParameterError("reference " + std::to_string(i) + " carries the None-label");
}

void finalize(MetricReport& report) {
  report.counts = count_tags(report.per_source);
  report.final_db = mean_contribution(report.per_source, report.denominator);
}

}  // namespace

MetricReport classical_sdr(const std::vector<AudioSignal>& estimates, const std::vector<AudioSignal>& references,
                           double cap_db) {
  if (estimates.size() != references.size())
    throw DimensionError("classical SDR needs as many estimates (" + std::to_string(estimates.size()) +
                         ") as references (" + std::to_string(references.size()) + ")");
  MetricReport report;
  report.config.variant = Variant::Classical;
  report.config.sdr_cap_db = cap_db;
  report.assignment = best_assignment(estimates, references, cap_db);
  for (const auto& p : report.assignment->pairs) {
    SourceRecord rec;
    rec.reference_index = p.reference;
    rec.estimate_index = p.estimate;
    rec.raw_sdr_db = report.assignment->sdr_matrix.at(p.reference, p.estimate);
    rec.contribution_db = *rec.raw_sdr_db;
    report.per_source.push_back(rec);
  }
  report.denominator = references.size();
  finalize(report);
  return report;
}

MetricReport classical_sdr(const std::vector<LabeledSource>& predictions,
                           const std::vector<LabeledSource>& references, double cap_db) {
  auto report = classical_sdr(signals_of(predictions), signals_of(references), cap_db);
  for (auto& rec : report.per_source) {
    rec.reference_label = references[*rec.reference_index].label;
    rec.estimate_label = predictions[*rec.estimate_index].label;
  }
  return report;
}

MetricReport ca_sdr(const std::vector<LabeledSource>& predictions, const std::vector<LabeledSource>& references,
                    double cap_db) {
  require_named_references(references);
  for (const auto& p : predictions) require_compatible(p.signal, references.front().signal);
  for (const auto& r : references) require_compatible(r.signal, references.front().signal);

  // Label equality decides the pairing. Within one class, duplicated claims
  // go to the highest-SDR matching; the leftovers become FPs.
  std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
  for (std::size_t r = 0; r < references.size(); ++r) groups[references[r].label.name()].first.push_back(r);
  for (std::size_t e = 0; e < predictions.size(); ++e)
    if (!predictions[e].label.is_none()) groups[predictions[e].label.name()].second.push_back(e);

  std::vector<std::optional<std::size_t>> ref_to_est(references.size());
  std::vector<std::optional<double>> ref_sdr(references.size());
  std::vector<bool> est_matched(predictions.size(), false);
  for (const auto& [name, members] : groups) {
    const auto& [refs, ests] = members;
    if (refs.empty() || ests.empty()) continue;
    SdrMatrix sub(refs.size(), ests.size());
    for (std::size_t i = 0; i < refs.size(); ++i)
      for (std::size_t j = 0; j < ests.size(); ++j)
        sub.at(i, j) = sdr(predictions[ests[j]].signal, references[refs[i]].signal, cap_db);
    const auto local = best_assignment(std::move(sub));
    for (const auto& p : local.pairs) {
      ref_to_est[refs[p.reference]] = ests[p.estimate];
      ref_sdr[refs[p.reference]] = local.sdr_matrix.at(p.reference, p.estimate);
      est_matched[ests[p.estimate]] = true;
    }
  }

  MetricReport report;
  report.config.variant = Variant::CA;
  report.config.sdr_cap_db = cap_db;
  for (std::size_t r = 0; r < references.size(); ++r) {
    SourceRecord rec;
    rec.reference_index = r;
    rec.reference_label = references[r].label;
    if (ref_to_est[r]) {
      rec.estimate_index = ref_to_est[r];
      rec.estimate_label = predictions[*ref_to_est[r]].label;
      rec.raw_sdr_db = ref_sdr[r];
      rec.tag = ClassificationTag::TP;
      rec.contribution_db = *ref_sdr[r];
    } else {
      rec.tag = ClassificationTag::FN;
    }
    report.per_source.push_back(rec);
  }
  for (std::size_t e = 0; e < predictions.size(); ++e) {
    if (est_matched[e] || predictions[e].label.is_none()) continue;
    SourceRecord rec;
    rec.estimate_index = e;
    rec.estimate_label = predictions[e].label;
    rec.tag = ClassificationTag::FP;
    report.per_source.push_back(rec);
  }
  report.denominator = std::max(references.size(), predictions.size());
  finalize(report);
  return report;
}

MetricReport casa_sdr(const std::vector<LabeledSource>& predictions, const std::vector<LabeledSource>& references,
                      const AudioSignal* mixture, const MetricConfig& config) {
  config.validate();
  require_named_references(references);
  if (config.penalty == Penalty::InputLevel && mixture == nullptr)
    throw ConfigError("the input-level penalty needs the mixture signal");
  if (mixture) require_compatible(*mixture, references.front().signal);
  const double cap = config.sdr_cap_db;

  MetricReport report;
  report.config = config;
  report.config.variant = Variant::CASA;

  std::optional<Assignment> assignment;
  if (!predictions.empty()) assignment = best_assignment(signals_of(predictions), signals_of(references), cap);

  std::vector<PenaltyInput> inputs;
  for (std::size_t r = 0; r < references.size(); ++r) {
    SourceRecord rec;
    rec.reference_index = r;
    rec.reference_label = references[r].label;
    const auto est = assignment ? assignment->estimate_for(r) : std::nullopt;
    if (est) {
      rec.estimate_index = est;
      rec.estimate_label = predictions[*est].label;
      rec.raw_sdr_db = assignment->sdr_matrix.at(r, *est);
    }
    rec.tag = *classify_error({references[r].label, rec.estimate_label});
    if (rec.tag != ClassificationTag::TP) {
      if (config.penalty == Penalty::InputLevel)
        rec.penalty_db = input_level_penalty(*mixture, references[r].signal, cap);
      else if (config.penalty == Penalty::OutputLevel && rec.raw_sdr_db)
        rec.penalty_db = *rec.raw_sdr_db;  // OP is the matched pair's own SDR
    }
    inputs.push_back({rec.tag, rec.raw_sdr_db.value_or(0.0), rec.penalty_db});
    report.per_source.push_back(rec);
  }
  for (std::size_t e = 0; e < predictions.size(); ++e) {
    if ((assignment && assignment->reference_for(e)) || predictions[e].label.is_none()) continue;
    // An unmatched claim has no reference, so neither penalty is defined for it.
    SourceRecord rec;
    rec.estimate_index = e;
    rec.estimate_label = predictions[e].label;
    rec.tag = ClassificationTag::FP;
    inputs.push_back({rec.tag, 0.0, 0.0});
    report.per_source.push_back(rec);
  }

  const auto contributions = apply_penalties(inputs, config.penalty, config.application);
  for (std::size_t i = 0; i < contributions.size(); ++i) report.per_source[i].contribution_db = contributions[i];

  report.assignment = std::move(assignment);
  report.denominator = std::max(references.size(), predictions.size());
  finalize(report);
  return report;
}

MetricReport evaluate(const std::vector<LabeledSource>& predictions, const std::vector<LabeledSource>& references,
                      const AudioSignal* mixture, const MetricConfig& config) {
  config.validate();
  MetricReport report;
  switch (config.variant) {
    case Variant::Classical: report = classical_sdr(predictions, references, config.sdr_cap_db); break;
    case Variant::CA: report = ca_sdr(predictions, references, config.sdr_cap_db); break;
    case Variant::CASA: return casa_sdr(predictions, references, mixture, config);
  }
  report.config = config;
  return report;
}

}  // namespace casa
