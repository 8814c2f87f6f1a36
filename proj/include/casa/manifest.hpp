#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "casa/metrics.hpp"

namespace casa {

struct ManifestEntry {
  std::filesystem::path path;
  ClassLabel label = ClassLabel::none();
};

// Line-oriented `key = value` evaluation request. See README for the schema.
struct EvaluationManifest {
  std::vector<ManifestEntry> references;
  std::vector<ManifestEntry> predictions;
  std::optional<std::filesystem::path> mixture;
  std::optional<unsigned> channel;
  MetricConfig config;
};

// Relative paths are resolved against `base_dir`. Throws FormatError naming
// the offending line and field.
EvaluationManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir);
EvaluationManifest load_manifest(const std::filesystem::path& path);
std::string format_manifest(const EvaluationManifest& manifest);

// Loads every file, checks rates and lengths, and evaluates.
MetricReport evaluate_manifest(const EvaluationManifest& manifest);

// Key/value report text; doubles are written round-trip exact.
void write_report(const MetricReport& report, std::ostream& out);
MetricReport read_report(const std::string& text);

}  // namespace casa
