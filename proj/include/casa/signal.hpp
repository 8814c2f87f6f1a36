#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace casa {

// Mono sample buffer. Always non-empty, finite, with a positive sample rate.
class AudioSignal {
 public:
  AudioSignal(std::vector<double> samples, std::uint32_t sample_rate);

  std::span<const double> samples() const { return samples_; }
  std::uint32_t sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }

  double energy() const;

  friend bool operator==(const AudioSignal&, const AudioSignal&) = default;

 private:
  std::vector<double> samples_;
  std::uint32_t sample_rate_;
};

// Throws DimensionError unless both signals share length and sample rate.
void require_compatible(const AudioSignal& a, const AudioSignal& b);

// A sound-event class name, or the distinguished "none" prediction.
class ClassLabel {
 public:
  static ClassLabel none() { return ClassLabel{}; }
  static ClassLabel named(std::string name);

  // "none" (any case) maps to the None-label; everything else is a class name.
  static ClassLabel parse(const std::string& text);

  bool is_none() const { return !name_.has_value(); }
  const std::string& name() const;
  std::string to_string() const { return name_.value_or("none"); }

  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;

 private:
  ClassLabel() = default;
  std::optional<std::string> name_;
};

struct LabeledSource {
  AudioSignal signal;
  ClassLabel label;
};

// Reference targets, interferences and their sample-wise sum.
struct Scene {
  std::vector<LabeledSource> targets;
  std::vector<AudioSignal> interferences;
  AudioSignal mixture;
};

// Validates the Scene invariants; throws on violation.
void validate_scene(const Scene& scene);

std::vector<AudioSignal> signals_of(const std::vector<LabeledSource>& sources);

}  // namespace casa
