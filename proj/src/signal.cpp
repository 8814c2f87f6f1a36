#include "casa/signal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "casa/error.hpp"

namespace casa {

AudioSignal::AudioSignal(std::vector<double> samples, std::uint32_t sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) throw ParameterError("audio signal has no samples");
  if (sample_rate_ == 0) throw ParameterError("audio signal sample rate must be positive");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i]))
      throw ParameterError("audio signal sample " + std::to_string(i) + " is not finite");
  }
}

double AudioSignal::energy() const {
  double e = 0.0;
  for (double s : samples_) e += s * s;
  return e;
}

void require_compatible(const AudioSignal& a, const AudioSignal& b) {
  if (a.size() != b.size())
    throw DimensionError("signal length mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  if (a.sample_rate() != b.sample_rate())
    throw DimensionError("sample rate mismatch: " + std::to_string(a.sample_rate()) + " Hz vs " +
                         std::to_string(b.sample_rate()) + " Hz");
}

ClassLabel ClassLabel::named(std::string name) {
  if (name.empty()) throw ParameterError("class name must not be empty");
  ClassLabel label;
  label.name_ = std::move(name);
  return label;
}

ClassLabel ClassLabel::parse(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "none") return none();
  return named(text);
}

const std::string& ClassLabel::name() const {
  if (!name_) throw ParameterError("the None-label has no class name");
  return *name_;
}

void validate_scene(const Scene& scene) {
  if (scene.targets.empty()) throw ParameterError("scene needs at least one target");
  std::vector<double> sum(scene.mixture.size(), 0.0);
  auto accumulate = [&](const AudioSignal& s) {
    require_compatible(s, scene.mixture);
    auto x = s.samples();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += x[i];
  };
  for (const auto& t : scene.targets) {
    if (t.label.is_none()) throw ParameterError("reference targets must carry a class label");
    accumulate(t.signal);
  }
  for (const auto& s : scene.interferences) accumulate(s);

  auto mix = scene.mixture.samples();
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    diff += (mix[i] - sum[i]) * (mix[i] - sum[i]);
    ref += sum[i] * sum[i];
  }
  if (std::sqrt(diff) > 1e-9 * std::max(std::sqrt(ref), 1e-300))
    throw ParameterError("scene mixture is not the sum of its sources");
}

std::vector<AudioSignal> signals_of(const std::vector<LabeledSource>& sources) {
  std::vector<AudioSignal> out;
  out.reserve(sources.size());
  for (const auto& s : sources) out.push_back(s.signal);
  return out;
}

}  // namespace casa
