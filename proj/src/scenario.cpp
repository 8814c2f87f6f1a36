#include "casa/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "casa/error.hpp"

namespace casa {

Seed derive_seed(Seed parent, std::uint64_t index) {
  // splitmix64 finalizer over the combined state
  std::uint64_t z = parent.value ^ ((index + 1) * 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return Seed{z ^ (z >> 31)};
}

const std::vector<std::string>& class_vocabulary() {
  static const std::vector<std::string> vocab = {
      "cough",    "dishes",   "pour",      "keyboard", "door_knock", "footsteps",
      "speech",   "dog_bark", "alarm",     "water_tap", "laughter",  "clapping",
  };
  return vocab;
}

namespace {

constexpr double kReferenceLevelDb = -20.0;  // RMS of the loudest target, dBFS
constexpr double kLowestBandHz = 80.0;

std::vector<double> gaussian_noise(std::size_t n, Seed seed) {
  std::mt19937_64 rng(seed.value);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = dist(rng);
  return out;
}

// RBJ band-pass biquad (0 dB peak), applied in place.
void bandpass(std::vector<double>& x, double center_hz, double q, double sample_rate) {
  const double w0 = 2.0 * std::numbers::pi * center_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  const double b0 = alpha / a0, b2 = -alpha / a0;
  const double a1 = -2.0 * std::cos(w0) / a0, a2 = (1.0 - alpha) / a0;
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  for (auto& s : x) {
    const double y = b0 * s + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = s;
    y2 = y1;
    y1 = y;
    s = y;
  }
}

void scale_to_rms_db(std::vector<double>& x, double level_db) {
  double e = 0.0;
  for (double s : x) e += s * s;
  const double rms = std::sqrt(e / static_cast<double>(x.size()));
  const double gain = std::pow(10.0, level_db / 20.0) / rms;
  for (auto& s : x) s *= gain;
}

}  // namespace

Scene make_scene(const SceneParams& params, Seed seed) {
  if (params.n_targets == 0) throw ParameterError("a scene needs at least one target");
  if (params.n_targets > class_vocabulary().size())
    throw ParameterError("at most " + std::to_string(class_vocabulary().size()) + " targets are supported");
  if (!(params.duration_s > 0.0) || !std::isfinite(params.duration_s))
    throw ParameterError("scene duration must be positive");
  if (params.sample_rate == 0) throw ParameterError("sample rate must be positive");
  const auto length = static_cast<std::size_t>(std::llround(params.duration_s * params.sample_rate));
  if (length == 0) throw ParameterError("scene duration is shorter than one sample");

  const std::size_t m = params.n_targets + params.n_interferences;
  const double nyquist_margin = 0.45 * params.sample_rate;
  const double ratio = std::pow(nyquist_margin / kLowestBandHz, 1.0 / static_cast<double>(m));

  std::vector<std::vector<double>> sources;
  for (std::size_t k = 0; k < m; ++k) {
    const double lo = kLowestBandHz * std::pow(ratio, static_cast<double>(k));
    const double hi = lo * ratio;
    const double center = std::sqrt(lo * hi);
    const double q = center / (hi - lo);
    auto x = gaussian_noise(length, derive_seed(seed, k));
    bandpass(x, center, q, params.sample_rate);
    bandpass(x, center, q, params.sample_rate);
    const bool target = k < params.n_targets;
    const double rank = static_cast<double>(target ? k : k - params.n_targets);
    const double level = kReferenceLevelDb - kTargetLevelStepDb * rank - (target ? 0.0 : kTargetLevelStepDb / 2);
    scale_to_rms_db(x, level);
    sources.push_back(std::move(x));
  }

  std::vector<double> mix(length, 0.0);
  for (const auto& s : sources)
    for (std::size_t i = 0; i < length; ++i) mix[i] += s[i];

  Scene scene{{}, {}, AudioSignal(std::move(mix), params.sample_rate)};
  for (std::size_t k = 0; k < m; ++k) {
    AudioSignal sig(std::move(sources[k]), params.sample_rate);
    if (k < params.n_targets)
      scene.targets.push_back({std::move(sig), ClassLabel::named(class_vocabulary()[k])});
    else
      scene.interferences.push_back(std::move(sig));
  }
  return scene;
}

std::vector<double> scaled_white_noise(const AudioSignal& reference, double snr_db, Seed seed) {
  if (!std::isfinite(snr_db)) throw ParameterError("noise SNR must be finite");
  auto noise = gaussian_noise(reference.size(), seed);
  double e = 0.0;
  for (double s : noise) e += s * s;
  const double target = reference.energy() / std::pow(10.0, snr_db / 10.0);
  const double gain = std::sqrt(target / e);
  for (auto& s : noise) s *= gain;
  return noise;
}

std::vector<LabeledSource> oracle_predictions(const Scene& scene, double noise_snr_db, Seed seed) {
  std::vector<LabeledSource> out;
  for (std::size_t i = 0; i < scene.targets.size(); ++i) {
    const auto& ref = scene.targets[i];
    auto noise = scaled_white_noise(ref.signal, noise_snr_db, derive_seed(seed, i));
    const auto u = ref.signal.samples();
    for (std::size_t k = 0; k < noise.size(); ++k) noise[k] += u[k];
    out.push_back({AudioSignal(std::move(noise), ref.signal.sample_rate()), ref.label});
  }
  return out;
}

ErrorType ErrorType::deletion(std::size_t slot) {
  ErrorType e;
  e.kind = Kind::Deletion;
  e.index = slot;
  return e;
}

ErrorType ErrorType::substitution(std::size_t slot, std::string cls) {
  ErrorType e;
  e.kind = Kind::Substitution;
  e.index = slot;
  e.substitute = std::move(cls);
  return e;
}

ErrorType ErrorType::swapping(std::size_t a, std::size_t b) {
  ErrorType e;
  e.kind = Kind::Swapping;
  e.index = a;
  e.other_index = b;
  return e;
}

std::string to_string(ErrorType::Kind kind) {
  switch (kind) {
    case ErrorType::Kind::Deletion: return "deletion";
    case ErrorType::Kind::Substitution: return "substitution";
    case ErrorType::Kind::Swapping: return "swapping";
  }
  return "?";
}

ErrorType::Kind parse_error_kind(const std::string& text) {
  if (text == "deletion") return ErrorType::Kind::Deletion;
  if (text == "substitution") return ErrorType::Kind::Substitution;
  if (text == "swapping") return ErrorType::Kind::Swapping;
  throw ParameterError("unknown error type '" + text + "' (expected deletion, substitution or swapping)");
}

std::vector<LabeledSource> inject_error(std::vector<LabeledSource> predictions, const ErrorType& error,
                                        const std::vector<ClassLabel>& scene_labels) {
  const auto in_range = [&](std::size_t i) {
    if (i >= predictions.size())
      throw ParameterError("error slot " + std::to_string(i) + " out of range for " +
                           std::to_string(predictions.size()) + " predictions");
  };
  in_range(error.index);
  switch (error.kind) {
    case ErrorType::Kind::Deletion:
      predictions[error.index].label = ClassLabel::none();
      break;
    case ErrorType::Kind::Substitution: {
      const auto cls = ClassLabel::parse(error.substitute);
      if (cls.is_none()) throw ParameterError("substitute class must be a named class");
      if (std::find(scene_labels.begin(), scene_labels.end(), cls) != scene_labels.end())
        throw ParameterError("substitute class '" + error.substitute + "' is present in the scene");
      predictions[error.index].label = cls;
      break;
    }
    case ErrorType::Kind::Swapping:
      in_range(error.other_index);
      if (error.index == error.other_index) throw ParameterError("swap slots must be distinct");
      std::swap(predictions[error.index].label, predictions[error.other_index].label);
      break;
  }
  return predictions;
}

std::vector<LabeledSource> inject_error(std::vector<LabeledSource> predictions, const ErrorType& error) {
  std::vector<ClassLabel> labels;
  for (const auto& p : predictions) labels.push_back(p.label);
  return inject_error(std::move(predictions), error, labels);
}

std::vector<LabeledSource> cross_contaminate(const std::vector<LabeledSource>& references,
                                             const ContaminationSpec& spec, Seed seed) {
  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
  if (spec.first == spec.second) throw ParameterError("contamination pair must be two distinct sources");
  if (spec.first >= references.size() || spec.second >= references.size())
    throw ParameterError("contamination pair out of range");
  for (const auto& r : references) require_compatible(r.signal, references.front().signal);

  std::vector<LabeledSource> out;
  for (std::size_t i = 0; i < references.size(); ++i) {
    const auto& ref = references[i];
    auto samples = scaled_white_noise(ref.signal, spec.noise_snr_db, derive_seed(seed, i));
    const auto u = ref.signal.samples();
    if (i == spec.first || i == spec.second) {
      const auto v = references[i == spec.first ? spec.second : spec.first].signal.samples();
      for (std::size_t k = 0; k < samples.size(); ++k) samples[k] += (1.0 - spec.alpha) * u[k] + spec.alpha * v[k];
    } else {
      for (std::size_t k = 0; k < samples.size(); ++k) samples[k] += u[k];
    }
    out.push_back({AudioSignal(std::move(samples), ref.signal.sample_rate()), ref.label});
  }
  return out;
}

}  // namespace casa
