#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "casa/signal.hpp"

namespace casa {

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(const Seed&, const Seed&) = default;
};

// Child seed for stream `index` of `parent`; independent of evaluation order.
Seed derive_seed(Seed parent, std::uint64_t index);

// Level step between consecutive target sources, in dB. Interferences sit
// half a step below the target of the same rank.
inline constexpr double kTargetLevelStepDb = 12.0;

// Class names handed out to targets, in order.
const std::vector<std::string>& class_vocabulary();

// Default out-of-scene class used for substitution errors.
inline constexpr const char* kSubstituteClass = "telephone";

struct SceneParams {
  std::size_t n_targets = 3;
  std::size_t n_interferences = 2;
  double duration_s = 10.0;
  std::uint32_t sample_rate = 16000;
};

// Band-limited seeded noise, one band and one level per source.
Scene make_scene(const SceneParams& params, Seed seed);

// Gaussian white noise with |noise|^2 == |reference|^2 / 10^(snr_db / 10).
std::vector<double> scaled_white_noise(const AudioSignal& reference, double snr_db, Seed seed);

// u_i + n_i at exactly `noise_snr_db` per source; labels copied.
std::vector<LabeledSource> oracle_predictions(const Scene& scene, double noise_snr_db, Seed seed);

struct ErrorType {
  enum class Kind { Deletion, Substitution, Swapping };
  Kind kind = Kind::Deletion;
  std::size_t index = 1;        // Deletion / Substitution slot, or first swap slot
  std::size_t other_index = 0;  // second swap slot
  std::string substitute = kSubstituteClass;

  static ErrorType deletion(std::size_t slot);
  static ErrorType substitution(std::size_t slot, std::string cls = kSubstituteClass);
  static ErrorType swapping(std::size_t a, std::size_t b);
};

std::string to_string(ErrorType::Kind kind);
ErrorType::Kind parse_error_kind(const std::string& text);

// Relabels predictions; signals are untouched. `scene_labels` are the
// reference labels the substitute class must avoid.
std::vector<LabeledSource> inject_error(std::vector<LabeledSource> predictions, const ErrorType& error,
                                        const std::vector<ClassLabel>& scene_labels);

// Uses the prediction labels themselves as the scene labels.
std::vector<LabeledSource> inject_error(std::vector<LabeledSource> predictions, const ErrorType& error);

struct ContaminationSpec {
  double alpha = 0.0;
  std::size_t first = 0;
  std::size_t second = 1;
  double noise_snr_db = 60.0;
};

// Blends the chosen pair: u_i' = (1-a) u_i + a u_j + e_i and symmetrically.
// Every other source is its reference plus e. Labels stay correct.
std::vector<LabeledSource> cross_contaminate(const std::vector<LabeledSource>& references,
                                             const ContaminationSpec& spec, Seed seed);

}  // namespace casa
