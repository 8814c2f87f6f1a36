// Command-line front end. Talks to the library exclusively through casa_sdr.h.
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "casa_sdr.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsageError = 2;

int report_failure(casa_status status) {
  std::fprintf(stderr, "error: %s: %s\n", casa_status_string(status), casa_last_error());
  return kExitDataError;
}

// Accepts "start:stop:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) || stop < start)
      throw CLI::ValidationError("--alphas", "expected start:stop:step with step > 0");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(std::round((start + i * step) * 1e12) / 1e12);
    return out;
  }
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--alphas", "'" + tok + "' is not a number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical SDR, CA-SDR and CASA-SDR evaluation for labelled source separation"};
  app.require_subcommand(1);

  std::optional<double> cap_db;
  app.add_option("--cap-db", cap_db, "SDR returned for an error-free estimate, and the upper clamp (dB)")
      ->check(CLI::Number);

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions listed in a manifest");
  std::string manifest_path, report_path;
  evaluate->add_option("--manifest", manifest_path, "Evaluation manifest")->required();
  evaluate->add_option("--out", report_path, "Report output path")->required();

  auto* study = app.add_subcommand("study", "Run a synthetic study and write CSV");
  std::string study_name, study_out, alpha_text;
  std::uint64_t seed = 42;
  std::vector<double> snrs;
  std::size_t scenes = 10, targets = 3, interferences = 2;
  double duration = 10.0;
  std::uint32_t rate = 16000;
  study->add_option("--name", study_name, "classification | contamination | penalties")
      ->required()
      ->check(CLI::IsMember({"classification", "contamination", "penalties"}));
  study->add_option("--seed", seed, "Master seed");
  study->add_option("--snr", snrs, "Oracle noise SNR(s) in dB (comma separated for penalties)")->delimiter(',');
  study->add_option("--alphas", alpha_text, "Contamination grid: start:stop:step or a list");
  study->add_option("--scenes", scenes, "Scenes averaged per point")->check(CLI::PositiveNumber);
  study->add_option("--targets", targets, "Target sources per scene")->check(CLI::PositiveNumber);
  study->add_option("--interferences", interferences, "Interfering sources per scene");
  study->add_option("--duration", duration, "Scene duration in seconds")->check(CLI::PositiveNumber);
  study->add_option("--rate", rate, "Sample rate in Hz")->check(CLI::PositiveNumber);
  study->add_option("--out", study_out, "CSV output path")->required();

  auto* make_scene = app.add_subcommand("make-scene", "Write a synthetic scene, its predictions and a manifest");
  casa_scene_export_params scene_params;
  casa_scene_export_params_init(&scene_params);
  std::string scene_dir, scene_error = "none";
  bool pcm16 = false;
  make_scene->add_option("--seed", scene_params.seed, "Scene seed");
  make_scene->add_option("--snr", scene_params.snr_db, "Oracle noise SNR in dB");
  make_scene->add_option("--error", scene_error, "Labelling error")
      ->check(CLI::IsMember({"none", "deletion", "substitution", "swapping"}));
  make_scene->add_option("--duration", scene_params.duration_s, "Duration in seconds")->check(CLI::PositiveNumber);
  make_scene->add_flag("--pcm16", pcm16, "Write 16-bit PCM instead of 32-bit float");
  make_scene->add_option("--out", scene_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsageError;
  }

  if (*evaluate) {
    casa_report* report = nullptr;
    const double cap = cap_db.value_or(0.0);
    casa_status st = casa_evaluate_manifest(manifest_path.c_str(), cap_db ? &cap : nullptr, &report);
    if (st != CASA_OK) return report_failure(st);
    st = casa_report_write(report, report_path.c_str());
    const double final_db = casa_report_final_db(report);
    casa_report_destroy(report);
    if (st != CASA_OK) return report_failure(st);
    std::printf("final_db = %.2f\n", final_db);
    return kExitOk;
  }

  if (*study) {
    std::vector<double> alphas;
    if (!alpha_text.empty()) {
      try {
        alphas = parse_grid(alpha_text);
      } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsageError;
      }
    }
    casa_study_params params;
    casa_study_params_init(&params);
    params.name = study_name.c_str();
    params.seed = seed;
    params.n_scenes = scenes;
    params.n_targets = targets;
    params.n_interferences = interferences;
    params.duration_s = duration;
    params.sample_rate = rate;
    if (cap_db) params.sdr_cap_db = *cap_db;
    if (!snrs.empty()) {
      params.snrs_db = snrs.data();
      params.n_snrs = snrs.size();
    }
    if (!alphas.empty()) {
      params.alphas = alphas.data();
      params.n_alphas = alphas.size();
    }
    casa_sweep* sweep = nullptr;
    casa_status st = casa_study_run(&params, &sweep);
    if (st != CASA_OK) return report_failure(st);
    st = casa_sweep_write_csv(sweep, study_out.c_str());
    if (st == CASA_OK) std::fputs(casa_sweep_summary(sweep), stdout);
    casa_sweep_destroy(sweep);
    return st == CASA_OK ? kExitOk : report_failure(st);
  }

  if (*make_scene) {
    scene_params.error = scene_error.c_str();
    scene_params.float32 = pcm16 ? 0 : 1;
    const casa_status st = casa_export_scene(&scene_params, scene_dir.c_str());
    if (st != CASA_OK) return report_failure(st);
    std::printf("wrote %s/manifest.txt\n", scene_dir.c_str());
    return kExitOk;
  }
  return kExitUsageError;
}
