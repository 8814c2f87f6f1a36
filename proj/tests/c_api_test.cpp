#include "casa_sdr.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

std::vector<double> tone(std::size_t n, int cycles, double amp) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = amp * std::sin(2.0 * M_PI * cycles * static_cast<double>(i) / n);
  return v;
}

casa_signal* make(const std::vector<double>& v) {
  casa_signal* s = nullptr;
  EXPECT_EQ(casa_signal_create(v.data(), v.size(), 16000, &s), CASA_OK);
  return s;
}

fs::path scratch(const char* name) {
  const auto dir = fs::temp_directory_path() / (std::string("casa_c_api_") + name);
  fs::remove_all(dir);
  return dir;
}

TEST(CApiSignalTest, CreateAndInspect) {
  const std::vector<double> v{0.1, -0.2, 0.3};
  casa_signal* s = make(v);
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(casa_signal_length(s), 3u);
  EXPECT_EQ(casa_signal_sample_rate(s), 16000u);
  EXPECT_EQ(casa_signal_samples(s)[1], -0.2);
  casa_signal_destroy(s);
  casa_signal_destroy(nullptr);
}

TEST(CApiSignalTest, ErrorsSetStatusAndMessage) {
  casa_signal* s = nullptr;
  const double bad[] = {0.0, NAN};
  EXPECT_EQ(casa_signal_create(bad, 2, 16000, &s), CASA_ERROR_PARAMETER);
  EXPECT_EQ(s, nullptr);
  EXPECT_STRNE(casa_last_error(), "");
  EXPECT_EQ(casa_signal_create(bad, 1, 16000, nullptr), CASA_ERROR_PARAMETER);
  EXPECT_EQ(casa_signal_load("/nonexistent/x.wav", -1, &s), CASA_ERROR_IO);
  EXPECT_NE(std::string(casa_last_error()).find("x.wav"), std::string::npos);
  EXPECT_STREQ(casa_status_string(CASA_ERROR_FORMAT), "format error");
}

TEST(CApiSignalTest, SdrMatchesDefinition) {
  const auto ref = tone(1000, 7, 0.5);
  auto est = ref;
  for (std::size_t i = 0; i < est.size(); ++i) est[i] += 0.05 * std::sin(2.0 * M_PI * 31 * i / 1000.0);
  casa_signal* r = make(ref);
  casa_signal* e = make(est);
  double db = 0;
  ASSERT_EQ(casa_sdr(e, r, 100.0, &db), CASA_OK);
  EXPECT_NEAR(db, 20.0, 1e-9);
  ASSERT_EQ(casa_sdr(r, r, 100.0, &db), CASA_OK);
  EXPECT_EQ(db, 100.0);

  const std::vector<double> silent(1000, 0.0), shorter(10, 0.1);
  casa_signal* z = make(silent);
  casa_signal* w = make(shorter);
  EXPECT_EQ(casa_sdr(e, z, 100.0, &db), CASA_ERROR_DOMAIN);
  EXPECT_EQ(casa_sdr(w, r, 100.0, &db), CASA_ERROR_DIMENSION);
  for (auto* s : {r, e, z, w}) casa_signal_destroy(s);
}

TEST(CApiSignalTest, SaveAndLoadRoundTrip) {
  const auto dir = scratch("wav");
  fs::create_directories(dir);
  casa_signal* s = make(tone(400, 3, 0.25));
  const auto path = (dir / "t.wav").string();
  ASSERT_EQ(casa_signal_save(s, path.c_str(), 1), CASA_OK);
  casa_signal* back = nullptr;
  ASSERT_EQ(casa_signal_load(path.c_str(), -1, &back), CASA_OK);
  ASSERT_EQ(casa_signal_length(back), 400u);
  for (std::size_t i = 0; i < 400; ++i)
    EXPECT_EQ(casa_signal_samples(back)[i], static_cast<double>(static_cast<float>(casa_signal_samples(s)[i])));
  casa_signal_destroy(s);
  casa_signal_destroy(back);
  fs::remove_all(dir);
}

// Three orthogonal tones 12 dB apart with oracle estimates at 6 dB.
class CApiEvaluateTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const int cycles[] = {5, 17, 41};
    for (int i = 0; i < 3; ++i) {
      const double amp = 0.5 * std::pow(10.0, -12.0 * i / 20.0);
      const auto r = tone(4000, cycles[i], amp);
      auto e = r;
      const auto noise = tone(4000, 97 + 10 * i, amp * std::pow(10.0, -6.0 / 20.0));
      for (std::size_t k = 0; k < e.size(); ++k) e[k] += noise[k];
      refs_.push_back(make(r));
      ests_.push_back(make(e));
    }
  }
  void TearDown() override {
    for (auto* s : refs_) casa_signal_destroy(s);
    for (auto* s : ests_) casa_signal_destroy(s);
  }

  casa_report* run(const char* const labels[3], casa_metric_config config) {
    const char* names[] = {"cough", "dishes", "pour"};
    casa_labeled_source refs[3], preds[3];
    for (int i = 0; i < 3; ++i) {
      refs[i] = {refs_[i], names[i]};
      preds[i] = {ests_[i], labels[i]};
    }
    casa_report* out = nullptr;
    EXPECT_EQ(casa_evaluate(preds, 3, refs, 3, nullptr, &config, &out), CASA_OK) << casa_last_error();
    return out;
  }

  std::vector<casa_signal*> refs_, ests_;
};

TEST_F(CApiEvaluateTest, SwapScoresAndRecords) {
  casa_metric_config cfg;
  casa_metric_config_init(&cfg);
  EXPECT_EQ(cfg.variant, CASA_VARIANT_CASA);
  EXPECT_EQ(cfg.sdr_cap_db, 100.0);
  const char* swapped[] = {"dishes", "cough", "pour"};
  casa_report* r = run(swapped, cfg);
  ASSERT_NE(r, nullptr);
  EXPECT_NEAR(casa_report_final_db(r), 2.0, 1e-9);
  EXPECT_EQ(casa_report_denominator(r), 3u);
  size_t tp, fn, fp;
  casa_report_counts(r, &tp, &fn, &fp);
  EXPECT_EQ(tp, 1u);
  ASSERT_EQ(casa_report_source_count(r), 3u);
  casa_source_record rec;
  ASSERT_EQ(casa_report_source(r, 0, &rec), CASA_OK);
  EXPECT_EQ(rec.tag, CASA_TAG_FN_PLUS_FP);
  EXPECT_STREQ(rec.reference_label, "cough");
  EXPECT_STREQ(rec.estimate_label, "dishes");
  EXPECT_TRUE(rec.has_raw_sdr);
  EXPECT_NEAR(rec.raw_sdr_db, 6.0, 1e-9);
  EXPECT_EQ(rec.contribution_db, 0.0);
  EXPECT_EQ(casa_report_source(r, 3, &rec), CASA_ERROR_PARAMETER);
  ASSERT_EQ(casa_report_pair_count(r), 3u);
  size_t e = 9, ref = 9;
  ASSERT_EQ(casa_report_pair(r, 1, &e, &ref), CASA_OK);
  EXPECT_EQ(e, 1u);
  EXPECT_EQ(ref, 1u);
  casa_report_destroy(r);

  cfg.penalty = CASA_PENALTY_OUTPUT;
  cfg.application = CASA_APPLY_ERROR_BASED;
  r = run(swapped, cfg);
  EXPECT_NEAR(casa_report_final_db(r), -6.0, 1e-9);
  casa_report_destroy(r);
}

TEST_F(CApiEvaluateTest, NoneLabelAndConfigErrors) {
  casa_metric_config cfg;
  casa_metric_config_init(&cfg);
  const char* deleted[] = {"cough", nullptr, "pour"};
  casa_report* r = run(deleted, cfg);
  EXPECT_NEAR(casa_report_final_db(r), 4.0, 1e-9);
  casa_report_destroy(r);

  cfg.penalty = CASA_PENALTY_INPUT;
  casa_labeled_source one{refs_[0], "cough"};
  casa_report* out = nullptr;
  EXPECT_EQ(casa_evaluate(&one, 1, &one, 1, nullptr, &cfg, &out), CASA_ERROR_CONFIG);
  EXPECT_EQ(out, nullptr);
  cfg.penalty = CASA_PENALTY_OUTPUT;
  cfg.variant = CASA_VARIANT_CA;
  EXPECT_EQ(casa_evaluate(&one, 1, &one, 1, nullptr, &cfg, &out), CASA_ERROR_CONFIG);
  cfg.variant = static_cast<casa_variant>(9);
  EXPECT_EQ(casa_evaluate(&one, 1, &one, 1, nullptr, &cfg, &out), CASA_ERROR_CONFIG);
}

TEST(CApiStudyTest, RowCounts) {
  casa_study_params p;
  casa_study_params_init(&p);
  p.n_scenes = 1;
  p.duration_s = 0.5;
  const struct {
    const char* name;
    size_t rows;
  } cases[] = {{"classification", 9}, {"contamination", 63}, {"penalties", 30}};
  const double snrs[] = {6.0, 30.0};
  for (const auto& c : cases) {
    p.name = c.name;
    if (std::string(c.name) == "penalties") {
      p.snrs_db = snrs;
      p.n_snrs = 2;
    }
    casa_sweep* s = nullptr;
    ASSERT_EQ(casa_study_run(&p, &s), CASA_OK) << casa_last_error();
    EXPECT_EQ(casa_sweep_row_count(s), c.rows) << c.name;
    EXPECT_NE(std::string(casa_sweep_summary(s)).find(c.name), std::string::npos);
    casa_sweep_destroy(s);
  }
  p.name = "bogus";
  casa_sweep* s = nullptr;
  EXPECT_EQ(casa_study_run(&p, &s), CASA_ERROR_PARAMETER);
  EXPECT_NE(std::string(casa_last_error()).find("bogus"), std::string::npos);
}

TEST(CApiStudyTest, CsvHasHeaderAndRows) {
  const auto dir = scratch("csv");
  fs::create_directories(dir);
  casa_study_params p;
  casa_study_params_init(&p);
  p.name = "classification";
  p.n_scenes = 1;
  p.duration_s = 0.5;
  casa_sweep* s = nullptr;
  ASSERT_EQ(casa_study_run(&p, &s), CASA_OK);
  const auto path = (dir / "out.csv").string();
  ASSERT_EQ(casa_sweep_write_csv(s, path.c_str()), CASA_OK);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "study,x,metric,penalty,application,value_db,seed");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 9u);
  casa_sweep_destroy(s);
  fs::remove_all(dir);
}

TEST(CApiExportTest, ExportedSceneEvaluates) {
  const auto dir = scratch("export");
  casa_scene_export_params p;
  casa_scene_export_params_init(&p);
  p.duration_s = 1.0;
  for (const auto& [error, want] : {std::pair{"none", 10.0}, {"swapping", 10.0 / 3.0}, {"deletion", 20.0 / 3.0}}) {
    p.error = error;
    ASSERT_EQ(casa_export_scene(&p, dir.string().c_str()), CASA_OK) << casa_last_error();
    casa_report* r = nullptr;
    ASSERT_EQ(casa_evaluate_manifest((dir / "manifest.txt").string().c_str(), nullptr, &r), CASA_OK)
        << casa_last_error();
    EXPECT_NEAR(casa_report_final_db(r), want, 1e-4) << error;
    const auto report_path = (dir / "report.txt").string();
    EXPECT_EQ(casa_report_write(r, report_path.c_str()), CASA_OK);
    EXPECT_TRUE(fs::exists(report_path));
    casa_report_destroy(r);
  }
  p.error = "typo";
  EXPECT_EQ(casa_export_scene(&p, dir.string().c_str()), CASA_ERROR_PARAMETER);
  casa_report* r = nullptr;
  EXPECT_EQ(casa_evaluate_manifest((dir / "missing.txt").string().c_str(), nullptr, &r), CASA_ERROR_IO);
  fs::remove_all(dir);
}

}  // namespace
