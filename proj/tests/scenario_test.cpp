#include "casa/scenario.hpp"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "casa/error.hpp"
#include "casa/metrics.hpp"
#include "oracles.hpp"

namespace casa {
namespace {

SceneParams short_scene() {
  SceneParams p;
  p.duration_s = 1.0;
  return p;
}

TEST(MakeSceneTest, DefaultSizedScene) {
  const auto scene = make_scene(SceneParams{3, 2, 10.0, 16000}, Seed{42});
  EXPECT_EQ(scene.targets.size(), 3u);
  EXPECT_EQ(scene.interferences.size(), 2u);
  EXPECT_EQ(scene.mixture.size(), 160000u);
  EXPECT_EQ(scene.mixture.sample_rate(), 16000u);
  std::set<std::string> names;
  for (const auto& t : scene.targets) names.insert(t.label.name());
  EXPECT_EQ(names.size(), 3u);
  EXPECT_EQ(scene.targets[0].label.name(), "cough");
  EXPECT_EQ(scene.targets[1].label.name(), "dishes");
  EXPECT_NO_THROW(validate_scene(scene));
}

TEST(MakeSceneTest, Deterministic) {
  const auto a = make_scene(short_scene(), Seed{7});
  const auto b = make_scene(short_scene(), Seed{7});
  const auto c = make_scene(short_scene(), Seed{8});
  EXPECT_EQ(a.mixture, b.mixture);
  for (std::size_t i = 0; i < a.targets.size(); ++i) EXPECT_EQ(a.targets[i].signal, b.targets[i].signal);
  EXPECT_NE(a.mixture, c.mixture);
}

// Every target pair: the louder source scored against the quieter reference
// is below -10 dB. Every pair of sources is nearly uncorrelated.
TEST(MakeSceneTest, SourcesAreDistinguishable) {
  for (std::uint64_t seed : {1ull, 42ull, 1234ull}) {
    const auto scene = make_scene(SceneParams{3, 2, 2.0, 16000}, Seed{seed});
    std::vector<AudioSignal> all = signals_of(scene.targets);
    all.insert(all.end(), scene.interferences.begin(), scene.interferences.end());
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        const double ij = sdr(all[i], all[j]), ji = sdr(all[j], all[i]);
        if (j < scene.targets.size()) EXPECT_LT(std::min(ij, ji), -10.0) << i << "," << j;
        double dot = 0;
        for (std::size_t k = 0; k < all[i].size(); ++k) dot += all[i].samples()[k] * all[j].samples()[k];
        EXPECT_LT(std::abs(dot) / std::sqrt(all[i].energy() * all[j].energy()), 0.05);
      }
    }
  }
}

TEST(MakeSceneTest, RejectsBadParameters) {
  EXPECT_THROW(make_scene(SceneParams{3, 2, 0.0, 16000}, Seed{}), ParameterError);
  EXPECT_THROW(make_scene(SceneParams{3, 2, 1.0, 0}, Seed{}), ParameterError);
  EXPECT_THROW(make_scene(SceneParams{0, 2, 1.0, 16000}, Seed{}), ParameterError);
  EXPECT_THROW(make_scene(SceneParams{3, 2, 1e-6, 16000}, Seed{}), ParameterError);
  EXPECT_THROW(make_scene(SceneParams{100, 0, 1.0, 16000}, Seed{}), ParameterError);
}

TEST(OraclePredictionsTest, ExactPerSourceSnr) {
  const auto scene = make_scene(short_scene(), Seed{3});
  for (double snr : {0.0, 6.0, 10.0, 30.0, -3.5}) {
    const auto preds = oracle_predictions(scene, snr, Seed{9});
    ASSERT_EQ(preds.size(), scene.targets.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
      EXPECT_LT(std::abs(sdr(preds[i].signal, scene.targets[i].signal) - snr), 1e-6);
      EXPECT_EQ(preds[i].label, scene.targets[i].label);
    }
  }
}

TEST(OraclePredictionsTest, NoiseEnergyMatchesConstruction) {
  const auto scene = make_scene(short_scene(), Seed{3});
  const auto& u = scene.targets[0].signal;
  const auto n = scaled_white_noise(u, 10.0, Seed{5});
  EXPECT_NEAR(testing::energy(n), u.energy() / 10.0, 1e-12 * u.energy());
  EXPECT_EQ(n, scaled_white_noise(u, 10.0, Seed{5}));
  EXPECT_THROW(scaled_white_noise(u, std::nan(""), Seed{5}), ParameterError);
}

std::vector<LabeledSource> two_sources() {
  return {{testing::sig(testing::tone(64, 1)), ClassLabel::named("cough")},
          {testing::sig(testing::tone(64, 3)), ClassLabel::named("dishes")}};
}

TEST(InjectErrorTest, TableThreeErrorTypes) {
  const auto preds = two_sources();
  const auto del = inject_error(preds, ErrorType::deletion(1));
  EXPECT_EQ(del[0].label.to_string(), "cough");
  EXPECT_TRUE(del[1].label.is_none());

  const auto sub = inject_error(preds, ErrorType::substitution(1));
  EXPECT_EQ(sub[1].label.to_string(), "telephone");

  const auto swap = inject_error(preds, ErrorType::swapping(0, 1));
  EXPECT_EQ(swap[0].label.to_string(), "dishes");
  EXPECT_EQ(swap[1].label.to_string(), "cough");

  for (const auto* out : {&del, &sub, &swap})
    for (std::size_t i = 0; i < preds.size(); ++i) EXPECT_EQ((*out)[i].signal, preds[i].signal);
}

TEST(InjectErrorTest, RejectsInvalidErrors) {
  const auto preds = two_sources();
  EXPECT_THROW(inject_error(preds, ErrorType::substitution(1, "cough")), ParameterError);
  EXPECT_THROW(inject_error(preds, ErrorType::substitution(1, "none")), ParameterError);
  EXPECT_THROW(inject_error(preds, ErrorType::swapping(1, 1)), ParameterError);
  EXPECT_THROW(inject_error(preds, ErrorType::swapping(0, 2)), ParameterError);
  EXPECT_THROW(inject_error(preds, ErrorType::deletion(5)), ParameterError);
  // The scene's labels are authoritative even if predictions were already altered.
  auto altered = inject_error(preds, ErrorType::deletion(1));
  EXPECT_THROW(inject_error(altered, ErrorType::substitution(1, "dishes"),
                            {ClassLabel::named("cough"), ClassLabel::named("dishes")}),
               ParameterError);
}

TEST(CrossContaminateTest, EndpointsRecoverSixtyDecibels) {
  const auto scene = make_scene(short_scene(), Seed{11});
  const auto at0 = cross_contaminate(scene.targets, ContaminationSpec{0.0}, Seed{1});
  const auto at1 = cross_contaminate(scene.targets, ContaminationSpec{1.0}, Seed{1});
  EXPECT_NEAR(classical_sdr(at0, scene.targets).final_db, 60.0, 1e-6);
  EXPECT_NEAR(classical_sdr(at1, scene.targets).final_db, 60.0, 0.1);
  // alpha = 1 is a full swap of the pair up to the noise floor.
  EXPECT_GT(sdr(at1[0].signal, scene.targets[1].signal), 40.0);
  EXPECT_GT(sdr(at1[1].signal, scene.targets[0].signal), 40.0);
  EXPECT_NEAR(sdr(at1[2].signal, scene.targets[2].signal), 60.0, 1e-6);
  for (std::size_t i = 0; i < at1.size(); ++i) EXPECT_EQ(at1[i].label, scene.targets[i].label);
}

TEST(CrossContaminateTest, MidpointMakesPairNearlyIdentical) {
  const auto scene = make_scene(short_scene(), Seed{11});
  const auto mid = cross_contaminate(scene.targets, ContaminationSpec{0.5}, Seed{1});
  EXPECT_GT(sdr(mid[0].signal, mid[1].signal), 40.0);
}

TEST(CrossContaminateTest, RejectsBadSpecs) {
  const auto scene = make_scene(short_scene(), Seed{11});
  EXPECT_THROW(cross_contaminate(scene.targets, ContaminationSpec{1.5}, Seed{}), ParameterError);
  EXPECT_THROW(cross_contaminate(scene.targets, ContaminationSpec{-0.1}, Seed{}), ParameterError);
  EXPECT_THROW(cross_contaminate(scene.targets, ContaminationSpec{0.3, 1, 1}, Seed{}), ParameterError);
  EXPECT_THROW(cross_contaminate(scene.targets, ContaminationSpec{0.3, 0, 7}, Seed{}), ParameterError);
}

TEST(SeedTest, DerivedSeedsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(Seed{42}, i).value);
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(Seed{42}, 3), derive_seed(Seed{42}, 3));
  EXPECT_NE(derive_seed(Seed{42}, 3), derive_seed(Seed{43}, 3));
}

}  // namespace
}  // namespace casa
