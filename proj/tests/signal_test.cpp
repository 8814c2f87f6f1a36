#include "casa/signal.hpp"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "casa/error.hpp"
#include "oracles.hpp"

namespace casa {
namespace {

using testing::sig;
using testing::tone;

TEST(AudioSignalTest, RejectsEmptyNonFiniteAndZeroRate) {
  EXPECT_THROW(AudioSignal({}, 16000), ParameterError);
  EXPECT_THROW(AudioSignal({0.1, std::nan("")}, 16000), ParameterError);
  EXPECT_THROW(AudioSignal({0.1, std::numeric_limits<double>::infinity()}, 16000), ParameterError);
  EXPECT_THROW(AudioSignal({0.1}, 0), ParameterError);
}

TEST(AudioSignalTest, Energy) { EXPECT_DOUBLE_EQ(AudioSignal({3.0, 4.0}, 8000).energy(), 25.0); }

TEST(AudioSignalTest, CompatibilityChecksLengthAndRate) {
  EXPECT_NO_THROW(require_compatible(sig({1, 2}), sig({3, 4})));
  EXPECT_THROW(require_compatible(sig({1, 2}), sig({3})), DimensionError);
  EXPECT_THROW(require_compatible(sig({1, 2}, 16000), sig({3, 4}, 44100)), DimensionError);
}

TEST(ClassLabelTest, NoneNeverEqualsNamed) {
  EXPECT_EQ(ClassLabel::none(), ClassLabel::none());
  EXPECT_NE(ClassLabel::none(), ClassLabel::named("cough"));
  EXPECT_EQ(ClassLabel::named("cough"), ClassLabel::named("cough"));
  EXPECT_NE(ClassLabel::named("cough"), ClassLabel::named("dishes"));
}

TEST(ClassLabelTest, ParseMapsNoneCaseInsensitively) {
  EXPECT_TRUE(ClassLabel::parse("none").is_none());
  EXPECT_TRUE(ClassLabel::parse("NONE").is_none());
  EXPECT_EQ(ClassLabel::parse("pour").name(), "pour");
  EXPECT_EQ(ClassLabel::none().to_string(), "none");
  EXPECT_THROW(ClassLabel::named(""), ParameterError);
  EXPECT_THROW((void)ClassLabel::none().name(), ParameterError);
}

TEST(SceneTest, ValidatesMixtureSum) {
  auto a = tone(64, 1), b = tone(64, 2), c = tone(64, 5);
  std::vector<double> mix(64);
  for (int i = 0; i < 64; ++i) mix[i] = a[i] + b[i] + c[i];
  Scene ok{{{sig(a), ClassLabel::named("cough")}, {sig(b), ClassLabel::named("dishes")}}, {sig(c)}, sig(mix)};
  EXPECT_NO_THROW(validate_scene(ok));

  Scene bad = ok;
  bad.interferences.clear();
  EXPECT_THROW(validate_scene(bad), ParameterError);

  Scene unlabeled = ok;
  unlabeled.targets[0].label = ClassLabel::none();
  EXPECT_THROW(validate_scene(unlabeled), ParameterError);

  Scene empty{{}, {}, sig(mix)};
  EXPECT_THROW(validate_scene(empty), ParameterError);
}

}  // namespace
}  // namespace casa
