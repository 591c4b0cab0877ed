/* Copyright 2026 The REO Evaluation Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <map>

#include "gtest/gtest.h"
#include "oracle/oracle.hpp"
#include "reo/error.hpp"
#include "reo/synthetic.hpp"
#include "test_util.hpp"

namespace reo {
namespace {

SyntheticConfig Small() {
  SyntheticConfig cfg;
  cfg.scenes = 40;
  return cfg;
}

// Mean score per corruption level for one mode and axis.
std::map<int, double> LevelMeans(const SyntheticConfig& cfg, GroundTruthMode mode,
                                 double ReoScore::*axis) {
  const auto instances = GenerateSynthetic(cfg);
  const auto inputs = ToScoringInputs(instances);
  ScoringConfig scoring;
  scoring.modes = {mode};
  const auto scores = ScoreBatch(inputs, scoring, 1);
  std::map<int, double> sums;
  std::map<int, int> counts;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    sums[instances[i].level] += scores[i].scores[0].*axis;
    ++counts[instances[i].level];
  }
  for (auto& [level, sum] : sums) sum /= counts[level];
  return sums;
}

void ExpectStrictlyDecreasing(const std::map<int, double>& means) {
  double previous = std::numeric_limits<double>::infinity();
  for (const auto& [level, mean] : means) {
    EXPECT_LT(mean, previous) << "level " << level;
    previous = mean;
  }
}

TEST(SyntheticTest, SameSeedIsBitIdentical) {
  const auto a = GenerateSynthetic(Small());
  const auto b = GenerateSynthetic(Small());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].instance_id, b[i].instance_id);
    EXPECT_TRUE(BitwiseEqual(*a[i].image, *b[i].image));
    EXPECT_TRUE(BitwiseEqual(*a[i].candidate_words, *b[i].candidate_words));
    ASSERT_EQ(a[i].reference_words.size(), b[i].reference_words.size());
    for (std::size_t r = 0; r < a[i].reference_words.size(); ++r) {
      EXPECT_TRUE(BitwiseEqual(*a[i].reference_words[r], *b[i].reference_words[r]));
    }
  }
  SyntheticConfig other = Small();
  other.seed = 8;
  EXPECT_FALSE(BitwiseEqual(*GenerateSynthetic(other)[0].image, *a[0].image));
}

TEST(SyntheticTest, ShapesAndRatings) {
  SyntheticConfig cfg = Small();
  cfg.scenes = 3;
  const auto instances = GenerateSynthetic(cfg);
  ASSERT_EQ(instances.size(), 15u);
  EXPECT_EQ(instances[0].instance_id, "s0-l0");
  for (const auto& inst : instances) {
    EXPECT_EQ(inst.image->rows(), 36u);
    EXPECT_EQ(inst.image->cols(), 64u);
    EXPECT_EQ(inst.reference_words.size(), 3u);
    const auto& r = std::get<RatingJudgment>(inst.judgment);
    EXPECT_DOUBLE_EQ(r.rating, 5.0 - inst.level);
  }
}

TEST(SyntheticTest, UncorruptedCandidateMatchesNoiselessReferences) {
  SyntheticConfig cfg = Small();
  cfg.scenes = 5;
  cfg.paraphrase_noise = 0.0;
  const auto instances = GenerateSynthetic(cfg);
  const auto inputs = ToScoringInputs(instances);
  ScoringConfig scoring;
  scoring.modes = {GroundTruthMode::kReference};
  const auto scores = ScoreBatch(inputs, scoring, 1);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (instances[i].level == 0) EXPECT_NEAR(scores[i].scores[0].relevance, 1.0, 1e-6);
  }
}

TEST(SyntheticTest, ExtraNoiseLowersExtraness) {
  for (auto mode : {GroundTruthMode::kImage, GroundTruthMode::kReference}) {
    ExpectStrictlyDecreasing(LevelMeans(Small(), mode, &ReoScore::extraness));
  }
}

TEST(SyntheticTest, DeletionLowersOmission) {
  SyntheticConfig cfg = Small();
  cfg.schedule = CorruptionSchedule::kDeletion;
  for (auto mode : {GroundTruthMode::kImage, GroundTruthMode::kReference}) {
    ExpectStrictlyDecreasing(LevelMeans(cfg, mode, &ReoScore::omission));
  }
}

TEST(SyntheticTest, PairModeBuildsCompletePairs) {
  SyntheticConfig cfg = Small();
  cfg.scenes = 8;
  cfg.pairs = true;
  const auto instances = GenerateSynthetic(cfg);
  ASSERT_EQ(instances.size(), 16u);
  for (std::size_t i = 0; i < instances.size(); i += 2) {
    const auto& a = std::get<PairJudgment>(instances[i].judgment);
    const auto& b = std::get<PairJudgment>(instances[i + 1].judgment);
    EXPECT_EQ(a.pair_id, b.pair_id);
    EXPECT_EQ(a.position, PairSide::kFirst);
    EXPECT_EQ(b.position, PairSide::kSecond);
    EXPECT_EQ(a.human_choice, b.human_choice);
    EXPECT_NE(instances[i].level, instances[i + 1].level);
    const PairSide cleaner =
        instances[i].level < instances[i + 1].level ? PairSide::kFirst : PairSide::kSecond;
    EXPECT_EQ(a.human_choice, cleaner);
  }
}

TEST(SyntheticTest, WrittenCorpusLoadsBack) {
  testing::TempDir dir("synthetic");
  SyntheticConfig cfg = Small();
  cfg.scenes = 4;
  const auto manifest = WriteSyntheticCorpus(dir.path(), cfg);
  const Corpus corpus = LoadManifest(manifest);
  const auto generated = GenerateSynthetic(cfg);
  ASSERT_EQ(corpus.instances.size(), generated.size());
  EXPECT_EQ(corpus.dim, cfg.dim);
  for (std::size_t i = 0; i < generated.size(); ++i) {
    EXPECT_EQ(corpus.instances[i].manifest.instance_id, generated[i].instance_id);
    EXPECT_TRUE(BitwiseEqual(*corpus.instances[i].candidate, *generated[i].candidate_words));
    EXPECT_EQ(corpus.instances[i].manifest.corruption->level, generated[i].level);
  }
}

TEST(SyntheticTest, InvalidConfig) {
  SyntheticConfig cfg;
  cfg.levels = 0;
  EXPECT_THROW(cfg.Validate(), UsageError);
  cfg.levels = 1;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.pairs = true;
  EXPECT_THROW(cfg.Validate(), UsageError);
  cfg = SyntheticConfig{};
  cfg.schedule = CorruptionSchedule::kDeletion;
  cfg.concepts = 4;
  EXPECT_THROW(cfg.Validate(), UsageError);
  cfg = SyntheticConfig{};
  cfg.dim = 0;
  EXPECT_THROW(cfg.Validate(), UsageError);
  EXPECT_THROW(ParseCorruptionSchedule("blur"), UsageError);
}

TEST(ScoreBatchTest, ThreadCountDoesNotChangeResults) {
  const auto inputs = ToScoringInputs(GenerateSynthetic(Small()));
  const ScoringConfig cfg;
  const auto serial = ScoreBatch(inputs, cfg, 1);
  const auto parallel = ScoreBatch(inputs, cfg, 6);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].instance_id, parallel[i].instance_id);
    for (std::size_t k = 0; k < serial[i].scores.size(); ++k) {
      EXPECT_EQ(serial[i].scores[k].relevance, parallel[i].scores[k].relevance);
      EXPECT_EQ(serial[i].scores[k].extraness, parallel[i].scores[k].extraness);
      EXPECT_EQ(serial[i].scores[k].omission, parallel[i].scores[k].omission);
    }
  }
}

TEST(ScoreBatchTest, ErrorsNameTheInstance) {
  auto inputs = ToScoringInputs(GenerateSynthetic(Small()));
  inputs.resize(3);
  inputs[2].reference_words.clear();
  try {
    ScoreBatch(inputs, ScoringConfig{}, 2);
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find(inputs[2].instance_id), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace reo
