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

#include <cstring>
#include <limits>
#include <optional>
#include <fstream>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "reo/error.hpp"
#include "reo/featurepack.hpp"
#include "reo/manifest.hpp"
#include "test_util.hpp"

namespace reo {
namespace {

namespace fs = std::filesystem;
using Bytes = std::vector<std::uint8_t>;
using testing::TempDir;

Bytes Header(std::uint32_t rows, std::uint32_t cols) {
  Bytes b = {'R', 'E', 'O', 'F', 1, 0, 1, 2};
  for (std::uint32_t d : {rows, cols}) {
    for (int k = 0; k < 4; ++k) b.push_back(static_cast<std::uint8_t>(d >> (8 * k)));
  }
  return b;
}

void AppendFloat(Bytes& b, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  for (int k = 0; k < 4; ++k) b.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
}

TEST(EncodeTensorTest, ZeroScalarLayout) {
  Bytes expected = Header(1, 1);
  expected.insert(expected.end(), {0, 0, 0, 0});
  EXPECT_EQ(EncodeTensor(FeatureTensor(1, 1, {0.0f})), expected);
}

TEST(EncodeTensorTest, IdentityLayout) {
  Bytes expected = Header(2, 2);
  for (float f : {1.0f, 0.0f, 0.0f, 1.0f}) AppendFloat(expected, f);
  const Bytes actual = EncodeTensor(FeatureTensor(2, 2, {1, 0, 0, 1}));
  EXPECT_EQ(actual, expected);
  // 1.0f is 0x3f800000 little-endian.
  EXPECT_EQ(Bytes(actual.begin() + 16, actual.begin() + 20), (Bytes{0x00, 0x00, 0x80, 0x3f}));
}

TEST(DecodeTensorTest, AcceptsOneDimensionalHeader) {
  Bytes b = {'R', 'E', 'O', 'F', 1, 0, 1, 1, 3, 0, 0, 0};
  for (float f : {1.5f, -2.0f, 0.25f}) AppendFloat(b, f);
  const FeatureTensor t = DecodeTensor(b);
  EXPECT_EQ(t.rows(), 1u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_EQ(t(0, 1), -2.0f);
}

TEST(DecodeTensorTest, RoundTripIsBitIdentical) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> bits;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 1 + trial % 13, cols = 1 + trial % 29;
    std::vector<float> values(rows * cols);
    for (float& v : values) {
      do {
        const std::uint32_t b = bits(rng);
        std::memcpy(&v, &b, 4);
      } while (!std::isfinite(v));
    }
    const FeatureTensor t(rows, cols, values);
    EXPECT_TRUE(BitwiseEqual(DecodeTensor(EncodeTensor(t)), t));
  }
}

TEST(DecodeTensorTest, FileRoundTripLargeTensor) {
  TempDir dir("pack");
  std::mt19937_64 rng(3);
  std::normal_distribution<float> n;
  std::vector<float> values(36 * 1024);
  for (float& v : values) v = n(rng);
  const FeatureTensor t(36, 1024, values);
  WriteTensor(dir.path() / "t.reof", t);
  EXPECT_TRUE(BitwiseEqual(ReadTensor(dir.path() / "t.reof"), t));
  EXPECT_EQ(fs::file_size(dir.path() / "t.reof"), 16u + 36u * 1024u * 4u);
}

// Empty when nothing was thrown; value() then fails the test.
template <typename E>
std::optional<E> Capture(const Bytes& b) {
  try {
    DecodeTensor(b);
  } catch (const E& e) {
    return e;
  }
  return std::nullopt;
}

TEST(DecodeTensorTest, MalformedHeaders) {
  const Bytes good = EncodeTensor(FeatureTensor(2, 2, {1, 2, 3, 4}));

  Bytes magic = good;
  std::memcpy(magic.data(), "XXXX", 4);
  EXPECT_EQ(Capture<FormatError>(magic).value().offset(), 0u);

  Bytes version = good;
  version[4] = 2;
  EXPECT_EQ(Capture<FormatError>(version).value().offset(), 4u);

  Bytes dtype = good;
  dtype[6] = 7;
  EXPECT_EQ(Capture<FormatError>(dtype).value().offset(), 6u);

  Bytes ndim = good;
  ndim[7] = 3;
  EXPECT_EQ(Capture<FormatError>(ndim).value().offset(), 7u);

  EXPECT_THROW(DecodeTensor(Bytes(good.begin(), good.begin() + 5)), FormatError);
  EXPECT_THROW(DecodeTensor(Bytes(good.begin(), good.begin() + 12)), FormatError);
  EXPECT_THROW(DecodeTensor(Bytes{}), FormatError);
}

TEST(DecodeTensorTest, PayloadLengthMismatchReportsBothLengths) {
  const Bytes good = EncodeTensor(FeatureTensor(2, 2, {1, 2, 3, 4}));
  const auto short_payload = Capture<FormatError>(Bytes(good.begin(), good.end() - 4));
  const std::string msg = short_payload.value().what();
  EXPECT_NE(msg.find("16"), std::string::npos) << msg;
  EXPECT_NE(msg.find("12"), std::string::npos) << msg;

  Bytes trailing = good;
  trailing.push_back(0);
  EXPECT_THROW(DecodeTensor(trailing), FormatError);
}

TEST(DecodeTensorTest, NonFinitePayloadNamesElement) {
  Bytes b = Header(1, 3);
  AppendFloat(b, 1.0f);
  AppendFloat(b, 2.0f);
  AppendFloat(b, std::numeric_limits<float>::quiet_NaN());
  EXPECT_EQ(Capture<DataError>(b).value().element(), 2u);

  Bytes inf = Header(1, 1);
  AppendFloat(inf, std::numeric_limits<float>::infinity());
  EXPECT_EQ(Capture<DataError>(inf).value().element(), 0u);
}

TEST(ReadTensorTest, MissingFileIsIoError) {
  TempDir dir("pack");
  EXPECT_THROW(ReadTensor(dir.path() / "absent.reof"), IoError);
}

TEST(ReadTensorTest, ErrorsNameThePath) {
  TempDir dir("pack");
  const fs::path p = dir.path() / "bad.reof";
  std::ofstream(p, std::ios::binary) << "XXXXnonsense";
  try {
    ReadTensor(p);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.reof"), std::string::npos);
  }
}

class ManifestTest : public ::testing::Test {
 protected:
  void Tensor(const std::string& name, std::size_t rows, std::size_t cols) {
    std::vector<float> v(rows * cols);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(i % 7) - 3.0f;
    WriteTensor(dir_.path() / name, FeatureTensor(rows, cols, v));
  }
  fs::path Manifest(const std::string& text) {
    const fs::path p = dir_.path() / "manifest.jsonl";
    std::ofstream(p) << text;
    return p;
  }
  static std::string Rating(const std::string& id, const std::string& image = "img.reof",
                            const std::string& extra = "") {
    return R"({"instance_id":")" + id + R"(","image_tensor":")" + image +
           R"(","candidate_words":"cand.reof","reference_words":["ref.reof"],)" +
           R"("judgment":{"rating":4,"scale":[1,5]})" + extra + "}\n";
  }
  static std::string PairLine(const std::string& id, const std::string& pair,
                              const std::string& position, const std::string& category = "HC",
                              const std::string& choice = "first") {
    return R"({"instance_id":")" + id +
           R"(","image_tensor":"img.reof","candidate_words":"cand.reof","judgment":{"pair_id":")" +
           pair + R"(","position":")" + position + R"(","category":")" + category +
           R"(","human_choice":")" + choice + R"("}})" + "\n";
  }
  void SetUp() override {
    Tensor("img.reof", 4, 3);
    Tensor("cand.reof", 5, 3);
    Tensor("ref.reof", 2, 3);
  }
  std::string ErrorOf(const fs::path& manifest) {
    try {
      LoadManifest(manifest);
    } catch (const Error& e) {
      return e.what();
    }
    return "";
  }

  TempDir dir_{"manifest"};
};

TEST_F(ManifestTest, EmptyFileGivesEmptyCorpus) {
  const Corpus c = LoadManifest(Manifest(""));
  EXPECT_TRUE(c.instances.empty());
  EXPECT_EQ(c.dim, 0u);
}

TEST_F(ManifestTest, SingleRatingInstance) {
  const Corpus c = LoadManifest(Manifest(Rating("a")));
  ASSERT_EQ(c.instances.size(), 1u);
  const auto& inst = c.instances[0];
  const auto* r = std::get_if<RatingJudgment>(&inst.manifest.judgment);
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->rating, 4.0);
  EXPECT_EQ(c.dim, 3u);
  EXPECT_EQ(inst.image->rows(), 4u);
  EXPECT_EQ(inst.references.size(), 1u);
  const auto inputs = ToScoringInputs(c);
  ASSERT_EQ(inputs.size(), 1u);
  EXPECT_EQ(inputs[0].instance_id, "a");
}

TEST_F(ManifestTest, ManifestLineRoundTrips) {
  std::istringstream in(Rating("a", "img.reof",
                               R"(,"corruption":{"kind":"extra","level":2},"checkpoint":"ck1")") +
                        PairLine("b", "p", "second", "MM", "second"));
  const auto records = ParseManifest(in);
  ASSERT_EQ(records.size(), 2u);
  std::istringstream again(ManifestLine(records[0]) + "\n" + ManifestLine(records[1]) + "\n");
  const auto reparsed = ParseManifest(again);
  EXPECT_EQ(ManifestLine(reparsed[0]), ManifestLine(records[0]));
  EXPECT_EQ(ManifestLine(reparsed[1]), ManifestLine(records[1]));
  EXPECT_EQ(reparsed[0].corruption->level, 2);
  EXPECT_EQ(std::get<PairJudgment>(reparsed[1].judgment).category, PairCategory::kMM);
}

TEST_F(ManifestTest, MissingFieldCitesLineNumber) {
  const std::string bad =
      R"({"instance_id":"c","candidate_words":"cand.reof","reference_words":[]})"
      "\n";
  const std::string msg = ErrorOf(Manifest(Rating("a") + Rating("b") + bad));
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("image_tensor"), std::string::npos) << msg;
}

TEST_F(ManifestTest, MalformedJsonCitesLineNumber) {
  const std::string msg = ErrorOf(Manifest(Rating("a") + "{not json\n"));
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST_F(ManifestTest, DanglingPathNamesInstance) {
  try {
    LoadManifest(Manifest(Rating("lost", "nowhere.reof")));
    FAIL();
  } catch (const CorpusError& e) {
    EXPECT_NE(std::string(e.what()).find("lost"), std::string::npos) << e.what();
  }
}

TEST_F(ManifestTest, InconsistentDimensionIsCorpusError) {
  Tensor("wide.reof", 4, 5);
  EXPECT_THROW(LoadManifest(Manifest(Rating("a") + Rating("b", "wide.reof"))), CorpusError);
}

TEST_F(ManifestTest, RejectsBadRecords) {
  EXPECT_THROW(LoadManifest(Manifest(Rating("a") + Rating("a"))), Error);
  const std::string out_of_scale =
      R"({"instance_id":"a","image_tensor":"img.reof","candidate_words":"cand.reof","judgment":{"rating":9,"scale":[1,5]}})"
      "\n";
  EXPECT_THROW(LoadManifest(Manifest(out_of_scale)), Error);
}

TEST_F(ManifestTest, UnknownCategoryNamesPair) {
  const std::string msg = ErrorOf(Manifest(PairLine("a", "pair-9", "first", "ZZ")));
  EXPECT_NE(msg.find("pair-9"), std::string::npos) << msg;
}

TEST_F(ManifestTest, PairsMustBeComplete) {
  EXPECT_THROW(LoadManifest(Manifest(PairLine("a", "p", "first"))), CorpusError);
  EXPECT_THROW(LoadManifest(Manifest(PairLine("a", "p", "first") + PairLine("b", "p", "first"))),
               CorpusError);
  EXPECT_THROW(
      LoadManifest(Manifest(PairLine("a", "p", "first") + PairLine("b", "p", "second", "HI"))),
      CorpusError);
  const Corpus ok =
      LoadManifest(Manifest(PairLine("a", "p", "first") + PairLine("b", "p", "second")));
  EXPECT_EQ(ok.instances.size(), 2u);
}

TEST_F(ManifestTest, TrueErrorTensorsMustMatchImageShape) {
  Tensor("extra.reof", 4, 3);
  Tensor("short.reof", 2, 3);
  const Corpus ok = LoadManifest(Manifest(Rating("a", "img.reof", R"(,"true_extra":"extra.reof")")));
  EXPECT_NE(ok.instances[0].true_extra, nullptr);
  EXPECT_EQ(ok.instances[0].true_missing, nullptr);
  EXPECT_THROW(LoadManifest(Manifest(Rating("a", "img.reof", R"(,"true_missing":"short.reof")"))),
               CorpusError);
}

TEST_F(ManifestTest, MissingManifestIsIoError) {
  EXPECT_THROW(LoadManifest(dir_.path() / "absent.jsonl"), IoError);
}

TEST_F(ManifestTest, ParallelLoadMatchesSerial) {
  std::string text;
  for (int i = 0; i < 20; ++i) text += Rating("i" + std::to_string(i));
  const fs::path p = Manifest(text);
  const Corpus a = LoadManifest(p, 1);
  const Corpus b = LoadManifest(p, 4);
  ASSERT_EQ(a.instances.size(), b.instances.size());
  for (std::size_t i = 0; i < a.instances.size(); ++i) {
    EXPECT_EQ(a.instances[i].manifest.instance_id, b.instances[i].manifest.instance_id);
    EXPECT_TRUE(BitwiseEqual(*a.instances[i].candidate, *b.instances[i].candidate));
  }
}

}  // namespace
}  // namespace reo
