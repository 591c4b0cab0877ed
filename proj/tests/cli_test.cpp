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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "gtest/gtest.h"
#include "oracle/oracle.hpp"
#include "reo/attention.hpp"
#include "reo/featurepack.hpp"
#include "reo/manifest.hpp"
#include "reo/metrics.hpp"
#include "reo/synthetic.hpp"
#include "test_util.hpp"

namespace reo {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  RunResult Run(const std::string& args) {
    const fs::path out = dir_.path() / "stdout.txt";
    const fs::path err = dir_.path() / "stderr.txt";
    const std::string cmd = std::string("\"") + REO_CLI_PATH + "\" " + args + " > \"" +
                            out.string() + "\" 2> \"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  fs::path Path(const std::string& name) const { return dir_.path() / name; }
  std::string Quoted(const std::string& name) const { return "\"" + Path(name).string() + "\""; }

  fs::path Synthetic(const std::string& name, const std::string& extra = "") {
    const RunResult r = Run("gen-synthetic --out " + Quoted(name) +
                            " --scenes 12 --regions 8 --dim 16 " + extra);
    EXPECT_EQ(r.code, 0) << r.err;
    return Path(name) / "manifest.jsonl";
  }

  void WriteLines(const std::string& name, const std::vector<std::string>& lines) {
    std::ofstream f(Path(name));
    for (const auto& l : lines) f << l << '\n';
  }

  testing::TempDir dir_{"cli"};
};

TEST_F(CliTest, EmptyManifestGivesHeaderOnly) {
  WriteLines("empty.jsonl", {});
  const RunResult r = Run("score --manifest " + Quoted("empty.jsonl"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "instance_id,mode,relevance,extraness,omission\n");
}

TEST_F(CliTest, MissingManifestIsEnvironmentError) {
  const RunResult r = Run("score --manifest " + Quoted("absent.jsonl"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("reo: error[io]"), std::string::npos) << r.err;
}

TEST_F(CliTest, BadFlagsAreUsageErrors) {
  EXPECT_EQ(Run("score").code, 2);
  EXPECT_EQ(Run("frobnicate").code, 2);
  WriteLines("empty.jsonl", {});
  EXPECT_EQ(Run("score --manifest " + Quoted("empty.jsonl") + " --cov cholesky").code, 2);
  EXPECT_EQ(Run("score --manifest " + Quoted("empty.jsonl") + " --lambda -1").code, 2);
}

TEST_F(CliTest, ReferenceModeWithoutReferencesNamesInstance) {
  WriteTensor(Path("img.reof"), FeatureTensor(2, 2, {1, 0, 0, 1}));
  WriteTensor(Path("cand.reof"), FeatureTensor(1, 2, {1, 1}));
  WriteLines("m.jsonl", {R"({"instance_id":"lonely","image_tensor":"img.reof",)"
                         R"("candidate_words":"cand.reof","reference_words":[]})"});
  const RunResult r = Run("score --manifest " + Quoted("m.jsonl"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("lonely"), std::string::npos) << r.err;
  const RunResult image = Run("score --modes image --manifest " + Quoted("m.jsonl"));
  EXPECT_EQ(image.code, 0) << image.err;
}

TEST_F(CliTest, CorruptionFreeCandidatesAreFullyRelevant) {
  const fs::path manifest = Synthetic("clean", "--levels 1 --paraphrase-noise 0");
  const RunResult r = Run("score --modes reference --manifest \"" + manifest.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = ParseCsv(r.out);
  ASSERT_EQ(rows.size(), 13u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_NEAR(std::stod(rows[i][2]), 1.0, 1e-6) << rows[i][0];
  }
}

TEST_F(CliTest, OutputIndependentOfJobs) {
  const fs::path manifest = Synthetic("corpus");
  const std::string base = "score --manifest \"" + manifest.string() + "\" --out ";
  ASSERT_EQ(Run(base + Quoted("j1.csv") + " --jobs 1").code, 0);
  ASSERT_EQ(Run(base + Quoted("j8.csv") + " --jobs 8").code, 0);
  const std::string a = Slurp(Path("j1.csv"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, Slurp(Path("j8.csv")));
}

TEST_F(CliTest, NormalizeWritesCompanionFile) {
  const fs::path manifest = Synthetic("corpus");
  const RunResult r =
      Run("score --normalize --manifest \"" + manifest.string() + "\" --out " + Quoted("s.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto raw = ParseCsv(Slurp(Path("s.csv")));
  const auto norm = ParseCsv(Slurp(Path("s.normalized.csv")));
  ASSERT_EQ(raw.size(), norm.size());
  EXPECT_EQ(raw[0], norm[0]);
  for (std::size_t i = 1; i < norm.size(); ++i) {
    for (std::size_t k = 2; k < 5; ++k) {
      const double v = std::stod(norm[i][k]);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  EXPECT_EQ(Run("score --normalize --manifest \"" + manifest.string() + "\"").code, 2);
}

TEST_F(CliTest, EvalCorrMatchesPairCountingOracle) {
  const fs::path manifest = Synthetic("corpus");
  const RunResult scored =
      Run("score --modes image,reference --manifest \"" + manifest.string() + "\"");
  ASSERT_EQ(scored.code, 0) << scored.err;
  SyntheticConfig cfg;
  cfg.scenes = 12;
  cfg.regions = 8;
  cfg.dim = 16;
  std::map<std::string, double> rating;
  for (const auto& inst : GenerateSynthetic(cfg)) {
    rating[inst.instance_id] = std::get<RatingJudgment>(inst.judgment).rating;
  }
  std::map<std::string, std::pair<oracle::Vec, oracle::Vec>> columns;
  const char* axes[] = {"relevance", "extraness", "omission"};
  for (const auto& row : ParseCsv(scored.out)) {
    if (row[0] == "instance_id") continue;
    for (int k = 0; k < 3; ++k) {
      auto& col = columns[row[1] + "." + axes[k]];
      col.first.push_back(std::stod(row[2 + k]));
      col.second.push_back(rating.at(row[0]));
    }
  }
  const RunResult corr = Run("eval-corr --modes image,reference --manifest \"" +
                             manifest.string() + "\" --out " + Quoted("corr.csv"));
  ASSERT_EQ(corr.code, 0) << corr.err;
  const auto rows = ParseCsv(Slurp(Path("corr.csv")));
  ASSERT_EQ(rows.size(), 7u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& [scores, ratings] = columns.at(rows[i][0]);
    EXPECT_NEAR(std::stod(rows[i][2]), oracle::TauB(scores, ratings), 1e-9) << rows[i][0];
    EXPECT_EQ(rows[i][4], "ok");
  }
}

TEST_F(CliTest, EvalCorrConstantMetricIsUndefined) {
  // Identical candidates and references make every instance score the same.
  WriteTensor(Path("img.reof"), FeatureTensor(2, 2, {1, 0, 0, 1}));
  WriteTensor(Path("cand.reof"), FeatureTensor(2, 2, {1, 0.5f, 0.5f, 1}));
  std::vector<std::string> lines;
  for (int i = 0; i < 4; ++i) {
    lines.push_back(R"({"instance_id":"i)" + std::to_string(i) +
                    R"(","image_tensor":"img.reof","candidate_words":"cand.reof",)"
                    R"("reference_words":["cand.reof"],"judgment":{"rating":)" +
                    std::to_string(1 + i) + "}}");
  }
  WriteLines("m.jsonl", lines);
  const RunResult r = Run("eval-corr --modes image --manifest " + Quoted("m.jsonl"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("undefined (all ties)"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("constant"), std::string::npos) << r.err;

  WriteLines("one.jsonl", {lines[0]});
  EXPECT_EQ(Run("eval-corr --manifest " + Quoted("one.jsonl")).code, 2);
}

TEST_F(CliTest, EvalPairwiseOnSyntheticPairs) {
  const fs::path manifest = Synthetic("pairs", "--pairs");
  const RunResult r = Run("eval-pairwise --modes image --manifest \"" + manifest.string() +
                          "\" --out " + Quoted("pw.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ALL"), std::string::npos) << r.out;
  const auto rows = ParseCsv(Slurp(Path("pw.csv")));
  ASSERT_EQ(rows.size(), 1u + 3u * 5u);
  bool saw_all = false;
  for (const auto& row : rows) {
    if (row[1] == "ALL") saw_all = true;
  }
  EXPECT_TRUE(saw_all);
}

TEST_F(CliTest, EvalPairwisePerfectMetric) {
  // The first caption repeats the image exactly; the second is orthogonal to it.
  WriteTensor(Path("img.reof"), FeatureTensor(2, 2, {1, 0, 0, 1}));
  WriteTensor(Path("good.reof"), FeatureTensor(2, 2, {1, 0, 0, 1}));
  WriteTensor(Path("bad.reof"), FeatureTensor(1, 2, {1, -1}));
  std::vector<std::string> lines;
  const char* cats[] = {"HC", "HI", "HM", "MM"};
  for (int i = 0; i < 4; ++i) {
    for (const char* side : {"first", "second"}) {
      const std::string words = std::string(side) == "first" ? "good.reof" : "bad.reof";
      lines.push_back(R"({"instance_id":")" + std::string(cats[i]) + side +
                      R"(","image_tensor":"img.reof","candidate_words":")" + words +
                      R"(","judgment":{"pair_id":"p)" + std::to_string(i) +
                      R"(","position":")" + side + R"(","category":")" + cats[i] +
                      R"(","human_choice":"first"}})");
    }
  }
  WriteLines("m.jsonl", lines);
  const RunResult r = Run("eval-pairwise --modes image --manifest " + Quoted("m.jsonl") +
                          " --out " + Quoted("pw.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : ParseCsv(Slurp(Path("pw.csv")))) {
    if (row[0] == "image.relevance") EXPECT_EQ(row[3], "100") << row[1];
  }
}

class ValidateCliTest : public CliTest {
 protected:
  // Writes one instance whose truths are derived from the machine residuals.
  void Instance(const std::string& id, bool orthogonal, bool with_truths,
                std::vector<std::string>& lines) {
    std::mt19937_64 rng(std::hash<std::string>{}(id));
    const auto image = testing::ToTensor(oracle::RandomMatrix(rng, 3, 4));
    const auto words = testing::ToTensor(oracle::RandomMatrix(rng, 5, 4));
    WriteTensor(Path(id + "_img.reof"), image);
    WriteTensor(Path(id + "_cand.reof"), words);
    const auto ctx = ComputeContextFeatures(image, words, AttentionConfig{});
    ErrorVectors e = ComputeErrorVectors(ctx.tensor, image);
    if (orthogonal) {
      // (x0,x1,x2,x3) -> (-x1,x0,-x3,x2) is orthogonal to the input.
      for (FeatureTensor* t : {&e.extra, &e.missing}) {
        std::vector<float> v;
        for (std::size_t i = 0; i < t->rows(); ++i) {
          const auto r = t->row(i);
          v.insert(v.end(), {-r[1], r[0], -r[3], r[2]});
        }
        *t = FeatureTensor(t->rows(), t->cols(), v);
      }
    }
    std::string extra;
    if (with_truths) {
      WriteTensor(Path(id + "_te.reof"), e.extra);
      WriteTensor(Path(id + "_tm.reof"), e.missing);
      extra = R"(,"true_extra":")" + id + R"(_te.reof","true_missing":")" + id + "_tm.reof\"";
    }
    lines.push_back(R"({"instance_id":")" + id + R"(","image_tensor":")" + id +
                    R"(_img.reof","candidate_words":")" + id + "_cand.reof\"" + extra + "}");
  }
};

TEST_F(ValidateCliTest, ExactTruthsScoreOne) {
  std::vector<std::string> lines;
  Instance("a", false, true, lines);
  Instance("b", false, true, lines);
  WriteLines("m.jsonl", lines);
  const RunResult r =
      Run("validate-errors --manifest " + Quoted("m.jsonl") + " --out " + Quoted("v.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = ParseCsv(Slurp(Path("v.csv")));
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_NEAR(std::stod(rows[i][1]), 1.0, 1e-6);
    EXPECT_NEAR(std::stod(rows[i][2]), 1.0, 1e-6);
  }
  EXPECT_EQ(rows[1][3], "0");
}

TEST_F(ValidateCliTest, OrthogonalTruthsAreFlaggedAndBareRecordsSkipped) {
  std::vector<std::string> lines;
  Instance("orth", true, true, lines);
  Instance("bare", false, false, lines);
  WriteLines("m.jsonl", lines);
  const RunResult r =
      Run("validate-errors --manifest " + Quoted("m.jsonl") + " --out " + Quoted("v.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("bare"), std::string::npos) << r.err;
  const auto rows = ParseCsv(Slurp(Path("v.csv")));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "orth");
  EXPECT_NEAR(std::stod(rows[1][1]), 0.0, 1e-6);
  EXPECT_NEAR(std::stod(rows[1][2]), 0.0, 1e-6);
  EXPECT_EQ(rows[1][3], "1");
}

TEST_F(CliTest, GenSyntheticIsDeterministic) {
  const fs::path a = Synthetic("a", "--seed 42");
  const fs::path b = Synthetic("b", "--seed 42");
  EXPECT_EQ(Slurp(a), Slurp(b));
  for (const auto& entry : fs::directory_iterator(a.parent_path() / "tensors")) {
    EXPECT_EQ(Slurp(entry.path()),
              Slurp(b.parent_path() / "tensors" / entry.path().filename()))
        << entry.path().filename();
  }
  EXPECT_EQ(Run("gen-synthetic --scenes 2").code, 2);
}

}  // namespace
}  // namespace reo
