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

#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <thread>

#include "CLI11.hpp"
#include "reo/attention.hpp"
#include "reo/error.hpp"
#include "reo/harness.hpp"
#include "reo/manifest.hpp"
#include "reo/report.hpp"
#include "reo/scoring.hpp"

namespace reo::cli {
namespace {

bool ToStdout(const std::string& path) { return path.empty() || path == "-"; }

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  return file;
}

void CheckWritten(const std::ofstream& file, const std::filesystem::path& path) {
  if (!file) throw IoError("failed writing '" + path.string() + "'");
}

std::filesystem::path NormalizedPath(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
  p.replace_extension();
  p += ".normalized" + ext;
  return p;
}

Corpus Load(const RunConfig& config) {
  if (config.manifest.empty()) throw UsageError("--manifest is required");
  return LoadManifest(config.manifest, config.jobs);
}

std::vector<InstanceScores> ScoreSubset(const Corpus& corpus,
                                        const std::vector<std::size_t>& which,
                                        const RunConfig& config) {
  const ScoringConfig scoring = config.ToScoringConfig();
  std::vector<ScoringInput> inputs;
  inputs.reserve(which.size());
  for (std::size_t i : which) {
    const auto& inst = corpus.instances[i];
    inputs.push_back({inst.manifest.instance_id, inst.image, inst.candidate, inst.references});
  }
  return ScoreBatch(inputs, scoring, config.jobs);
}

TauVariant ParseTauVariant(const std::string& name) {
  if (name == "b") return TauVariant::kB;
  if (name == "a") return TauVariant::kA;
  throw UsageError("--tau-variant must be 'a' or 'b'");
}

}  // namespace

ScoringConfig RunConfig::ToScoringConfig() const {
  ScoringConfig c;
  c.attention.lambda = lambda;
  c.covariance.kind = ParseCovarianceKind(covariance);
  c.covariance.absolute_ridge = ridge;
  c.covariance.shrinkage = shrinkage;
  c.relevance_similarity = ParseRelevanceSimilarity(relevance_sim);
  c.image_weight = image_weight;
  c.modes.clear();
  for (const std::string& m : modes) {
    const GroundTruthMode mode = ParseGroundTruthMode(m);
    if (std::find(c.modes.begin(), c.modes.end(), mode) == c.modes.end()) {
      c.modes.push_back(mode);
    }
  }
  c.Validate();
  return c;
}

void CmdScore(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const ScoringConfig scoring = config.ToScoringConfig();
  if (config.normalize && ToStdout(config.out)) {
    throw UsageError("--normalize needs --out so the companion file has a name");
  }
  const Corpus corpus = Load(config);
  const std::vector<InstanceScores> scores =
      ScoreBatch(ToScoringInputs(corpus), scoring, config.jobs);

  if (ToStdout(config.out)) {
    WriteScoresCsv(out, scores);
  } else {
    std::ofstream file = OpenOutput(config.out);
    WriteScoresCsv(file, scores);
    CheckWritten(file, config.out);
  }
  if (config.normalize) {
    const std::filesystem::path path = NormalizedPath(config.out);
    std::ofstream file = OpenOutput(path);
    WriteScoresCsv(file, NormalizeScores(scores));
    CheckWritten(file, path);
  }
  err << "reo: info: scored " << scores.size() << " instances\n";
}

void CmdEvalCorr(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const ScoringConfig scoring = config.ToScoringConfig();
  const TauVariant variant = ParseTauVariant(config.tau_variant);
  const Corpus corpus = Load(config);

  std::vector<std::size_t> rated;
  for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
    if (std::holds_alternative<RatingJudgment>(corpus.instances[i].manifest.judgment)) {
      rated.push_back(i);
    }
  }
  if (rated.size() < 2) {
    throw UsageError("eval-corr needs at least 2 rated instances, manifest has " +
                     std::to_string(rated.size()));
  }
  const std::vector<InstanceScores> scores = ScoreSubset(corpus, rated, config);

  std::vector<RatedInstance> instances;
  for (std::size_t k = 0; k < rated.size(); ++k) {
    const auto& m = corpus.instances[rated[k]].manifest;
    instances.push_back({m.instance_id, std::get<RatingJudgment>(m.judgment).rating,
                         ScoreMap(scores[k])});
  }
  const std::vector<std::string> metrics = MetricNames(scoring.modes);
  const std::vector<CorrelationRow> rows = CorrelationReport(instances, metrics, variant);

  out << RenderCorrelationTable(rows);
  if (!ToStdout(config.out)) {
    std::ofstream file = OpenOutput(config.out);
    WriteCorrelationCsv(file, rows);
    CheckWritten(file, config.out);
  }
  for (const auto& r : rows) {
    if (!r.result) err << "reo: warning: metric '" << r.metric << "' is constant; tau undefined\n";
  }
}

void CmdEvalPairwise(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const ScoringConfig scoring = config.ToScoringConfig();
  const Corpus corpus = Load(config);

  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
    if (std::holds_alternative<PairJudgment>(corpus.instances[i].manifest.judgment)) {
      members.push_back(i);
    }
  }
  if (members.empty()) throw UsageError("eval-pairwise: manifest has no pair-labelled instances");
  const std::vector<InstanceScores> scores = ScoreSubset(corpus, members, config);

  // Pairs in order of first appearance.
  std::vector<CaptionPair> pairs;
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const auto& j = std::get<PairJudgment>(corpus.instances[members[k]].manifest.judgment);
    auto [it, fresh] = index.emplace(j.pair_id, pairs.size());
    if (fresh) pairs.push_back({j.pair_id, j.category, j.human_choice, {}, {}});
    CaptionPair& p = pairs[it->second];
    (j.position == PairSide::kFirst ? p.scores_first : p.scores_second) = ScoreMap(scores[k]);
  }

  std::vector<NamedAccuracy> rows;
  for (const std::string& metric : MetricNames(scoring.modes)) {
    rows.emplace_back(metric, ComputePairwiseAccuracy(pairs, metric));
  }
  out << RenderPairwiseTable(rows);
  if (!ToStdout(config.out)) {
    std::ofstream file = OpenOutput(config.out);
    WritePairwiseCsv(file, rows);
    CheckWritten(file, config.out);
  }
  err << "reo: info: evaluated " << pairs.size() << " pairs\n";
}

void CmdValidateErrors(const RunConfig& config, std::ostream& out, std::ostream& err) {
  AttentionConfig attention;
  attention.lambda = config.lambda;
  attention.Validate();
  if (config.ground_truth != "image" && config.ground_truth != "reference") {
    throw UsageError("--ground-truth must be 'image' or 'reference'");
  }
  const bool use_reference = config.ground_truth == "reference";
  const Corpus corpus = Load(config);
  if (corpus.instances.empty()) throw UsageError("validate-errors: manifest is empty");

  std::vector<ValidationRecord> records(corpus.instances.size());
  ParallelFor(corpus.instances.size(), config.jobs, [&](std::size_t i) {
    const LoadedInstance& inst = corpus.instances[i];
    ValidationRecord& rec = records[i];
    rec.instance_id = inst.manifest.instance_id;
    if (inst.true_extra) rec.true_extra = *inst.true_extra;
    if (inst.true_missing) rec.true_missing = *inst.true_missing;
    if (!rec.true_extra && !rec.true_missing) {
      rec.identified = {FeatureTensor(inst.image->rows(), inst.image->cols()),
                        FeatureTensor(inst.image->rows(), inst.image->cols())};
      return;
    }
    const FeatureTensor context =
        ComputeContextFeatures(*inst.image, *inst.candidate, attention).tensor;
    if (use_reference) {
      if (inst.references.empty()) {
        throw UsageError("instance '" + rec.instance_id + "' has no references");
      }
      const FeatureTensor truth =
          ComputeContextFeatures(*inst.image, *inst.references.front(), attention,
                                 ContextSource::Reference(0))
              .tensor;
      rec.identified = ComputeErrorVectors(context, truth);
    } else {
      rec.identified = ComputeErrorVectors(context, *inst.image);
    }
  });

  const ValidationReport report = ValidateErrorIdentification(records, config.threshold);
  if (!report.skipped.empty()) {
    err << "reo: warning: skipped " << report.skipped.size()
        << " instances without true-error tensors:";
    for (const auto& id : report.skipped) err << ' ' << id;
    err << '\n';
  }
  out << RenderValidationReport(report);
  if (!ToStdout(config.out)) {
    std::ofstream file = OpenOutput(config.out);
    WriteValidationCsv(file, report);
    CheckWritten(file, config.out);
  }
}

void CmdGenSynthetic(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (ToStdout(config.out)) throw UsageError("gen-synthetic needs --out <directory>");
  const std::filesystem::path manifest = WriteSyntheticCorpus(config.out, config.synthetic);
  out << manifest.string() << '\n';
  err << "reo: info: wrote synthetic corpus (" << ToString(config.synthetic.schedule)
      << " schedule, seed " << config.synthetic.seed << ")\n";
}

namespace {

void AddScoringOptions(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--manifest", c.manifest, "JSON-lines instance manifest")->required();
  cmd->add_option("--modes", c.modes, "ground-truth modes: image,reference,combined")
      ->delimiter(',');
  cmd->add_option("--lambda", c.lambda, "attention smoothing factor")->capture_default_str();
  cmd->add_option("--cov", c.covariance, "covariance kind")
      ->check(CLI::IsMember({"identity", "diagonal", "shrinkage"}))
      ->capture_default_str();
  cmd->add_option("--ridge", c.ridge, "absolute ridge (default: 1e-3 x mean variance)");
  cmd->add_option("--shrinkage", c.shrinkage, "diagonal weight of the shrinkage blend")
      ->capture_default_str();
  cmd->add_option("--relevance-sim", c.relevance_sim, "relevance similarity")
      ->check(CLI::IsMember({"cosine", "clipped"}))
      ->capture_default_str();
  cmd->add_option("--image-weight", c.image_weight, "image share of combined mode")
      ->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();
}

}  // namespace

int Main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  config.jobs = std::max(1u, std::thread::hardware_concurrency());

  CLI::App app{"reo: relevance / extraness / omission caption scoring"};
  app.require_subcommand(1);

  auto* score = app.add_subcommand("score", "score every instance in a manifest");
  AddScoringOptions(score, config);
  score->add_option("--out", config.out, "scores CSV (default stdout)");
  score->add_flag("--normalize", config.normalize,
                  "also write a max-min normalized companion CSV");

  auto* corr = app.add_subcommand("eval-corr", "Kendall tau against human ratings");
  AddScoringOptions(corr, config);
  corr->add_option("--out", config.out, "CSV report path");
  corr->add_option("--tau-variant", config.tau_variant, "a or b")->capture_default_str();

  auto* pairwise = app.add_subcommand("eval-pairwise", "pairwise accuracy per category");
  AddScoringOptions(pairwise, config);
  pairwise->add_option("--out", config.out, "CSV report path");

  auto* validate = app.add_subcommand("validate-errors",
                                      "compare residual error vectors with true errors");
  validate->add_option("--manifest", config.manifest)->required();
  validate->add_option("--lambda", config.lambda)->capture_default_str();
  validate->add_option("--ground-truth", config.ground_truth, "image or reference")
      ->capture_default_str();
  validate->add_option("--threshold", config.threshold, "flag records below this similarity")
      ->capture_default_str();
  validate->add_option("--out", config.out, "CSV report path");
  validate->add_option("--jobs", config.jobs)->capture_default_str();

  auto* gen = app.add_subcommand("gen-synthetic", "write a seeded synthetic corpus");
  SyntheticConfig& s = config.synthetic;
  std::string schedule = "extra";
  gen->add_option("--out", config.out, "output directory")->required();
  gen->add_option("--seed", s.seed)->capture_default_str();
  gen->add_option("--scenes", s.scenes)->capture_default_str();
  gen->add_option("--levels", s.levels)->capture_default_str();
  gen->add_option("--regions", s.regions)->capture_default_str();
  gen->add_option("--dim", s.dim)->capture_default_str();
  gen->add_option("--concepts", s.concepts)->capture_default_str();
  gen->add_option("--references", s.references)->capture_default_str();
  gen->add_option("--region-noise", s.region_noise)->capture_default_str();
  gen->add_option("--paraphrase-noise", s.paraphrase_noise)->capture_default_str();
  gen->add_option("--noise-words", s.noise_words_per_level, "extra words per level")
      ->capture_default_str();
  gen->add_option("--schedule", schedule, "extra or deletion")
      ->check(CLI::IsMember({"extra", "deletion"}))
      ->capture_default_str();
  gen->add_flag("--pairs", s.pairs, "emit labelled pairs instead of every level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "reo: error[usage]: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (config.jobs == 0) throw UsageError("--jobs must be >= 1");
    if (*score) {
      CmdScore(config, out, err);
    } else if (*corr) {
      CmdEvalCorr(config, out, err);
    } else if (*pairwise) {
      CmdEvalPairwise(config, out, err);
    } else if (*validate) {
      CmdValidateErrors(config, out, err);
    } else if (*gen) {
      s.schedule = ParseCorruptionSchedule(schedule);
      CmdGenSynthetic(config, out, err);
    }
  } catch (const IoError& e) {
    err << "reo: error[" << e.kind() << "]: " << e.what() << '\n';
    return kExitEnvironment;
  } catch (const Error& e) {
    err << "reo: error[" << e.kind() << "]: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "reo: error[internal]: " << e.what() << '\n';
    return kExitEnvironment;
  }
  out.flush();
  return kExitOk;
}

}  // namespace reo::cli
