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

#include "reo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "reo/error.hpp"
#include "reo/featurepack.hpp"

namespace reo {
namespace {

using Vec = std::vector<double>;

class SceneRng {
 public:
  SceneRng(std::uint64_t seed, std::size_t scene) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(scene)};
    engine_.seed(seq);
  }

  Vec UnitVector(std::size_t dim) {
    Vec v(dim);
    for (double& x : v) x = normal_(engine_);
    Normalize(v);
    return v;
  }

  std::mt19937_64& engine() { return engine_; }

  static void Normalize(Vec& v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    const double inv = 1.0 / std::sqrt(sq);
    for (double& x : v) x *= inv;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// unit(base + scale * unit(noise)); unit(base) when scale == 0.
Vec Perturb(const Vec& base, double scale, SceneRng& rng) {
  Vec out = base;
  if (scale > 0.0) {
    const Vec noise = rng.UnitVector(base.size());
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += scale * noise[d];
  }
  SceneRng::Normalize(out);
  return out;
}

std::shared_ptr<const FeatureTensor> Pack(const std::vector<Vec>& rows, std::size_t dim) {
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (const Vec& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return std::make_shared<const FeatureTensor>(
      FeatureTensor::FromDoubles(rows.size(), dim, flat));
}

double RatingFor(int level, int levels) {
  return levels > 1 ? 5.0 - 4.0 * level / (levels - 1) : 5.0;
}

}  // namespace

std::string_view ToString(CorruptionSchedule schedule) {
  return schedule == CorruptionSchedule::kExtra ? "extra" : "deletion";
}

CorruptionSchedule ParseCorruptionSchedule(std::string_view name) {
  if (name == "extra") return CorruptionSchedule::kExtra;
  if (name == "deletion" || name == "omission") return CorruptionSchedule::kDeletion;
  throw UsageError("unknown corruption schedule '" + std::string(name) + "'");
}

void SyntheticConfig::Validate() const {
  if (levels < 1) throw UsageError("synthetic: levels must be >= 1");
  if (regions == 0 || dim == 0 || concepts == 0) {
    throw UsageError("synthetic: regions, dim and concepts must be positive");
  }
  if (references == 0) throw UsageError("synthetic: need at least one reference");
  if (schedule == CorruptionSchedule::kDeletion &&
      concepts <= static_cast<std::size_t>(levels - 1)) {
    throw UsageError("synthetic: deletion schedule needs more concepts than the top level");
  }
  if (pairs && levels < 2) throw UsageError("synthetic: pairs need at least 2 levels");
  if (region_noise < 0.0 || paraphrase_noise < 0.0) {
    throw UsageError("synthetic: noise scales must be >= 0");
  }
}

std::vector<SyntheticInstance> GenerateSynthetic(const SyntheticConfig& config) {
  config.Validate();
  std::vector<SyntheticInstance> out;
  for (std::size_t s = 0; s < config.scenes; ++s) {
    SceneRng rng(config.seed, s);
    std::vector<Vec> concepts;
    for (std::size_t c = 0; c < config.concepts; ++c) {
      concepts.push_back(rng.UnitVector(config.dim));
    }
    std::vector<Vec> regions;
    for (std::size_t i = 0; i < config.regions; ++i) {
      regions.push_back(Perturb(concepts[i % config.concepts], config.region_noise, rng));
    }
    std::vector<std::vector<Vec>> references(config.references);
    for (auto& words : references) {
      for (const Vec& c : concepts) words.push_back(Perturb(c, config.paraphrase_noise, rng));
    }
    std::vector<Vec> noise_words;
    const std::size_t max_noise =
        config.noise_words_per_level * static_cast<std::size_t>(config.levels - 1);
    for (std::size_t k = 0; k < max_noise; ++k) noise_words.push_back(rng.UnitVector(config.dim));
    std::vector<std::size_t> deletion_order(config.concepts);
    for (std::size_t c = 0; c < config.concepts; ++c) deletion_order[c] = c;
    std::shuffle(deletion_order.begin(), deletion_order.end(), rng.engine());

    const auto image = Pack(regions, config.dim);
    std::vector<std::shared_ptr<const FeatureTensor>> ref_tensors;
    for (const auto& words : references) ref_tensors.push_back(Pack(words, config.dim));

    const auto candidate_at = [&](int level) {
      std::vector<Vec> words;
      if (config.schedule == CorruptionSchedule::kExtra) {
        words = references[0];
        const std::size_t k = config.noise_words_per_level * static_cast<std::size_t>(level);
        words.insert(words.end(), noise_words.begin(), noise_words.begin() + k);
      } else {
        std::vector<bool> dropped(config.concepts, false);
        for (int l = 0; l < level; ++l) dropped[deletion_order[l]] = true;
        for (std::size_t c = 0; c < config.concepts; ++c) {
          if (!dropped[c]) words.push_back(references[0][c]);
        }
      }
      return Pack(words, config.dim);
    };

    const std::string scene_id = "s" + std::to_string(s);
    if (!config.pairs) {
      for (int level = 0; level < config.levels; ++level) {
        out.push_back({scene_id + "-l" + std::to_string(level), s, level, image,
                       candidate_at(level), ref_tensors,
                       RatingJudgment{RatingFor(level, config.levels), 1.0, 5.0}});
      }
      continue;
    }
    std::uniform_int_distribution<int> pick(0, config.levels - 1);
    const int a = pick(rng.engine());
    int b = pick(rng.engine());
    while (b == a) b = pick(rng.engine());
    const PairCategory category = kPairCategories[s % kPairCategories.size()];
    const PairSide choice = a < b ? PairSide::kFirst : PairSide::kSecond;
    const std::string pair_id = "p" + std::to_string(s);
    out.push_back({scene_id + "-a", s, a, image, candidate_at(a), ref_tensors,
                   PairJudgment{pair_id, PairSide::kFirst, category, choice}});
    out.push_back({scene_id + "-b", s, b, image, candidate_at(b), ref_tensors,
                   PairJudgment{pair_id, PairSide::kSecond, category, choice}});
  }
  return out;
}

std::vector<ScoringInput> ToScoringInputs(std::span<const SyntheticInstance> instances) {
  std::vector<ScoringInput> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    out.push_back({inst.instance_id, inst.image, inst.candidate_words, inst.reference_words});
  }
  return out;
}

std::filesystem::path WriteSyntheticCorpus(const std::filesystem::path& dir,
                                           const SyntheticConfig& config) {
  const std::vector<SyntheticInstance> instances = GenerateSynthetic(config);
  std::error_code ec;
  std::filesystem::create_directories(dir / "tensors", ec);
  if (ec) throw IoError("cannot create '" + (dir / "tensors").string() + "': " + ec.message());

  const std::filesystem::path manifest_path = dir / "manifest.jsonl";
  std::ofstream manifest(manifest_path, std::ios::trunc);
  if (!manifest) throw IoError("cannot open '" + manifest_path.string() + "' for writing");

  std::size_t written_scene = static_cast<std::size_t>(-1);
  for (const auto& inst : instances) {
    const std::string scene = "tensors/s" + std::to_string(inst.scene);
    if (inst.scene != written_scene) {
      WriteTensor(dir / (scene + "_image.reof"), *inst.image);
      for (std::size_t r = 0; r < inst.reference_words.size(); ++r) {
        WriteTensor(dir / (scene + "_ref" + std::to_string(r) + ".reof"),
                    *inst.reference_words[r]);
      }
      written_scene = inst.scene;
    }
    const std::string candidate = "tensors/" + inst.instance_id + "_candidate.reof";
    WriteTensor(dir / candidate, *inst.candidate_words);

    InstanceManifest m;
    m.instance_id = inst.instance_id;
    m.image_tensor = scene + "_image.reof";
    m.candidate_words = candidate;
    for (std::size_t r = 0; r < inst.reference_words.size(); ++r) {
      m.reference_words.emplace_back(scene + "_ref" + std::to_string(r) + ".reof");
    }
    m.judgment = inst.judgment;
    m.corruption = Corruption{std::string(ToString(config.schedule)), inst.level};
    manifest << ManifestLine(m) << '\n';
  }
  if (!manifest) throw IoError("failed writing '" + manifest_path.string() + "'");
  return manifest_path;
}

}  // namespace reo
