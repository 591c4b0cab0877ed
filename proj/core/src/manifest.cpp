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

#include "reo/manifest.hpp"

#include <fstream>
#include <map>
#include <set>
#include <string>

#include "json.hpp"
#include "reo/error.hpp"
#include "reo/featurepack.hpp"

namespace reo {
namespace {

using json = nlohmann::json;

[[noreturn]] void LineError(std::size_t line, const std::string& what) {
  throw CorpusError("manifest line " + std::to_string(line) + ": " + what);
}

std::string RequireString(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) LineError(line, std::string("missing required field '") + key + "'");
  if (!it->is_string() || it->get<std::string>().empty()) {
    LineError(line, std::string("field '") + key + "' must be a non-empty string");
  }
  return it->get<std::string>();
}

std::optional<std::string> OptionalString(const json& obj, const char* key,
                                          std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) LineError(line, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

Judgment ParseJudgment(const json& j, const std::string& id, std::size_t line) {
  if (j.is_null()) return std::monostate{};
  if (!j.is_object()) LineError(line, "field 'judgment' must be an object");
  if (j.contains("rating")) {
    RatingJudgment r;
    if (!j["rating"].is_number()) LineError(line, "judgment.rating must be a number");
    r.rating = j["rating"].get<double>();
    if (j.contains("scale")) {
      const json& s = j["scale"];
      if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
        LineError(line, "judgment.scale must be [min, max]");
      }
      r.scale_min = s[0].get<double>();
      r.scale_max = s[1].get<double>();
    }
    if (!(r.scale_min < r.scale_max)) LineError(line, "judgment.scale must have min < max");
    if (r.rating < r.scale_min || r.rating > r.scale_max) {
      LineError(line, "instance '" + id + "': rating " + std::to_string(r.rating) +
                          " outside scale [" + std::to_string(r.scale_min) + ", " +
                          std::to_string(r.scale_max) + "]");
    }
    return r;
  }
  if (j.contains("pair_id")) {
    PairJudgment p;
    p.pair_id = RequireString(j, "pair_id", line);
    try {
      p.position = ParsePairSide(RequireString(j, "position", line));
      p.category = ParsePairCategory(RequireString(j, "category", line));
      p.human_choice = ParsePairSide(RequireString(j, "human_choice", line));
    } catch (const UsageError& e) {
      LineError(line, "pair '" + p.pair_id + "': " + e.what());
    }
    return p;
  }
  LineError(line, "judgment must carry either 'rating' or 'pair_id'");
}

std::filesystem::path Resolve(const std::filesystem::path& root,
                              const std::filesystem::path& p) {
  return p.is_absolute() ? p : root / p;
}

void ValidatePairs(const std::vector<LoadedInstance>& instances) {
  struct Members {
    std::vector<const PairJudgment*> sides;
  };
  std::map<std::string, Members> pairs;
  for (const auto& inst : instances) {
    if (const auto* p = std::get_if<PairJudgment>(&inst.manifest.judgment)) {
      pairs[p->pair_id].sides.push_back(p);
    }
  }
  for (const auto& [id, m] : pairs) {
    if (m.sides.size() != 2) {
      throw CorpusError("pair '" + id + "' has " + std::to_string(m.sides.size()) +
                        " members, expected 2");
    }
    const PairJudgment& a = *m.sides[0];
    const PairJudgment& b = *m.sides[1];
    if (a.position == b.position) {
      throw CorpusError("pair '" + id + "' needs one 'first' and one 'second' member");
    }
    if (a.category != b.category || a.human_choice != b.human_choice) {
      throw CorpusError("pair '" + id + "' members disagree on category or human_choice");
    }
  }
}

}  // namespace

std::vector<InstanceManifest> ParseManifest(std::istream& in) {
  std::vector<InstanceManifest> out;
  std::set<std::string> ids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      LineError(line, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) LineError(line, "expected a JSON object");

    InstanceManifest m;
    m.instance_id = RequireString(obj, "instance_id", line);
    if (!ids.insert(m.instance_id).second) {
      LineError(line, "duplicate instance_id '" + m.instance_id + "'");
    }
    m.image_tensor = RequireString(obj, "image_tensor", line);
    m.candidate_words = RequireString(obj, "candidate_words", line);
    if (const auto it = obj.find("reference_words"); it != obj.end() && !it->is_null()) {
      if (!it->is_array()) LineError(line, "field 'reference_words' must be an array");
      for (const json& p : *it) {
        if (!p.is_string() || p.get<std::string>().empty()) {
          LineError(line, "reference_words entries must be non-empty strings");
        }
        m.reference_words.emplace_back(p.get<std::string>());
      }
    }
    if (const auto it = obj.find("judgment"); it != obj.end()) {
      m.judgment = ParseJudgment(*it, m.instance_id, line);
    }
    if (auto p = OptionalString(obj, "true_extra", line)) m.true_extra = *p;
    if (auto p = OptionalString(obj, "true_missing", line)) m.true_missing = *p;
    if (const auto it = obj.find("corruption"); it != obj.end() && !it->is_null()) {
      if (!it->is_object() || !it->contains("kind") || !it->contains("level") ||
          !(*it)["kind"].is_string() || !(*it)["level"].is_number_integer()) {
        LineError(line, "field 'corruption' must be {\"kind\": string, \"level\": int}");
      }
      m.corruption = Corruption{(*it)["kind"].get<std::string>(),
                                (*it)["level"].get<int>()};
    }
    m.checkpoint = OptionalString(obj, "checkpoint", line);
    out.push_back(std::move(m));
  }
  if (in.bad()) throw IoError("failed reading manifest");
  return out;
}

std::string ManifestLine(const InstanceManifest& m) {
  json obj = json::object();
  obj["instance_id"] = m.instance_id;
  obj["image_tensor"] = m.image_tensor.generic_string();
  obj["candidate_words"] = m.candidate_words.generic_string();
  json refs = json::array();
  for (const auto& r : m.reference_words) refs.push_back(r.generic_string());
  obj["reference_words"] = refs;
  if (const auto* r = std::get_if<RatingJudgment>(&m.judgment)) {
    obj["judgment"] = {{"rating", r->rating}, {"scale", {r->scale_min, r->scale_max}}};
  } else if (const auto* p = std::get_if<PairJudgment>(&m.judgment)) {
    obj["judgment"] = {{"pair_id", p->pair_id},
                       {"position", std::string(ToString(p->position))},
                       {"category", std::string(ToString(p->category))},
                       {"human_choice", std::string(ToString(p->human_choice))}};
  }
  if (m.true_extra) obj["true_extra"] = m.true_extra->generic_string();
  if (m.true_missing) obj["true_missing"] = m.true_missing->generic_string();
  if (m.corruption) {
    obj["corruption"] = {{"kind", m.corruption->kind}, {"level", m.corruption->level}};
  }
  if (m.checkpoint) obj["checkpoint"] = *m.checkpoint;
  return obj.dump();
}

Corpus LoadManifest(const std::filesystem::path& path, unsigned jobs) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  Corpus corpus;
  corpus.root = path.parent_path();
  std::vector<InstanceManifest> records = ParseManifest(in);

  // Unique tensor paths, each owned by the first instance that names it.
  std::map<std::filesystem::path, std::size_t> slot_of;
  std::vector<std::filesystem::path> paths;
  std::vector<std::string> owner;
  const auto slot = [&](const std::filesystem::path& rel, const std::string& id) {
    const std::filesystem::path full = Resolve(corpus.root, rel).lexically_normal();
    const auto [it, fresh] = slot_of.emplace(full, paths.size());
    if (fresh) {
      paths.push_back(full);
      owner.push_back(id);
    }
    return it->second;
  };
  for (const auto& m : records) {
    slot(m.image_tensor, m.instance_id);
    slot(m.candidate_words, m.instance_id);
    for (const auto& r : m.reference_words) slot(r, m.instance_id);
    if (m.true_extra) slot(*m.true_extra, m.instance_id);
    if (m.true_missing) slot(*m.true_missing, m.instance_id);
  }

  std::vector<std::shared_ptr<const FeatureTensor>> tensors(paths.size());
  ParallelFor(paths.size(), jobs, [&](std::size_t i) {
    if (!std::filesystem::exists(paths[i])) {
      throw CorpusError("instance '" + owner[i] + "': tensor file '" +
                        paths[i].string() + "' does not exist");
    }
    try {
      tensors[i] = std::make_shared<const FeatureTensor>(ReadTensor(paths[i]));
    } catch (const FormatError& e) {
      throw CorpusError("instance '" + owner[i] + "': " + e.what());
    } catch (const DataError& e) {
      throw CorpusError("instance '" + owner[i] + "': " + e.what());
    }
  });

  const auto get = [&](const std::filesystem::path& rel) {
    return tensors[slot_of.at(Resolve(corpus.root, rel).lexically_normal())];
  };
  std::optional<std::pair<std::size_t, std::string>> dim;  // D and who set it
  const auto check_dim = [&](const FeatureTensor& t, const std::string& id,
                             const char* what) {
    if (t.rows() == 0) {
      throw CorpusError("instance '" + id + "': " + what + " tensor has no rows");
    }
    if (!dim) {
      dim.emplace(t.cols(), id);
    } else if (dim->first != t.cols()) {
      throw CorpusError("inconsistent feature dimension: instance '" + id + "' " + what +
                        " has D=" + std::to_string(t.cols()) + " but instance '" +
                        dim->second + "' has D=" + std::to_string(dim->first));
    }
  };

  for (auto& m : records) {
    LoadedInstance inst;
    inst.image = get(m.image_tensor);
    inst.candidate = get(m.candidate_words);
    check_dim(*inst.image, m.instance_id, "image");
    check_dim(*inst.candidate, m.instance_id, "candidate");
    for (const auto& r : m.reference_words) {
      inst.references.push_back(get(r));
      check_dim(*inst.references.back(), m.instance_id, "reference");
    }
    const auto check_error_tensor = [&](const FeatureTensor& t, const char* what) {
      if (t.rows() != inst.image->rows() || t.cols() != inst.image->cols()) {
        throw CorpusError("instance '" + m.instance_id + "': " + what + " tensor is " +
                          std::to_string(t.rows()) + "x" + std::to_string(t.cols()) +
                          ", expected " + std::to_string(inst.image->rows()) + "x" +
                          std::to_string(inst.image->cols()));
      }
    };
    if (m.true_extra) {
      inst.true_extra = get(*m.true_extra);
      check_error_tensor(*inst.true_extra, "true_extra");
    }
    if (m.true_missing) {
      inst.true_missing = get(*m.true_missing);
      check_error_tensor(*inst.true_missing, "true_missing");
    }
    inst.manifest = std::move(m);
    corpus.instances.push_back(std::move(inst));
  }
  ValidatePairs(corpus.instances);
  corpus.dim = dim ? dim->first : 0;
  return corpus;
}

std::vector<ScoringInput> ToScoringInputs(const Corpus& corpus) {
  std::vector<ScoringInput> out;
  out.reserve(corpus.instances.size());
  for (const auto& inst : corpus.instances) {
    out.push_back({inst.manifest.instance_id, inst.image, inst.candidate, inst.references});
  }
  return out;
}

}  // namespace reo
