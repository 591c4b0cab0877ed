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

#include "reo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "reo/error.hpp"

namespace reo {
namespace {

void AddTieGroup(std::int64_t t, TauStatistics::TieMoments* m) {
  const double td = static_cast<double>(t);
  m->pairs += td * (td - 1.0);
  m->triples += td * (td - 1.0) * (td - 2.0);
  m->variance += td * (td - 1.0) * (2.0 * td + 5.0);
}

// Sorts `v` ascending and returns the number of strict inversions.
std::int64_t CountInversions(std::vector<double>& v) {
  std::vector<double> buffer(v.size());
  std::int64_t swaps = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, v.size());
      const std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += static_cast<std::int64_t>(mid - i);
          buffer[k++] = v[j++];
        } else {
          buffer[k++] = v[i++];
        }
      }
      while (i < mid) buffer[k++] = v[i++];
      while (j < hi) buffer[k++] = v[j++];
    }
    std::swap(v, buffer);
  }
  return swaps;
}

double CategoryMean(const PairwiseAccuracy& acc) {
  std::vector<double> present;
  for (const auto& c : acc.categories) {
    if (c.percent) present.push_back(*c.percent);
  }
  return AggregateAll(present);
}

double RowCosineAgreement(const FeatureTensor& identified, const FeatureTensor& truth) {
  double total = 0.0;
  for (std::size_t i = 0; i < identified.rows(); ++i) {
    const double ni = Norm(identified.row(i));
    const double nt = Norm(truth.row(i));
    if (ni == 0.0 && nt == 0.0) {
      total += 1.0;
    } else {
      total += Cosine(identified.row(i), truth.row(i));
    }
  }
  return identified.rows() == 0 ? 0.0 : total / static_cast<double>(identified.rows());
}

void CheckSameShape(const FeatureTensor& a, const FeatureTensor& b,
                    const std::string& id, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw UsageError("validation record '" + id + "': " + what +
                     " shape mismatch (" + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                     "x" + std::to_string(b.cols()) + ")");
  }
}

}  // namespace

TauStatistics ComputeTauStatistics(std::span<const double> xs,
                                   std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw UsageError("kendall tau: length mismatch (" + std::to_string(xs.size()) +
                     " vs " + std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 2) throw UsageError("kendall tau: need at least 2 observations");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw UsageError("kendall tau: non-finite observation at index " + std::to_string(i));
    }
  }

  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return xs[a] != xs[b] ? xs[a] < xs[b] : ys[a] < ys[b];
  });

  TauStatistics s;
  s.n = static_cast<std::int64_t>(n);
  std::int64_t tied_x = 0, tied_xy = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && xs[order[j]] == xs[order[i]]) ++j;
    const auto t = static_cast<std::int64_t>(j - i);
    tied_x += t * (t - 1) / 2;
    AddTieGroup(t, &s.x_ties);
    for (std::size_t k = i; k < j;) {
      std::size_t l = k + 1;
      while (l < j && ys[order[l]] == ys[order[k]]) ++l;
      const auto u = static_cast<std::int64_t>(l - k);
      tied_xy += u * (u - 1) / 2;
      k = l;
    }
    i = j;
  }

  std::vector<double> y_sorted(n);
  for (std::size_t i = 0; i < n; ++i) y_sorted[i] = ys[order[i]];
  s.discordant = CountInversions(y_sorted);

  std::int64_t tied_y = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && y_sorted[j] == y_sorted[i]) ++j;
    const auto t = static_cast<std::int64_t>(j - i);
    tied_y += t * (t - 1) / 2;
    AddTieGroup(t, &s.y_ties);
    i = j;
  }

  s.ties_both = tied_xy;
  s.ties_x_only = tied_x - tied_xy;
  s.ties_y_only = tied_y - tied_xy;
  s.concordant = s.total_pairs() - tied_x - tied_y + tied_xy - s.discordant;
  return s;
}

double TauFromStatistics(const TauStatistics& stats, TauVariant variant) {
  const double n0 = static_cast<double>(stats.total_pairs());
  const double score = static_cast<double>(stats.concordant - stats.discordant);
  if (variant == TauVariant::kA) {
    if (n0 == 0.0) throw UndefinedCorrelation("kendall tau: no pairs");
    return score / n0;
  }
  const double n1 = static_cast<double>(stats.ties_x_only + stats.ties_both);
  const double n2 = static_cast<double>(stats.ties_y_only + stats.ties_both);
  const double denom = (n0 - n1) * (n0 - n2);
  if (denom <= 0.0) {
    throw UndefinedCorrelation("kendall tau-b undefined: one side is entirely tied");
  }
  return score / std::sqrt(denom);
}

double KendallTau(std::span<const double> xs, std::span<const double> ys,
                  TauVariant variant) {
  return TauFromStatistics(ComputeTauStatistics(xs, ys), variant);
}

TauTest KendallTauTest(std::span<const double> xs, std::span<const double> ys,
                       TauVariant variant) {
  TauTest out;
  out.stats = ComputeTauStatistics(xs, ys);
  out.tau = TauFromStatistics(out.stats, variant);

  const double n = static_cast<double>(out.stats.n);
  const auto& tx = out.stats.x_ties;
  const auto& ty = out.stats.y_ties;
  double var = (n * (n - 1.0) * (2.0 * n + 5.0) - tx.variance - ty.variance) / 18.0 +
               tx.pairs * ty.pairs / (2.0 * n * (n - 1.0));
  if (n > 2.0) var += tx.triples * ty.triples / (9.0 * n * (n - 1.0) * (n - 2.0));
  const double score =
      static_cast<double>(out.stats.concordant - out.stats.discordant);
  out.p_value = var > 0.0 ? std::erfc(std::abs(score) / std::sqrt(2.0 * var)) : 1.0;
  return out;
}

std::vector<CorrelationRow> CorrelationReport(std::span<const RatedInstance> instances,
                                              std::span<const std::string> metrics,
                                              TauVariant variant) {
  if (instances.size() < 2) {
    throw UsageError("correlation report: need at least 2 rated instances, got " +
                     std::to_string(instances.size()));
  }
  std::vector<double> ratings;
  ratings.reserve(instances.size());
  for (const RatedInstance& r : instances) ratings.push_back(r.human_rating);

  std::vector<CorrelationRow> rows;
  for (const std::string& metric : metrics) {
    std::vector<double> values;
    values.reserve(instances.size());
    for (const RatedInstance& r : instances) {
      const auto it = r.scores.find(metric);
      if (it == r.scores.end()) {
        throw UsageError("instance '" + r.instance_id + "' has no score for metric '" +
                         metric + "'");
      }
      values.push_back(it->second);
    }
    CorrelationRow row{metric, instances.size(), std::nullopt};
    try {
      row.result = KendallTauTest(values, ratings, variant);
    } catch (const UndefinedCorrelation&) {
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string_view ToString(PairCategory category) {
  switch (category) {
    case PairCategory::kHC: return "HC";
    case PairCategory::kHI: return "HI";
    case PairCategory::kHM: return "HM";
    case PairCategory::kMM: return "MM";
  }
  return "??";
}

PairCategory ParsePairCategory(std::string_view name) {
  for (PairCategory c : kPairCategories) {
    if (ToString(c) == name) return c;
  }
  throw UsageError("unknown pair category '" + std::string(name) + "'");
}

std::string_view ToString(PairSide side) {
  return side == PairSide::kFirst ? "first" : "second";
}

PairSide ParsePairSide(std::string_view name) {
  if (name == "first") return PairSide::kFirst;
  if (name == "second") return PairSide::kSecond;
  throw UsageError("pair side must be 'first' or 'second', got '" +
                   std::string(name) + "'");
}

PairwiseAccuracy ComputePairwiseAccuracy(std::span<const CaptionPair> pairs,
                                         const std::string& metric) {
  PairwiseAccuracy acc;
  for (const CaptionPair& p : pairs) {
    const auto first = p.scores_first.find(metric);
    const auto second = p.scores_second.find(metric);
    if (first == p.scores_first.end() || second == p.scores_second.end()) {
      throw UsageError("pair '" + p.pair_id + "' has no score for metric '" + metric + "'");
    }
    auto& cat = acc.categories[static_cast<std::size_t>(p.category)];
    ++cat.pairs;
    if (first->second == second->second) {
      cat.credit += 0.5;
    } else {
      const PairSide preferred =
          first->second > second->second ? PairSide::kFirst : PairSide::kSecond;
      if (preferred == p.human_choice) cat.credit += 1.0;
    }
  }
  bool any = false;
  for (auto& cat : acc.categories) {
    if (cat.pairs > 0) {
      cat.percent = 100.0 * cat.credit / static_cast<double>(cat.pairs);
      any = true;
    }
  }
  if (any) acc.all = CategoryMean(acc);
  return acc;
}

double AggregateAll(std::span<const double> category_percents) {
  if (category_percents.empty()) {
    throw UsageError("ALL aggregation: no category accuracies");
  }
  double total = 0.0;
  for (double v : category_percents) total += v;
  return total / static_cast<double>(category_percents.size());
}

ValidationReport ValidateErrorIdentification(std::span<const ValidationRecord> records,
                                             double threshold) {
  if (records.empty()) throw UsageError("error validation: no records");
  ValidationReport report;
  report.threshold = threshold;
  double extra_sum = 0.0, missing_sum = 0.0;
  std::size_t extra_n = 0, missing_n = 0;
  for (const ValidationRecord& rec : records) {
    CheckSameShape(rec.identified.extra, rec.identified.missing, rec.instance_id,
                   "identified extra/missing");
    if (!rec.true_extra && !rec.true_missing) {
      report.skipped.push_back(rec.instance_id);
      continue;
    }
    ValidationResult res{rec.instance_id, std::nullopt, std::nullopt, false};
    if (rec.true_extra) {
      CheckSameShape(rec.identified.extra, *rec.true_extra, rec.instance_id, "extra");
      res.extra_similarity = RowCosineAgreement(rec.identified.extra, *rec.true_extra);
      extra_sum += *res.extra_similarity;
      ++extra_n;
      if (*res.extra_similarity < threshold) res.flagged = true;
    }
    if (rec.true_missing) {
      CheckSameShape(rec.identified.missing, *rec.true_missing, rec.instance_id, "missing");
      res.missing_similarity =
          RowCosineAgreement(rec.identified.missing, *rec.true_missing);
      missing_sum += *res.missing_similarity;
      ++missing_n;
      if (*res.missing_similarity < threshold) res.flagged = true;
    }
    report.records.push_back(std::move(res));
  }
  if (extra_n > 0) report.mean_extra = extra_sum / static_cast<double>(extra_n);
  if (missing_n > 0) report.mean_missing = missing_sum / static_cast<double>(missing_n);
  return report;
}

std::vector<double> MinMaxNormalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.5);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - *lo) / range;
  }
  return out;
}

}  // namespace reo
