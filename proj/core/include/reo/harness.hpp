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

#ifndef REO_HARNESS_HPP_
#define REO_HARNESS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reo/metrics.hpp"
#include "reo/tensor.hpp"

namespace reo {

// ---------------------------------------------------------------------------
// Rank correlation

// Pair counts behind Kendall's tau. Every one of the n(n-1)/2 pairs lands in
// exactly one bucket.
struct TauStatistics {
  std::int64_t n = 0;
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  std::int64_t ties_x_only = 0;
  std::int64_t ties_y_only = 0;
  std::int64_t ties_both = 0;

  // Tie-group moments used by the null variance: sum over groups of size t
  // of t(t-1), t(t-1)(t-2) and t(t-1)(2t+5).
  struct TieMoments {
    double pairs = 0.0;
    double triples = 0.0;
    double variance = 0.0;
  };
  TieMoments x_ties;
  TieMoments y_ties;

  std::int64_t total_pairs() const noexcept { return n * (n - 1) / 2; }

  friend bool operator==(const TauStatistics& a, const TauStatistics& b) {
    return a.n == b.n && a.concordant == b.concordant &&
           a.discordant == b.discordant && a.ties_x_only == b.ties_x_only &&
           a.ties_y_only == b.ties_y_only && a.ties_both == b.ties_both;
  }
};

enum class TauVariant { kA, kB };

// O(n log n) pair counting (sort by x, merge-sort y counting exchanges).
// Throws UsageError for mismatched lengths or n < 2.
TauStatistics ComputeTauStatistics(std::span<const double> xs,
                                   std::span<const double> ys);

// Tau from counts. Throws UndefinedCorrelation when the variant's
// denominator is zero (an entirely tied side for tau-b).
double TauFromStatistics(const TauStatistics& stats, TauVariant variant);

double KendallTau(std::span<const double> xs, std::span<const double> ys,
                  TauVariant variant = TauVariant::kB);

struct TauTest {
  double tau = 0.0;
  double p_value = 1.0;  // two-sided, normal approximation with tie correction
  TauStatistics stats;
};

TauTest KendallTauTest(std::span<const double> xs, std::span<const double> ys,
                       TauVariant variant = TauVariant::kB);

// ---------------------------------------------------------------------------
// Scoring-based datasets

struct RatedInstance {
  std::string instance_id;
  double human_rating = 0.0;
  std::map<std::string, double> scores;
};

struct CorrelationRow {
  std::string metric;
  std::size_t n = 0;
  std::optional<TauTest> result;  // empty: undefined (all ties)
};

// One row per metric, in the given order. Needs >= 2 instances; a metric
// missing from an instance is a UsageError.
std::vector<CorrelationRow> CorrelationReport(std::span<const RatedInstance> instances,
                                              std::span<const std::string> metrics,
                                              TauVariant variant = TauVariant::kB);

// ---------------------------------------------------------------------------
// Pairwise datasets

enum class PairCategory { kHC, kHI, kHM, kMM };
inline constexpr std::array<PairCategory, 4> kPairCategories = {
    PairCategory::kHC, PairCategory::kHI, PairCategory::kHM, PairCategory::kMM};

std::string_view ToString(PairCategory category);
// Throws UsageError for anything but HC, HI, HM, MM.
PairCategory ParsePairCategory(std::string_view name);

enum class PairSide { kFirst, kSecond };
std::string_view ToString(PairSide side);
PairSide ParsePairSide(std::string_view name);

struct CaptionPair {
  std::string pair_id;
  PairCategory category = PairCategory::kHC;
  PairSide human_choice = PairSide::kFirst;
  std::map<std::string, double> scores_first;
  std::map<std::string, double> scores_second;
};

struct PairwiseAccuracy {
  struct Category {
    std::size_t pairs = 0;
    double credit = 0.0;             // ties earn 0.5
    std::optional<double> percent;   // empty when pairs == 0
  };
  std::array<Category, 4> categories;  // indexed like kPairCategories
  std::optional<double> all;           // unweighted mean of present categories

  const Category& at(PairCategory c) const {
    return categories[static_cast<std::size_t>(c)];
  }
};

PairwiseAccuracy ComputePairwiseAccuracy(std::span<const CaptionPair> pairs,
                                         const std::string& metric);

// The ALL column: unweighted mean of category percentages.
double AggregateAll(std::span<const double> category_percents);

// ---------------------------------------------------------------------------
// Error-identification validation

struct ValidationRecord {
  std::string instance_id;
  ErrorVectors identified;
  std::optional<FeatureTensor> true_extra;
  std::optional<FeatureTensor> true_missing;
};

struct ValidationResult {
  std::string instance_id;
  std::optional<double> extra_similarity;
  std::optional<double> missing_similarity;
  bool flagged = false;  // a present channel fell below the threshold
};

struct ValidationReport {
  std::vector<ValidationResult> records;
  std::optional<double> mean_extra;
  std::optional<double> mean_missing;
  std::vector<std::string> skipped;  // records without any true-error tensor
  double threshold = 0.65;
};

inline constexpr double kDefaultValidationThreshold = 0.65;

// Mean over regions of cosine(identified row, true row), per channel. Two
// zero rows agree (1.0); one zero row scores 0. Shape disagreement is a
// UsageError; an empty record list is a UsageError.
ValidationReport ValidateErrorIdentification(std::span<const ValidationRecord> records,
                                             double threshold = kDefaultValidationThreshold);

// ---------------------------------------------------------------------------

// (v - min) / (max - min); all-equal input maps to 0.5.
std::vector<double> MinMaxNormalize(std::span<const double> values);

}  // namespace reo

#endif  // REO_HARNESS_HPP_
