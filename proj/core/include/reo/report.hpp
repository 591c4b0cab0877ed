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

#ifndef REO_REPORT_HPP_
#define REO_REPORT_HPP_

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reo/harness.hpp"
#include "reo/scoring.hpp"

namespace reo {

// Shortest round-trippable-enough form used in every CSV ("%.10g").
std::string FormatNumber(double v);
// Two decimals, half away from zero.
std::string FormatPercent(double v);
// RFC 4180 quoting when the field needs it.
std::string CsvField(const std::string& field);

inline constexpr const char* kScoresCsvHeader =
    "instance_id,mode,relevance,extraness,omission";

void WriteScoresCsv(std::ostream& out, std::span<const InstanceScores> scores);

// Max-min normalizes each (mode, axis) column across the corpus.
std::vector<InstanceScores> NormalizeScores(std::span<const InstanceScores> scores);

// "<mode>.<axis>" names for every requested mode, e.g. "image.omission".
std::vector<std::string> MetricNames(std::span<const GroundTruthMode> modes);
// Flattens one instance's scores into metric-name -> value.
std::map<std::string, double> ScoreMap(const InstanceScores& scores);

inline constexpr const char* kCorrelationCsvHeader = "metric,n,tau,p_value,status";
std::string RenderCorrelationTable(std::span<const CorrelationRow> rows);
void WriteCorrelationCsv(std::ostream& out, std::span<const CorrelationRow> rows);

using NamedAccuracy = std::pair<std::string, PairwiseAccuracy>;
inline constexpr const char* kPairwiseCsvHeader = "metric,category,pairs,accuracy";
std::string RenderPairwiseTable(std::span<const NamedAccuracy> rows);
void WritePairwiseCsv(std::ostream& out, std::span<const NamedAccuracy> rows);

inline constexpr const char* kValidationCsvHeader =
    "instance_id,extra_similarity,missing_similarity,flagged";
std::string RenderValidationReport(const ValidationReport& report);
void WriteValidationCsv(std::ostream& out, const ValidationReport& report);

}  // namespace reo

#endif  // REO_REPORT_HPP_
