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

#include "reo/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace reo {
namespace {

constexpr const char* kAxes[] = {"relevance", "extraness", "omission"};

double Axis(const ReoScore& s, int axis) {
  switch (axis) {
    case 0: return s.relevance;
    case 1: return s.extraness;
    default: return s.omission;
  }
}

void SetAxis(ReoScore& s, int axis, double v) {
  switch (axis) {
    case 0: s.relevance = v; break;
    case 1: s.extraness = v; break;
    default: s.omission = v; break;
  }
}

std::size_t MetricColumnWidth(std::span<const std::string> names) {
  std::size_t w = 6;
  for (const auto& n : names) w = std::max(w, n.size());
  return w + 2;
}

}  // namespace

std::string FormatNumber(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string FormatPercent(double v) {
  const double rounded = std::round(v * 100.0) / 100.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", rounded);
  return buf;
}

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void WriteScoresCsv(std::ostream& out, std::span<const InstanceScores> scores) {
  out << kScoresCsvHeader << '\n';
  for (const InstanceScores& inst : scores) {
    for (const ReoScore& s : inst.scores) {
      out << CsvField(inst.instance_id) << ',' << ToString(s.mode) << ','
          << FormatNumber(s.relevance) << ',' << FormatNumber(s.extraness) << ','
          << FormatNumber(s.omission) << '\n';
    }
  }
}

std::vector<InstanceScores> NormalizeScores(std::span<const InstanceScores> scores) {
  std::vector<InstanceScores> out(scores.begin(), scores.end());
  if (out.empty()) return out;
  const std::size_t modes = out.front().scores.size();
  for (std::size_t m = 0; m < modes; ++m) {
    for (int axis = 0; axis < 3; ++axis) {
      std::vector<double> column;
      column.reserve(out.size());
      for (const auto& inst : out) column.push_back(Axis(inst.scores[m], axis));
      const std::vector<double> norm = MinMaxNormalize(column);
      for (std::size_t i = 0; i < out.size(); ++i) SetAxis(out[i].scores[m], axis, norm[i]);
    }
  }
  return out;
}

std::vector<std::string> MetricNames(std::span<const GroundTruthMode> modes) {
  std::vector<std::string> names;
  for (GroundTruthMode m : modes) {
    for (const char* axis : kAxes) names.push_back(std::string(ToString(m)) + "." + axis);
  }
  return names;
}

std::map<std::string, double> ScoreMap(const InstanceScores& scores) {
  std::map<std::string, double> out;
  for (const ReoScore& s : scores.scores) {
    const std::string prefix = std::string(ToString(s.mode)) + ".";
    for (int axis = 0; axis < 3; ++axis) out[prefix + kAxes[axis]] = Axis(s, axis);
  }
  return out;
}

std::string RenderCorrelationTable(std::span<const CorrelationRow> rows) {
  std::vector<std::string> names;
  for (const auto& r : rows) names.push_back(r.metric);
  const std::size_t w = MetricColumnWidth(names);
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "metric" << std::right
     << std::setw(8) << "n" << std::setw(12) << "tau" << std::setw(14) << "p-value"
     << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(w)) << r.metric << std::right
       << std::setw(8) << r.n;
    if (r.result) {
      char tau[32], p[32];
      std::snprintf(tau, sizeof(tau), "%.3f", r.result->tau);
      std::snprintf(p, sizeof(p), "%.3g", r.result->p_value);
      os << std::setw(12) << tau << std::setw(14) << p;
    } else {
      os << "  undefined (all ties)";
    }
    os << '\n';
  }
  return os.str();
}

void WriteCorrelationCsv(std::ostream& out, std::span<const CorrelationRow> rows) {
  out << kCorrelationCsvHeader << '\n';
  for (const auto& r : rows) {
    out << CsvField(r.metric) << ',' << r.n << ',';
    if (r.result) {
      out << FormatNumber(r.result->tau) << ',' << FormatNumber(r.result->p_value)
          << ",ok\n";
    } else {
      out << ",,undefined\n";
    }
  }
}

std::string RenderPairwiseTable(std::span<const NamedAccuracy> rows) {
  std::vector<std::string> names;
  for (const auto& r : rows) names.push_back(r.first);
  const std::size_t w = MetricColumnWidth(names);
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "metric" << std::right;
  for (PairCategory c : kPairCategories) os << std::setw(9) << ToString(c);
  os << std::setw(9) << "ALL" << '\n';
  for (const auto& [name, acc] : rows) {
    os << std::left << std::setw(static_cast<int>(w)) << name << std::right;
    for (const auto& cat : acc.categories) {
      os << std::setw(9) << (cat.percent ? FormatPercent(*cat.percent) : "n/a");
    }
    os << std::setw(9) << (acc.all ? FormatPercent(*acc.all) : "n/a") << '\n';
  }
  return os.str();
}

void WritePairwiseCsv(std::ostream& out, std::span<const NamedAccuracy> rows) {
  out << kPairwiseCsvHeader << '\n';
  for (const auto& [name, acc] : rows) {
    std::size_t total = 0;
    for (PairCategory c : kPairCategories) {
      const auto& cat = acc.at(c);
      total += cat.pairs;
      out << CsvField(name) << ',' << ToString(c) << ',' << cat.pairs << ','
          << (cat.percent ? FormatNumber(*cat.percent) : "") << '\n';
    }
    out << CsvField(name) << ",ALL," << total << ','
        << (acc.all ? FormatNumber(*acc.all) : "") << '\n';
  }
}

std::string RenderValidationReport(const ValidationReport& report) {
  std::ostringstream os;
  const auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *v);
    return std::string(buf);
  };
  std::size_t flagged = 0;
  for (const auto& r : report.records) {
    os << r.instance_id << "  extra=" << fmt(r.extra_similarity)
       << "  missing=" << fmt(r.missing_similarity) << (r.flagged ? "  FLAGGED" : "")
       << '\n';
    if (r.flagged) ++flagged;
  }
  os << "mean extra similarity:   " << fmt(report.mean_extra) << '\n'
     << "mean missing similarity: " << fmt(report.mean_missing) << '\n'
     << "flagged below " << report.threshold << ": " << flagged << " of "
     << report.records.size() << '\n';
  if (!report.skipped.empty()) {
    os << "skipped (no true-error tensors):";
    for (const auto& id : report.skipped) os << ' ' << id;
    os << '\n';
  }
  return os.str();
}

void WriteValidationCsv(std::ostream& out, const ValidationReport& report) {
  out << kValidationCsvHeader << '\n';
  const auto num = [](const std::optional<double>& v) {
    return v ? FormatNumber(*v) : std::string();
  };
  for (const auto& r : report.records) {
    out << CsvField(r.instance_id) << ',' << num(r.extra_similarity) << ','
        << num(r.missing_similarity) << ',' << (r.flagged ? 1 : 0) << '\n';
  }
  out << "__mean__," << num(report.mean_extra) << ',' << num(report.mean_missing)
      << ",\n";
}

}  // namespace reo
