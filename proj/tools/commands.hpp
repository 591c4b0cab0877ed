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

#ifndef REO_TOOLS_COMMANDS_HPP_
#define REO_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "reo/metrics.hpp"
#include "reo/synthetic.hpp"

namespace reo::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitEnvironment = 1;
inline constexpr int kExitUsage = 2;

// Every field has a default, so an empty flag set is a valid run.
struct RunConfig {
  std::filesystem::path manifest;
  std::vector<std::string> modes = {"image", "reference", "combined"};
  double lambda = 9.0;
  std::string covariance = "diagonal";
  std::optional<double> ridge;  // absolute; unset = relative default
  double shrinkage = 0.5;
  std::string relevance_sim = "cosine";
  double image_weight = 0.5;
  bool normalize = false;
  std::string out;  // empty or "-" = stdout
  unsigned jobs = 1;
  std::string tau_variant = "b";
  double threshold = 0.65;
  std::string ground_truth = "image";
  SyntheticConfig synthetic;

  ScoringConfig ToScoringConfig() const;
};

// Each command writes its primary output to `out` (or the --out file) and
// diagnostics to `err`. They throw reo::Error; RunCommand maps to statuses.
void CmdScore(const RunConfig& config, std::ostream& out, std::ostream& err);
void CmdEvalCorr(const RunConfig& config, std::ostream& out, std::ostream& err);
void CmdEvalPairwise(const RunConfig& config, std::ostream& out, std::ostream& err);
void CmdValidateErrors(const RunConfig& config, std::ostream& out, std::ostream& err);
void CmdGenSynthetic(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and runs the chosen subcommand; returns the exit status.
int Main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace reo::cli

#endif  // REO_TOOLS_COMMANDS_HPP_
