#pragma once

#include <string>

#include "marl/training.hpp"

namespace marl {

struct RunOutputs {
  std::string rewards_csv;
  std::string timings_csv;
  std::string summary_json;
  std::string checkpoint_json;
};

/// Drives a context to completion inside out_dir: streams rewards.csv and
/// timings.csv row by row (appending when the context resumes mid-run),
/// then writes summary.json and a final checkpoint. Rows hit disk as they
/// are produced, so an aborted run keeps its partial rewards file.
RunOutputs execute_run(RunContext& ctx, const std::string& out_dir);

/// Applies the output-root override from the environment, when set.
std::string resolve_output_dir(const std::string& dir);

}  // namespace marl
