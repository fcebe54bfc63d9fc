#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "marl/config.hpp"
#include "marl/game.hpp"

namespace marl {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Strict reader: every data row must match the header width; errors name
/// the offending 1-based line.
CsvTable read_csv(const std::string& path);

void write_rewards_header(std::ostream& os, std::size_t n_agents);
void write_rewards_row(std::ostream& os, const EpisodeLog& log);

struct SummaryStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n-1); zero when fewer than 2 values
  std::size_t count = 0;
};

SummaryStats summarize(std::span<const double> values);

/// Per-agent mean and stddev of accumulative rewards over post-exploration
/// episodes, recomputed from the rewards file itself.
void write_summary_json(const std::string& summary_path, const std::string& rewards_csv_path,
                        const RunConfig& cfg);

void write_timings_header(std::ostream& os);
void write_timings_row(std::ostream& os, const EpisodeLog& log);

/// Two-column series per agent plus one self-contained SVG line chart of
/// per-episode accumulative raw rewards.
void plot_emit(const std::string& rewards_csv_path, const std::string& out_dir);

}  // namespace marl
