#include "marl/runner.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "marl/checkpoint.hpp"
#include "marl/csvio.hpp"
#include "marl/errors.hpp"

namespace marl {

namespace fs = std::filesystem;

std::string resolve_output_dir(const std::string& dir) {
  const char* root = std::getenv("MARL_OUTPUT_ROOT");
  if (root == nullptr || *root == '\0') return dir;
  const fs::path p(dir);
  if (p.is_absolute()) return dir;
  return (fs::path(root) / p).string();
}

RunOutputs execute_run(RunContext& ctx, const std::string& out_dir) {
  fs::create_directories(out_dir);
  RunOutputs outputs;
  outputs.rewards_csv = (fs::path(out_dir) / "rewards.csv").string();
  outputs.timings_csv = (fs::path(out_dir) / "timings.csv").string();
  outputs.summary_json = (fs::path(out_dir) / "summary.json").string();
  outputs.checkpoint_json = (fs::path(out_dir) / "checkpoint.json").string();

  const bool resuming = ctx.next_episode > 0;
  const bool rewards_exist = resuming && fs::exists(outputs.rewards_csv) &&
                             fs::file_size(outputs.rewards_csv) > 0;

  std::ofstream rewards(outputs.rewards_csv,
                        std::ios::binary | (rewards_exist ? std::ios::app : std::ios::trunc));
  if (!rewards) throw IoError("run: cannot write '" + outputs.rewards_csv + "'");
  std::ofstream timings(outputs.timings_csv,
                        std::ios::binary | (rewards_exist ? std::ios::app : std::ios::trunc));
  if (!timings) throw IoError("run: cannot write '" + outputs.timings_csv + "'");
  if (!rewards_exist) {
    write_rewards_header(rewards, ctx.spec.n_agents);
    write_timings_header(timings);
    rewards.flush();
    timings.flush();
  }

  ctx.run_all([&](const EpisodeLog& log) {
    write_rewards_row(rewards, log);
    write_timings_row(timings, log);
    rewards.flush();
    timings.flush();
  });
  rewards.close();
  timings.close();

  write_summary_json(outputs.summary_json, outputs.rewards_csv, ctx.cfg);
  save_checkpoint(outputs.checkpoint_json, ctx);
  return outputs;
}

}  // namespace marl
