#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "marl/bench.hpp"
#include "marl/checkpoint.hpp"
#include "marl/csvio.hpp"
#include "marl/errors.hpp"
#include "marl/runner.hpp"

namespace {

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    try {
      out.push_back(static_cast<std::size_t>(std::stoull(item)));
    } catch (const std::exception&) {
      throw marl::ConfigError("config: bad sweep list entry '" + item + "'");
    }
    pos = comma + 1;
  }
  return out;
}

int cmd_run(const std::string& config_path) {
  const marl::RunConfig cfg = marl::load_run_config(config_path);
  marl::RunContext ctx(cfg);
  const auto outputs = marl::execute_run(ctx, marl::resolve_output_dir(cfg.output_dir));
  std::cout << "run complete: " << outputs.rewards_csv << "\n";
  return 0;
}

int cmd_resume(const std::string& checkpoint_path, long episodes, const std::string& out) {
  auto ctx = marl::load_checkpoint(checkpoint_path);
  if (episodes >= 0) ctx->cfg.episodes = static_cast<std::size_t>(episodes);
  const std::string dir =
      out.empty() ? marl::resolve_output_dir(ctx->cfg.output_dir) : marl::resolve_output_dir(out);
  const auto outputs = marl::execute_run(*ctx, dir);
  std::cout << "resume complete: " << outputs.rewards_csv << "\n";
  return 0;
}

int cmd_plot(const std::string& input, const std::string& out) {
  marl::plot_emit(input, out);
  std::cout << "plot written to " << out << "\n";
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& sweep_k,
              const std::string& sweep_agents, std::string out) {
  const marl::RunConfig cfg = marl::load_run_config(config_path);
  if (sweep_k.empty() == sweep_agents.empty())
    throw marl::ConfigError("config: pass exactly one of --sweep-k / --sweep-agents");

  std::vector<marl::BenchPoint> points;
  std::string name;
  if (!sweep_k.empty()) {
    points = marl::bench_sweep_k(cfg, parse_size_list(sweep_k));
    name = "k";
  } else {
    points = marl::bench_sweep_agents(cfg, parse_size_list(sweep_agents));
    name = "n_agents";
  }
  if (out.empty()) out = marl::resolve_output_dir(cfg.output_dir) + "/bench.csv";
  marl::write_bench_csv(out, name, points);

  std::cout << name << ",mean_ms_per_episode\n";
  for (const auto& p : points)
    std::cout << marl::format_double(p.sweep_value) << ','
              << marl::format_double(p.mean_ms_per_episode) << "\n";
  const marl::LineFit fit = marl::fit_line(points);
  std::cout << "# linear fit: slope=" << marl::format_double(fit.slope)
            << " intercept=" << marl::format_double(fit.intercept)
            << " r2=" << marl::format_double(fit.r_squared) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Competitive multi-agent actor-critic training engine"};
  app.require_subcommand(1);

  std::string config_path, checkpoint_path, plot_input, out_arg, sweep_k, sweep_agents;
  long episodes_override = -1;

  CLI::App* run = app.add_subcommand("run", "Train agents per a JSON config");
  run->add_option("--config", config_path, "Run config path")->required();

  CLI::App* resume = app.add_subcommand("resume", "Continue a checkpointed run");
  resume->add_option("--checkpoint", checkpoint_path, "Checkpoint path")->required();
  resume->add_option("--episodes", episodes_override, "Override total episode count");
  resume->add_option("--out", out_arg, "Output directory override");

  CLI::App* plot = app.add_subcommand("plot", "Emit per-agent series and an SVG chart");
  plot->add_option("--input", plot_input, "rewards.csv path")->required();
  plot->add_option("--out", out_arg, "Output directory")->required();

  CLI::App* bench = app.add_subcommand("bench", "Wall-clock sweeps over K or agent count");
  bench->add_option("--config", config_path, "Base config path")->required();
  bench->add_option("--sweep-k", sweep_k, "Comma-separated K values");
  bench->add_option("--sweep-agents", sweep_agents, "Comma-separated agent counts");
  bench->add_option("--out", out_arg, "Output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error:usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (resume->parsed()) return cmd_resume(checkpoint_path, episodes_override, out_arg);
    if (plot->parsed()) return cmd_plot(plot_input, out_arg);
    if (bench->parsed()) return cmd_bench(config_path, sweep_k, sweep_agents, out_arg);
  } catch (const marl::ConfigError& e) {
    std::cerr << "error:config: " << e.what() << "\n";
    return 3;
  } catch (const marl::IoError& e) {
    std::cerr << "error:io: " << e.what() << "\n";
    return 4;
  } catch (const marl::NumericError& e) {
    std::cerr << "error:numeric: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error:internal: " << e.what() << "\n";
    return 6;
  }
  return 2;
}
