#include "marl/checkpoint.hpp"

#include <fstream>

#include "marl/cft.hpp"
#include "marl/ddpg.hpp"
#include "marl/errors.hpp"
#include "marl/serialize.hpp"

namespace marl {

using nlohmann::json;

namespace {

json transition_to_json(const JointTransition& tr) {
  json traces = json::array();
  for (const auto& t : tr.traces) {
    if (!t)
      traces.push_back(nullptr);
    else
      traces.push_back(json{{"intents", t->intents}, {"scenario", t->scenario}});
  }
  return json{{"state", tr.state},
              {"actions", tr.actions},
              {"rewards", tr.rewards},
              {"next_state", tr.next_state},
              {"traces", traces}};
}

JointTransition transition_from_json(const json& j) {
  JointTransition tr;
  tr.state = require_field(j, "state", "transition").get<std::vector<double>>();
  tr.actions =
      require_field(j, "actions", "transition").get<std::vector<std::vector<double>>>();
  tr.rewards = require_field(j, "rewards", "transition").get<std::vector<double>>();
  tr.next_state = require_field(j, "next_state", "transition").get<std::vector<double>>();
  for (const json& t : require_field(j, "traces", "transition")) {
    if (t.is_null()) {
      tr.traces.emplace_back(std::nullopt);
    } else {
      CftTrace trace;
      trace.intents =
          require_field(t, "intents", "trace").get<std::vector<std::vector<double>>>();
      trace.scenario = require_field(t, "scenario", "trace").get<std::size_t>();
      tr.traces.emplace_back(std::move(trace));
    }
  }
  return tr;
}

}  // namespace

void save_checkpoint(const std::string& path, const RunContext& ctx) {
  json buffer = json::array();
  for (std::size_t i = 0; i < ctx.buffer.size(); ++i)
    buffer.push_back(transition_to_json(ctx.buffer.at(i)));

  json agents = json::array();
  for (const auto& agent : ctx.agents) agents.push_back(agent->to_json());

  const json j{{"version", kCheckpointVersion},
               {"config", run_config_to_json(ctx.cfg)},
               {"episode_index", ctx.next_episode},
               {"rng_state", ctx.rng.save_state()},
               {"agents", agents},
               {"buffer", buffer}};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("checkpoint: cannot write '" + path + "'");
  out << j.dump() << "\n";
  if (!out) throw IoError("checkpoint: failed writing '" + path + "'");
}

std::unique_ptr<RunContext> load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("checkpoint: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("checkpoint: malformed or truncated file '" + path + "': " + e.what());
  }

  const int version = require_field(j, "version", "checkpoint").get<int>();
  if (version != kCheckpointVersion)
    throw ConfigError("checkpoint: file has version " + std::to_string(version) +
                      ", this loader supports version " + std::to_string(kCheckpointVersion));

  const RunConfig cfg = parse_run_config(require_field(j, "config", "checkpoint"));
  auto ctx = std::make_unique<RunContext>(cfg);

  const json& agents = require_field(j, "agents", "checkpoint");
  if (agents.size() != ctx->agents.size())
    throw IoError("checkpoint: agent count does not match config");
  ctx->agents.clear();
  for (const json& aj : agents) {
    const std::string kind = require_field(aj, "kind", "agent").get<std::string>();
    if (kind == "ddpg")
      ctx->agents.push_back(DdpgAgent::from_json(aj));
    else if (kind == "cft")
      ctx->agents.push_back(CftAgent::from_json(aj));
    else
      throw IoError("checkpoint: unknown agent kind '" + kind + "'");
  }

  ctx->buffer = ReplayBuffer(cfg.replay_capacity);
  for (const json& tj : require_field(j, "buffer", "checkpoint"))
    ctx->buffer.push(transition_from_json(tj));

  ctx->rng.load_state(require_field(j, "rng_state", "checkpoint").get<std::string>());
  ctx->next_episode = require_field(j, "episode_index", "checkpoint").get<std::size_t>();
  return ctx;
}

}  // namespace marl
