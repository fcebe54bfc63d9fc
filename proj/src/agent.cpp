#include "marl/agent.hpp"

namespace marl {

TargetActions compute_target_actions(const std::vector<JointTransition>& batch,
                                     const std::vector<Agent*>& all_agents) {
  TargetActions out(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    out[b].resize(all_agents.size());
    for (std::size_t j = 0; j < all_agents.size(); ++j)
      out[b][j] = all_agents[j]->target_action(batch[b].next_state);
  }
  return out;
}

}  // namespace marl
