#pragma once

#include <memory>
#include <string>

#include "marl/training.hpp"

namespace marl {

inline constexpr int kCheckpointVersion = 1;

/// Versioned JSON snapshot of a run at an episode boundary: config, agents,
/// replay buffer and generator state. Loading reproduces the exact training
/// trace the uninterrupted run would have produced.
void save_checkpoint(const std::string& path, const RunContext& ctx);

std::unique_ptr<RunContext> load_checkpoint(const std::string& path);

}  // namespace marl
