#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "uavris/rl/agent.hpp"

namespace uavris::rl {

inline constexpr int kCheckpointVersion = 1;

std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(std::uint64_t h);

/// Text dump: header, then every network (main and target) and every
/// optimiser's moments. Doubles are written as hex floats so a reload is exact.
///
///   uavris-checkpoint <version>
///   config_hash <16 hex digits>
///   agent <kind> <state_dim> <action_dim> <pairs> <critics_per_pair> <updates>
///   net <name> <layers>            (per network)
///     layer <rows> <cols>  then rows*cols weights (column-major) and rows biases
///   adam <name> <steps> <layers>   (per optimiser)
///     layer <rows> <cols>  then m weights, m biases, v weights, v biases
///   end
void save_checkpoint(std::ostream& os, const Agent& agent, const std::string& config_hash);
void save_checkpoint(const std::filesystem::path& path, const Agent& agent, const std::string& config_hash);

/// Loads into an agent built from the same config. Throws ConfigError on a
/// version or hash mismatch and InvalidInput on malformed content.
void load_checkpoint(std::istream& is, Agent& agent, const std::string& expected_hash);
void load_checkpoint(const std::filesystem::path& path, Agent& agent, const std::string& expected_hash);

/// Reads only the stored config hash.
std::string checkpoint_hash(const std::filesystem::path& path);

}  // namespace uavris::rl
