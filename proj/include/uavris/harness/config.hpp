#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavris/env.hpp"
#include "uavris/rl/agent.hpp"
#include "uavris/rl/exhaustive.hpp"

namespace uavris::harness {

using Json = nlohmann::json;

struct TrainSettings {
    std::size_t episodes = 500;
    std::size_t eval_episodes = 2;
    std::vector<std::uint64_t> seeds{1};
    std::string output_dir = "runs";
    std::size_t updates_per_step = 1;
    std::size_t train_every = 1;   // env steps between update rounds
    bool write_steps = true;       // per-step SlotReport rows in steps.csv
    std::size_t final_window = 50; // episodes averaged for the headline reward
    std::uint64_t eval_seed = 1'000'000;  // first held-out episode seed
};

struct ExperimentConfig {
    EnvConfig env;
    rl::AgentConfig agent;
    TrainSettings train;
    rl::ExhaustiveConfig exhaustive;

    void validate() const;
};

/// Parses a config document; every key is optional but unknown keys and
/// wrong types raise ConfigError naming the offending field path.
ExperimentConfig parse_config(const Json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved document (every field present).
Json to_json(const ExperimentConfig& cfg);
/// Compact, key-sorted dump of to_json; the basis of the config hash.
std::string canonical_text(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

/// Applies "a.b.c=value" to a document. The value is read as JSON when it
/// parses, otherwise as a string.
void apply_override(Json& doc, const std::string& assignment);

}  // namespace uavris::harness
