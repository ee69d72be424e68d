#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uavris/harness/config.hpp"

namespace uavris::harness {

namespace fs = std::filesystem;

struct EpisodeRecord {
    std::size_t episode = 0;
    std::uint64_t env_seed = 0;
    double reward = 0.0;
    double mean_efficiency = 0.0;
    std::size_t qos_violations = 0;
    std::size_t causality_slots = 0;
    double final_battery = 0.0;
    std::size_t steps = 0;
};

struct StepRecord {
    std::size_t episode = 0;
    SlotReport report;
    double reward = 0.0;
};

struct TrainResult {
    std::vector<EpisodeRecord> episodes;
    double final_mean_reward = 0.0;  // mean over the last final_window episodes
    std::unique_ptr<rl::Agent> agent;
    double wall_seconds = 0.0;
    std::string config_hash;
};

struct EvalResult {
    std::vector<StepRecord> steps;
    std::vector<EpisodeRecord> episodes;
    double mean_efficiency = 0.0;  // over all evaluated slots
    double mean_reward = 0.0;
};

/// Chooses the raw action in [-1,1]^D for the environment's current slot.
using Policy = std::function<Eigen::VectorXd(const Environment& env, const Eigen::VectorXd& state)>;

/// Copy of `cfg` with the run seed pushed into the environment and agent.
ExperimentConfig with_seed(const ExperimentConfig& cfg, std::uint64_t seed);
/// Seed of training episode `episode` in the run seeded `run_seed`.
std::uint64_t episode_seed(std::uint64_t run_seed, std::size_t episode);

/// Trains cfg.agent on cfg.env with the seeds already set in cfg. When
/// run_dir is given, writes config.json, episodes.csv, steps.csv,
/// checkpoint.txt and summary.json there.
TrainResult train(const ExperimentConfig& cfg, const std::optional<fs::path>& run_dir = std::nullopt);

/// Greedy (no exploration) roll-outs on held-out episodes seeded
/// cfg.train.eval_seed + i.
EvalResult evaluate(const ExperimentConfig& cfg, const Policy& policy, std::size_t episodes);
Policy agent_policy(rl::Agent& agent);
Policy exhaustive_policy(const rl::ExhaustiveConfig& ex);
/// Uniform random actions from a dedicated stream.
Policy random_policy(std::uint64_t seed);

/// Loads a checkpoint written by train() for cfg; rejects hash mismatches.
std::unique_ptr<rl::Agent> load_agent(const ExperimentConfig& cfg, const fs::path& checkpoint);

void write_episodes_csv(const fs::path& path, const std::vector<EpisodeRecord>& rows);
void write_steps_csv(const fs::path& path, const std::vector<StepRecord>& rows, std::size_t nodes);
void write_json(const fs::path& path, const Json& doc);

/// One run per value x seed under out_dir/<key>=<value>/seed<seed>. Returns the run directories.
std::vector<fs::path> sweep(const Json& base_doc, const std::string& key, const std::vector<std::string>& values,
                            const fs::path& out_dir);

/// Tidy long-format CSV (run,seed,protocol,agent,metric,index,value) built
/// from every run directory found under `root`. Returns the row count.
std::size_t export_plots(const fs::path& root, const fs::path& out_csv);

}  // namespace uavris::harness
