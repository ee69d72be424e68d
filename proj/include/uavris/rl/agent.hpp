#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uavris/rl/mlp.hpp"
#include "uavris/rl/replay.hpp"

namespace uavris::rl {

enum class AgentKind { DDPG_EH, TD3, DDPG };

std::string to_string(AgentKind k);
AgentKind agent_kind_from_string(const std::string& s);

struct AgentConfig {
    AgentKind kind = AgentKind::DDPG_EH;
    std::size_t pairs = 2;
    std::size_t critics_per_pair = 2;
    std::size_t target_samples = 8;  // M
    double beta = 1.0;
    double gamma = 0.99;
    double soft_update_rate = 5e-3;
    std::size_t policy_delay = 2;
    double sigma_explore = 0.1;
    double sigma_target = 0.2;
    double noise_clip = 0.5;
    bool target_smoothing = true;
    bool select_highest_q = true;
    std::vector<std::size_t> hidden{256, 256};
    double lr_actor = 1e-4;
    double lr_critic = 1e-3;
    std::size_t batch_size = 128;
    std::size_t buffer_capacity = 100'000;
    std::size_t warmup_steps = 1000;  // uniform random actions before the policy acts
    std::uint64_t seed = 1;

    void validate() const;
};

AgentConfig ddpg_eh_config();
AgentConfig td3_config();
AgentConfig ddpg_config();
/// Defaults for `kind` with the kind-defining switches applied.
AgentConfig agent_config_for(AgentKind kind);

/// sum q_i exp(beta q_i) / sum exp(beta q_i), shifted by max(q).
double softmax_value(std::span<const double> q, double beta);

struct ActorCriticPair {
    Mlp actor, actor_target;
    std::vector<Mlp> critics, critic_targets;
    Adam actor_opt;
    std::vector<Adam> critic_opts;
};

/// Per-sample record of how a target was formed, for audit.
struct TargetLog {
    std::vector<Eigen::MatrixXd> actions;  // M entries, action_dim x N
    Eigen::MatrixXd min_q;                 // M x N
};

struct TrainDiagnostics {
    bool ready = false;
    bool actor_updated = false;
    std::vector<double> critic_loss;  // pair-major, one per critic
    std::vector<double> actor_loss;   // one per pair, NaN when not updated
    double q_mean = 0.0;
    double q_min = 0.0;
    double q_max = 0.0;
    double target_mean = 0.0;
};

struct ActDecision {
    std::vector<Eigen::VectorXd> proposals;
    std::vector<double> scores;
    std::size_t chosen = 0;
    Eigen::VectorXd action;
};

class Agent {
public:
    Agent(std::size_t state_dim, std::size_t action_dim, AgentConfig cfg);

    Eigen::VectorXd act(const Eigen::VectorXd& state, bool explore);
    /// Deterministic part of act: proposals, own-critic scores, winner.
    ActDecision propose(const Eigen::VectorXd& state) const;
    /// Uniform action in [-1,1]^D from the agent's stream.
    Eigen::VectorXd random_action();

    Eigen::VectorXd target_q(const Batch& batch, std::size_t pair, TargetLog* log = nullptr);
    TrainDiagnostics train_step(const ReplayBuffer& buffer);
    /// Update on a given batch regardless of buffer state.
    TrainDiagnostics train_on(const Batch& batch);

    const AgentConfig& config() const { return cfg_; }
    std::size_t state_dim() const { return state_dim_; }
    std::size_t action_dim() const { return action_dim_; }
    std::vector<ActorCriticPair>& pairs() { return pairs_; }
    const std::vector<ActorCriticPair>& pairs() const { return pairs_; }
    long updates() const { return updates_; }
    void set_updates(long u) { updates_ = u; }
    Rng& rng() { return rng_; }

private:
    Eigen::MatrixXd joint(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a) const;
    Eigen::MatrixXd sampled_noise(Eigen::Index rows, Eigen::Index cols);

    std::size_t state_dim_;
    std::size_t action_dim_;
    AgentConfig cfg_;
    std::vector<ActorCriticPair> pairs_;
    Rng rng_;
    long updates_ = 0;
};

}  // namespace uavris::rl
