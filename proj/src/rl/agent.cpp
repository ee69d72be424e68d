#include "uavris/rl/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavris/errors.hpp"

namespace uavris::rl {

std::string to_string(AgentKind k) {
    switch (k) {
        case AgentKind::DDPG_EH: return "ddpg_eh";
        case AgentKind::TD3: return "td3";
        case AgentKind::DDPG: return "ddpg";
    }
    return "?";
}

AgentKind agent_kind_from_string(const std::string& s) {
    if (s == "ddpg_eh") return AgentKind::DDPG_EH;
    if (s == "td3") return AgentKind::TD3;
    if (s == "ddpg") return AgentKind::DDPG;
    throw InvalidInput("unknown agent kind '" + s + "' (expected ddpg_eh, td3 or ddpg)");
}

void AgentConfig::validate() const {
    if (pairs < 1) throw InvalidInput("agent: pairs must be >= 1");
    if (critics_per_pair < 1) throw InvalidInput("agent: critics_per_pair must be >= 1");
    if (target_samples < 1) throw InvalidInput("agent: target_samples must be >= 1");
    if (!(beta >= 0.0)) throw InvalidInput("agent: beta must be >= 0");
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidInput("agent: gamma must lie in (0,1)");
    if (!(soft_update_rate >= 0.0 && soft_update_rate <= 1.0))
        throw InvalidInput("agent: soft_update_rate must lie in [0,1]");
    if (policy_delay < 1) throw InvalidInput("agent: policy_delay must be >= 1");
    if (!(sigma_explore >= 0.0) || !(sigma_target >= 0.0) || !(noise_clip >= 0.0))
        throw InvalidInput("agent: noise scales must be >= 0");
    if (hidden.empty()) throw InvalidInput("agent: need at least one hidden layer");
    for (auto h : hidden)
        if (h == 0) throw InvalidInput("agent: hidden layer sizes must be positive");
    if (!(lr_actor > 0.0) || !(lr_critic > 0.0)) throw InvalidInput("agent: learning rates must be positive");
    if (batch_size < 1) throw InvalidInput("agent: batch_size must be >= 1");
    if (buffer_capacity < batch_size) throw InvalidInput("agent: buffer_capacity must be >= batch_size");
}

AgentConfig ddpg_eh_config() { return AgentConfig{}; }

AgentConfig td3_config() {
    AgentConfig c;
    c.kind = AgentKind::TD3;
    c.pairs = 1;
    c.target_samples = 1;
    c.select_highest_q = false;
    return c;
}

AgentConfig ddpg_config() {
    AgentConfig c;
    c.kind = AgentKind::DDPG;
    c.pairs = 1;
    c.critics_per_pair = 1;
    c.target_samples = 1;
    c.target_smoothing = false;
    c.select_highest_q = false;
    c.policy_delay = 1;
    return c;
}

AgentConfig agent_config_for(AgentKind kind) {
    switch (kind) {
        case AgentKind::DDPG_EH: return ddpg_eh_config();
        case AgentKind::TD3: return td3_config();
        case AgentKind::DDPG: return ddpg_config();
    }
    return ddpg_eh_config();
}

double softmax_value(std::span<const double> q, double beta) {
    if (q.empty()) throw InvalidInput("softmax_value: empty input");
    if (!(beta >= 0.0)) throw InvalidInput("softmax_value: beta must be >= 0");
    const double top = *std::max_element(q.begin(), q.end());
    double num = 0.0;
    double den = 0.0;
    for (double v : q) {
        const double w = std::exp(beta * (v - top));
        num += v * w;
        den += w;
    }
    const double out = num / den;
    // rounding can push the weighted mean a hair outside the hull
    const double bottom = *std::min_element(q.begin(), q.end());
    return std::clamp(out, bottom, top);
}

namespace {

Rng agent_stream(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 5u};
    return Rng(seq);
}

}  // namespace

Agent::Agent(std::size_t state_dim, std::size_t action_dim, AgentConfig cfg)
    : state_dim_(state_dim), action_dim_(action_dim), cfg_(std::move(cfg)), rng_(agent_stream(cfg_.seed)) {
    cfg_.validate();
    if (state_dim == 0 || action_dim == 0) throw InvalidInput("Agent: dimensions must be positive");

    std::vector<std::size_t> actor_sizes{state_dim};
    actor_sizes.insert(actor_sizes.end(), cfg_.hidden.begin(), cfg_.hidden.end());
    actor_sizes.push_back(action_dim);
    std::vector<std::size_t> critic_sizes{state_dim + action_dim};
    critic_sizes.insert(critic_sizes.end(), cfg_.hidden.begin(), cfg_.hidden.end());
    critic_sizes.push_back(1);

    for (std::size_t p = 0; p < cfg_.pairs; ++p) {
        ActorCriticPair pair;
        pair.actor = Mlp(actor_sizes, Activation::Relu, Activation::Tanh, rng_);
        pair.actor_target = pair.actor;
        pair.actor_opt = Adam(pair.actor, AdamConfig{cfg_.lr_actor});
        for (std::size_t c = 0; c < cfg_.critics_per_pair; ++c) {
            pair.critics.emplace_back(critic_sizes, Activation::Relu, Activation::Identity, rng_);
            pair.critic_targets.push_back(pair.critics.back());
            pair.critic_opts.emplace_back(pair.critics.back(), AdamConfig{cfg_.lr_critic});
        }
        pairs_.push_back(std::move(pair));
    }
}

Eigen::MatrixXd Agent::joint(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a) const {
    Eigen::MatrixXd x(s.rows() + a.rows(), s.cols());
    x.topRows(s.rows()) = s;
    x.bottomRows(a.rows()) = a;
    return x;
}

Eigen::MatrixXd Agent::sampled_noise(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd n(rows, cols);
    std::normal_distribution<double> g(0.0, cfg_.sigma_target);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) n(r, c) = std::clamp(g(rng_), -cfg_.noise_clip, cfg_.noise_clip);
    return n;
}

ActDecision Agent::propose(const Eigen::VectorXd& state) const {
    if (static_cast<std::size_t>(state.size()) != state_dim_) throw InvalidInput("Agent::act: state size mismatch");
    ActDecision d;
    const std::size_t used = cfg_.select_highest_q ? pairs_.size() : 1;
    for (std::size_t p = 0; p < used; ++p) {
        Eigen::VectorXd a = pairs_[p].actor.forward(state);
        const double score = pairs_[p].critics[0].forward(joint(state, a))(0, 0);
        d.proposals.push_back(a);
        d.scores.push_back(score);
        if (p > 0 && score > d.scores[d.chosen]) d.chosen = p;
    }
    d.action = d.proposals[d.chosen];
    return d;
}

Eigen::VectorXd Agent::act(const Eigen::VectorXd& state, bool explore) {
    Eigen::VectorXd a = propose(state).action;
    if (explore && cfg_.sigma_explore > 0.0) {
        std::normal_distribution<double> g(0.0, cfg_.sigma_explore);
        for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = std::clamp(a(i) + g(rng_), -1.0, 1.0);
    }
    return a;
}

Eigen::VectorXd Agent::random_action() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd a(static_cast<Eigen::Index>(action_dim_));
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = u(rng_);
    return a;
}

Eigen::VectorXd Agent::target_q(const Batch& batch, std::size_t pair, TargetLog* log) {
    if (batch.size() == 0) throw InvalidInput("target_q: empty batch");
    const ActorCriticPair& pc = pairs_.at(pair);
    const Eigen::Index n = static_cast<Eigen::Index>(batch.size());
    const auto m_count = static_cast<Eigen::Index>(cfg_.target_samples);
    const Eigen::MatrixXd base = pc.actor_target.forward(batch.next_states);

    Eigen::MatrixXd q(m_count, n);
    if (log) {
        log->actions.clear();
        log->min_q.resize(m_count, n);
    }
    for (Eigen::Index m = 0; m < m_count; ++m) {
        Eigen::MatrixXd a = base;
        if (cfg_.target_smoothing) a = (a + sampled_noise(a.rows(), a.cols())).cwiseMax(-1.0).cwiseMin(1.0);
        const Eigen::MatrixXd x = joint(batch.next_states, a);
        Eigen::RowVectorXd best = pc.critic_targets[0].forward(x);
        for (std::size_t c = 1; c < pc.critic_targets.size(); ++c)
            best = best.cwiseMin(pc.critic_targets[c].forward(x).row(0));
        q.row(m) = best;
        if (log) log->actions.push_back(a);
    }
    if (log) log->min_q = q;

    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd col = q.col(i);
        const double v = softmax_value(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())),
                                       cfg_.beta);
        y(i) = batch.rewards(i) + (1.0 - batch.done(i)) * cfg_.gamma * v;
    }
    return y;
}

TrainDiagnostics Agent::train_step(const ReplayBuffer& buffer) {
    if (buffer.size() < cfg_.batch_size) return TrainDiagnostics{};
    return train_on(buffer.sample(cfg_.batch_size, rng_));
}

TrainDiagnostics Agent::train_on(const Batch& batch) {
    TrainDiagnostics diag;
    diag.ready = true;
    ++updates_;
    const bool delayed = updates_ % static_cast<long>(cfg_.policy_delay) == 0;
    const double n = static_cast<double>(batch.size());
    const Eigen::MatrixXd sa = joint(batch.states, batch.actions);

    double q_sum = 0.0;
    double y_sum = 0.0;
    std::size_t q_count = 0;
    diag.q_min = std::numeric_limits<double>::infinity();
    diag.q_max = -std::numeric_limits<double>::infinity();

    Tape tape;
    Gradients grads;
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
        const Eigen::VectorXd y = target_q(batch, p);
        y_sum += y.sum();
        ActorCriticPair& pc = pairs_[p];
        for (std::size_t c = 0; c < pc.critics.size(); ++c) {
            const Eigen::MatrixXd q = pc.critics[c].forward(sa, tape);
            const Eigen::RowVectorXd err = q.row(0) - y.transpose();
            diag.critic_loss.push_back(err.squaredNorm() / n);
            q_sum += q.sum();
            q_count += static_cast<std::size_t>(q.size());
            diag.q_min = std::min(diag.q_min, q.minCoeff());
            diag.q_max = std::max(diag.q_max, q.maxCoeff());
            pc.critics[c].backward(tape, (2.0 / n) * err, grads);
            pc.critic_opts[c].step(pc.critics[c], grads);
        }
    }
    diag.q_mean = q_sum / static_cast<double>(q_count);
    diag.target_mean = y_sum / (n * static_cast<double>(pairs_.size()));

    diag.actor_loss.assign(pairs_.size(), std::numeric_limits<double>::quiet_NaN());
    if (delayed) {
        diag.actor_updated = true;
        Tape actor_tape;
        Tape critic_tape;
        Gradients actor_grads;
        Gradients critic_grads;
        const auto sd = static_cast<Eigen::Index>(state_dim_);
        const auto ad = static_cast<Eigen::Index>(action_dim_);
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            ActorCriticPair& pc = pairs_[p];
            const Eigen::MatrixXd a = pc.actor.forward(batch.states, actor_tape);
            const Eigen::MatrixXd q = pc.critics[0].forward(joint(batch.states, a), critic_tape);
            diag.actor_loss[p] = -q.sum() / n;
            const Eigen::MatrixXd d_in =
                pc.critics[0].backward(critic_tape, Eigen::MatrixXd::Constant(1, q.cols(), -1.0 / n), critic_grads);
            pc.actor.backward(actor_tape, d_in.block(sd, 0, ad, d_in.cols()), actor_grads);
            pc.actor_opt.step(pc.actor, actor_grads);
        }
        for (auto& pc : pairs_) {
            soft_update(pc.actor_target, pc.actor, cfg_.soft_update_rate);
            for (std::size_t c = 0; c < pc.critics.size(); ++c)
                soft_update(pc.critic_targets[c], pc.critics[c], cfg_.soft_update_rate);
        }
    }
    return diag;
}

}  // namespace uavris::rl
