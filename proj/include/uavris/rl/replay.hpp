#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "uavris/geometry.hpp"

namespace uavris::rl {

struct Transition {
    Eigen::VectorXd state;
    Eigen::VectorXd action;  // raw, in [-1,1]^D
    double reward = 0.0;
    Eigen::VectorXd next_state;
    bool done = false;
};

/// Column-stacked minibatch.
struct Batch {
    Eigen::MatrixXd states;       // state_dim x N
    Eigen::MatrixXd actions;      // action_dim x N
    Eigen::VectorXd rewards;      // N
    Eigen::MatrixXd next_states;  // state_dim x N
    Eigen::VectorXd done;         // N, 0 or 1
    std::vector<std::size_t> slots;  // ring indices the rows came from

    std::size_t size() const { return static_cast<std::size_t>(rewards.size()); }
};

/// Fixed-capacity FIFO ring of transitions.
class ReplayBuffer {
public:
    ReplayBuffer(std::size_t capacity, std::size_t state_dim, std::size_t action_dim);

    void push(const Transition& t);
    void push(const Eigen::VectorXd& s, const Eigen::VectorXd& a, double r, const Eigen::VectorXd& s2, bool done);

    /// Uniform sample of distinct stored transitions.
    Batch sample(std::size_t n, Rng& rng) const;

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    std::size_t state_dim() const { return state_dim_; }
    std::size_t action_dim() const { return action_dim_; }
    /// Total pushes since construction.
    std::size_t inserted() const { return inserted_; }
    /// Insertion serial number (0-based) of the transition in ring slot i.
    std::size_t serial(std::size_t slot) const { return serials_.at(slot); }
    const Transition& at(std::size_t slot) const { return data_.at(slot); }

private:
    std::size_t capacity_;
    std::size_t state_dim_;
    std::size_t action_dim_;
    std::vector<Transition> data_;
    std::vector<std::size_t> serials_;
    std::size_t size_ = 0;
    std::size_t head_ = 0;
    std::size_t inserted_ = 0;
};

}  // namespace uavris::rl
