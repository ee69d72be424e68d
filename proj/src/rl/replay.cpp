#include "uavris/rl/replay.hpp"

#include <unordered_set>

#include "uavris/errors.hpp"

namespace uavris::rl {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t state_dim, std::size_t action_dim)
    : capacity_(capacity), state_dim_(state_dim), action_dim_(action_dim) {
    if (capacity == 0) throw InvalidInput("ReplayBuffer: capacity must be positive");
    data_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::push(const Transition& t) {
    if (static_cast<std::size_t>(t.state.size()) != state_dim_ ||
        static_cast<std::size_t>(t.next_state.size()) != state_dim_ ||
        static_cast<std::size_t>(t.action.size()) != action_dim_)
        throw InvalidInput("ReplayBuffer::push: dimension mismatch");
    if (size_ < capacity_) {
        data_.push_back(t);
        serials_.push_back(inserted_);
        ++size_;
    } else {
        data_[head_] = t;
        serials_[head_] = inserted_;
    }
    head_ = (head_ + 1) % capacity_;
    ++inserted_;
}

void ReplayBuffer::push(const Eigen::VectorXd& s, const Eigen::VectorXd& a, double r, const Eigen::VectorXd& s2,
                        bool done) {
    push(Transition{s, a, r, s2, done});
}

Batch ReplayBuffer::sample(std::size_t n, Rng& rng) const {
    if (n == 0 || n > size_) throw InvalidInput("ReplayBuffer::sample: batch larger than buffer");
    // Floyd's algorithm: n distinct indices from [0, size_).
    std::vector<std::size_t> picks;
    picks.reserve(n);
    std::unordered_set<std::size_t> seen;
    for (std::size_t j = size_ - n; j < size_; ++j) {
        std::uniform_int_distribution<std::size_t> u(0, j);
        std::size_t v = u(rng);
        if (seen.count(v)) v = j;
        seen.insert(v);
        picks.push_back(v);
    }

    Batch b;
    const auto N = static_cast<Eigen::Index>(n);
    b.states.resize(static_cast<Eigen::Index>(state_dim_), N);
    b.next_states.resize(static_cast<Eigen::Index>(state_dim_), N);
    b.actions.resize(static_cast<Eigen::Index>(action_dim_), N);
    b.rewards.resize(N);
    b.done.resize(N);
    b.slots = picks;
    for (Eigen::Index i = 0; i < N; ++i) {
        const Transition& t = data_[picks[static_cast<std::size_t>(i)]];
        b.states.col(i) = t.state;
        b.next_states.col(i) = t.next_state;
        b.actions.col(i) = t.action;
        b.rewards(i) = t.reward;
        b.done(i) = t.done ? 1.0 : 0.0;
    }
    return b;
}

}  // namespace uavris::rl
