#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "uavris/geometry.hpp"

namespace uavris::rl {

enum class Activation { Relu, Tanh, Identity };

struct Layer {
    Eigen::MatrixXd w;  // out x in
    Eigen::VectorXd b;
};

struct Gradients {
    std::vector<Eigen::MatrixXd> dw;
    std::vector<Eigen::VectorXd> db;
};

/// Activations kept from a forward pass, needed by backward().
struct Tape {
    std::vector<Eigen::MatrixXd> inputs;  // input to each layer
    std::vector<Eigen::MatrixXd> outputs; // post-activation output of each layer
};

/// Fully connected network. Batches are column-major: one sample per column.
class Mlp {
public:
    Mlp() = default;
    /// Fan-in uniform init; the last layer is drawn from +-final_scale.
    Mlp(const std::vector<std::size_t>& sizes, Activation hidden, Activation output, Rng& rng,
        double final_scale = 3e-3);

    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Tape& tape) const;

    /// Accumulates parameter gradients of sum(d_out .* output) into `grads`
    /// (which is resized/zeroed here) and returns the gradient w.r.t. input.
    Eigen::MatrixXd backward(const Tape& tape, const Eigen::MatrixXd& d_out, Gradients& grads) const;

    std::size_t input_size() const { return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.front().w.cols()); }
    std::size_t output_size() const { return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.back().w.rows()); }
    std::size_t parameter_count() const;

    std::vector<Layer>& layers() { return layers_; }
    const std::vector<Layer>& layers() const { return layers_; }
    Activation hidden_activation() const { return hidden_; }
    Activation output_activation() const { return output_; }

    /// Flat parameter view, layer by layer, weights (column-major) then bias.
    Eigen::VectorXd flat() const;
    void set_flat(const Eigen::VectorXd& p);

    bool operator==(const Mlp& o) const;

private:
    std::vector<Layer> layers_;
    Activation hidden_ = Activation::Relu;
    Activation output_ = Activation::Identity;
};

Eigen::VectorXd flatten(const Gradients& g);

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Bias-corrected adaptive-moment optimiser bound to one network's shapes.
class Adam {
public:
    Adam() = default;
    Adam(const Mlp& net, AdamConfig cfg);

    void step(Mlp& net, const Gradients& g);

    const AdamConfig& config() const { return cfg_; }
    long steps() const { return t_; }
    std::vector<Layer>& first_moment() { return m_; }
    std::vector<Layer>& second_moment() { return v_; }
    const std::vector<Layer>& first_moment() const { return m_; }
    const std::vector<Layer>& second_moment() const { return v_; }
    void set_steps(long t) { t_ = t; }

private:
    AdamConfig cfg_;
    std::vector<Layer> m_;
    std::vector<Layer> v_;
    long t_ = 0;
};

/// target <- rate * main + (1 - rate) * target, elementwise.
void soft_update(Mlp& target, const Mlp& main, double rate);

}  // namespace uavris::rl
