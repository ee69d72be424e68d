#include "uavris/rl/mlp.hpp"

#include <cmath>

#include "uavris/errors.hpp"

namespace uavris::rl {

namespace {

void activate(Eigen::MatrixXd& z, Activation a) {
    switch (a) {
        case Activation::Relu: z = z.cwiseMax(0.0); break;
        case Activation::Tanh: z = z.array().tanh().matrix(); break;
        case Activation::Identity: break;
    }
}

// d(activation)/dz expressed through the activation output y.
void chain(Eigen::MatrixXd& grad, const Eigen::MatrixXd& y, Activation a) {
    switch (a) {
        case Activation::Relu: grad = (y.array() > 0.0).select(grad, 0.0); break;
        case Activation::Tanh: grad = (grad.array() * (1.0 - y.array().square())).matrix(); break;
        case Activation::Identity: break;
    }
}

}  // namespace

Mlp::Mlp(const std::vector<std::size_t>& sizes, Activation hidden, Activation output, Rng& rng,
         double final_scale)
    : hidden_(hidden), output_(output) {
    if (sizes.size() < 2) throw InvalidInput("Mlp: need at least input and output sizes");
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        const auto in = static_cast<Eigen::Index>(sizes[i]);
        const auto out = static_cast<Eigen::Index>(sizes[i + 1]);
        const bool last = i + 2 == sizes.size();
        const double bound = last ? final_scale : 1.0 / std::sqrt(static_cast<double>(in));
        std::uniform_real_distribution<double> u(-bound, bound);
        Layer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd(out)};
        for (Eigen::Index c = 0; c < in; ++c)
            for (Eigen::Index r = 0; r < out; ++r) layer.w(r, c) = u(rng);
        for (Eigen::Index r = 0; r < out; ++r) layer.b(r) = u(rng);
        layers_.push_back(std::move(layer));
    }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd h = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        Eigen::MatrixXd z = layers_[i].w * h;
        z.colwise() += layers_[i].b;
        activate(z, i + 1 == layers_.size() ? output_ : hidden_);
        h = std::move(z);
    }
    return h;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Tape& tape) const {
    if (static_cast<std::size_t>(x.rows()) != input_size()) throw InvalidInput("Mlp::forward: input size mismatch");
    tape.inputs.clear();
    tape.outputs.clear();
    Eigen::MatrixXd h = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        tape.inputs.push_back(h);
        Eigen::MatrixXd z = layers_[i].w * h;
        z.colwise() += layers_[i].b;
        activate(z, i + 1 == layers_.size() ? output_ : hidden_);
        tape.outputs.push_back(z);
        h = std::move(z);
    }
    return h;
}

Eigen::MatrixXd Mlp::backward(const Tape& tape, const Eigen::MatrixXd& d_out, Gradients& grads) const {
    const std::size_t n = layers_.size();
    grads.dw.resize(n);
    grads.db.resize(n);
    Eigen::MatrixXd delta = d_out;
    for (std::size_t k = n; k-- > 0;) {
        chain(delta, tape.outputs[k], k + 1 == n ? output_ : hidden_);
        grads.dw[k].noalias() = delta * tape.inputs[k].transpose();
        grads.db[k] = delta.rowwise().sum();
        delta = layers_[k].w.transpose() * delta;
    }
    return delta;
}

std::size_t Mlp::parameter_count() const {
    std::size_t total = 0;
    for (const auto& l : layers_) total += static_cast<std::size_t>(l.w.size() + l.b.size());
    return total;
}

Eigen::VectorXd Mlp::flat() const {
    Eigen::VectorXd p(static_cast<Eigen::Index>(parameter_count()));
    Eigen::Index i = 0;
    for (const auto& l : layers_) {
        p.segment(i, l.w.size()) = Eigen::Map<const Eigen::VectorXd>(l.w.data(), l.w.size());
        i += l.w.size();
        p.segment(i, l.b.size()) = l.b;
        i += l.b.size();
    }
    return p;
}

void Mlp::set_flat(const Eigen::VectorXd& p) {
    if (static_cast<std::size_t>(p.size()) != parameter_count()) throw InvalidInput("Mlp::set_flat: size mismatch");
    Eigen::Index i = 0;
    for (auto& l : layers_) {
        Eigen::Map<Eigen::VectorXd>(l.w.data(), l.w.size()) = p.segment(i, l.w.size());
        i += l.w.size();
        l.b = p.segment(i, l.b.size());
        i += l.b.size();
    }
}

bool Mlp::operator==(const Mlp& o) const {
    if (layers_.size() != o.layers_.size() || hidden_ != o.hidden_ || output_ != o.output_) return false;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (layers_[i].w.rows() != o.layers_[i].w.rows() || layers_[i].w.cols() != o.layers_[i].w.cols()) return false;
        if (layers_[i].w != o.layers_[i].w || layers_[i].b != o.layers_[i].b) return false;
    }
    return true;
}

Eigen::VectorXd flatten(const Gradients& g) {
    Eigen::Index total = 0;
    for (std::size_t i = 0; i < g.dw.size(); ++i) total += g.dw[i].size() + g.db[i].size();
    Eigen::VectorXd p(total);
    Eigen::Index i = 0;
    for (std::size_t k = 0; k < g.dw.size(); ++k) {
        p.segment(i, g.dw[k].size()) = Eigen::Map<const Eigen::VectorXd>(g.dw[k].data(), g.dw[k].size());
        i += g.dw[k].size();
        p.segment(i, g.db[k].size()) = g.db[k];
        i += g.db[k].size();
    }
    return p;
}

Adam::Adam(const Mlp& net, AdamConfig cfg) : cfg_(cfg) {
    for (const auto& l : net.layers()) {
        m_.push_back({Eigen::MatrixXd::Zero(l.w.rows(), l.w.cols()), Eigen::VectorXd::Zero(l.b.size())});
        v_.push_back({Eigen::MatrixXd::Zero(l.w.rows(), l.w.cols()), Eigen::VectorXd::Zero(l.b.size())});
    }
}

void Adam::step(Mlp& net, const Gradients& g) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
        m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * grad;
        v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * grad.cwiseProduct(grad);
        param.array() -= cfg_.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg_.eps);
    };
    auto& layers = net.layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
        update(layers[i].w, g.dw[i], m_[i].w, v_[i].w);
        update(layers[i].b, g.db[i], m_[i].b, v_[i].b);
    }
}

void soft_update(Mlp& target, const Mlp& main, double rate) {
    auto& t = target.layers();
    const auto& m = main.layers();
    if (t.size() != m.size()) throw InvalidInput("soft_update: network shapes differ");
    if (rate == 1.0) {
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = m[i];
        return;
    }
    if (rate == 0.0) return;
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i].w = rate * m[i].w + (1.0 - rate) * t[i].w;
        t[i].b = rate * m[i].b + (1.0 - rate) * t[i].b;
    }
}

}  // namespace uavris::rl
