#include "uavris/channel.hpp"

#include <algorithm>
#include <numbers>

#include "uavris/errors.hpp"

namespace uavris {

namespace {

Complex cn(Rng& rng, double power) {
    std::normal_distribution<double> n(0.0, std::sqrt(power / 2.0));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

void check_zeta(double zeta) {
    if (!(zeta >= 0.0 && zeta <= 1.0)) throw InvalidInput("estimate_csi: zeta must lie in [0, 1]");
}

}  // namespace

double path_loss(double distance, double exponent, double ref_loss_db) {
    constexpr double d_ref = 1.0;
    const double d = std::max(distance, d_ref);
    return std::pow(10.0, -ref_loss_db / 10.0) * std::pow(d / d_ref, -exponent);
}

ComplexMatrix sample_bs_ris(Rng& rng, std::size_t z, std::size_t l, double gain) {
    ComplexMatrix g(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(z));
    for (Eigen::Index r = 0; r < g.rows(); ++r)
        for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = cn(rng, gain);
    return g;
}

ComplexVector sample_ris_node(Rng& rng, const std::vector<Position3>& element_positions,
                              const Position3& node_position, double rician_k, double gain,
                              double wavelength) {
    const double los = std::sqrt(rician_k / (rician_k + 1.0));
    const double nlos = std::sqrt(1.0 / (rician_k + 1.0));
    const double amp = std::sqrt(gain);
    ComplexVector g(static_cast<Eigen::Index>(element_positions.size()));
    for (std::size_t i = 0; i < element_positions.size(); ++i) {
        const double d = distance(element_positions[i], node_position);
        const Complex steer = std::polar(1.0, -2.0 * std::numbers::pi * d / wavelength);
        g(static_cast<Eigen::Index>(i)) = amp * (los * steer + nlos * cn(rng, 1.0));
    }
    return g;
}

ComplexMatrix estimate_csi(const ComplexMatrix& h, double zeta, double mean_power, Rng& rng) {
    check_zeta(zeta);
    if (zeta == 0.0) return h;
    const double keep = std::sqrt(1.0 - zeta);
    const double err = std::sqrt(zeta);
    ComplexMatrix out(h.rows(), h.cols());
    for (Eigen::Index r = 0; r < h.rows(); ++r)
        for (Eigen::Index c = 0; c < h.cols(); ++c) out(r, c) = keep * h(r, c) + err * cn(rng, mean_power);
    return out;
}

ComplexVector estimate_csi(const ComplexVector& h, double zeta, double mean_power, Rng& rng) {
    ComplexMatrix m = h;
    return estimate_csi(m, zeta, mean_power, rng).col(0);
}

ChannelRealization sample_channels(Rng& rng, const Scene& scene, std::size_t antennas,
                                   const ChannelConfig& cfg, double zeta) {
    ChannelRealization ch;
    ch.zeta = zeta;
    const auto elements = element_world_positions(scene);
    const std::size_t l = elements.size();

    ch.gain_bs_ris = path_loss(distance(scene.bs_position, scene.uav_position),
                               cfg.pathloss_exponent_bs_ris, cfg.ref_loss_db);
    ch.g1_true = sample_bs_ris(rng, antennas, l, ch.gain_bs_ris);
    for (const auto& node : scene.node_positions) {
        const double gain = path_loss(distance(scene.uav_position, node),
                                      cfg.pathloss_exponent_ris_node, cfg.ref_loss_db);
        ch.gain_ris_node.push_back(gain);
        ch.g2_true.push_back(sample_ris_node(rng, elements, node, cfg.rician_k, gain,
                                             cfg.carrier_wavelength));
    }
    ch.g1_est = estimate_csi(ch.g1_true, zeta, ch.gain_bs_ris, rng);
    for (std::size_t k = 0; k < ch.g2_true.size(); ++k)
        ch.g2_est.push_back(estimate_csi(ch.g2_true[k], zeta, ch.gain_ris_node[k], rng));
    return ch;
}

}  // namespace uavris
