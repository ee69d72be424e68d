#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "uavris/geometry.hpp"

namespace uavris {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct ChannelConfig {
    double pathloss_exponent_bs_ris = 2.2;
    double pathloss_exponent_ris_node = 2.5;
    double ref_loss_db = 30.0;  // at 1 m
    double rician_k = 3.0;      // linear LoS/scatter power ratio
    double noise_power = 2.5118864315095823e-13;  // -96 dBm
    double bandwidth = 20e6;
    double carrier_wavelength = 0.125;  // 2.4 GHz
};

/// One slot of small-scale fading, true and as estimated by the controller.
/// g1 is L x Z (BS antennas to RIS elements); g2[k] is the length-L RIS to
/// node-k vector. Large-scale gains are folded into the entries.
struct ChannelRealization {
    ComplexMatrix g1_true;
    std::vector<ComplexVector> g2_true;
    ComplexMatrix g1_est;
    std::vector<ComplexVector> g2_est;
    double gain_bs_ris = 0.0;
    std::vector<double> gain_ris_node;
    double zeta = 0.0;
};

/// Log-distance path loss, linear power gain. Distances below 1 m are
/// clamped to the reference distance.
double path_loss(double distance, double exponent, double ref_loss_db);

/// i.i.d. CN(0, gain) entries.
ComplexMatrix sample_bs_ris(Rng& rng, std::size_t z, std::size_t l, double gain);

/// Rician RIS-to-node vector whose LoS phase follows the element-to-node
/// distance. Per-entry mean power equals `gain`.
ComplexVector sample_ris_node(Rng& rng, const std::vector<Position3>& element_positions,
                              const Position3& node_position, double rician_k, double gain,
                              double wavelength);

/// Additive-error CSI surrogate: sqrt(1-zeta) h + sqrt(zeta) e with
/// e ~ CN(0, mean_power). zeta = 0 returns h unchanged.
ComplexMatrix estimate_csi(const ComplexMatrix& h, double zeta, double mean_power, Rng& rng);
ComplexVector estimate_csi(const ComplexVector& h, double zeta, double mean_power, Rng& rng);

/// Samples both hops for the current geometry and estimates them.
ChannelRealization sample_channels(Rng& rng, const Scene& scene, std::size_t antennas,
                                   const ChannelConfig& cfg, double zeta);

}  // namespace uavris
