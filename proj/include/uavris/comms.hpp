#pragma once

#include <vector>

#include "uavris/channel.hpp"
#include "uavris/energy.hpp"

namespace uavris {

enum class PrecoderKind { MRT, ZF };

struct Precoding {
    ComplexMatrix w;        // Z x K, column k carries node k's stream
    bool fallback = false;  // some estimated cascade was all-zero
};

/// Node k's cascaded BS->RIS->node row vector (length Z):
/// sum_l g2_k[l] * amp_l * exp(j theta_l) * g1[l, :].
Eigen::RowVectorXcd cascade(const ComplexMatrix& g1, const ComplexVector& g2_k,
                            const std::vector<double>& theta, const std::vector<double>& amplitude);

/// Per-node beamformers on the estimated cascade, scaled to sqrt(p_k).
/// A zero cascade falls back to a uniform beam.
Precoding precode(const ComplexMatrix& g1_est, const std::vector<ComplexVector>& g2_est,
                  const std::vector<double>& theta, const std::vector<double>& amplitude,
                  const std::vector<double>& power, PrecoderKind kind = PrecoderKind::MRT);

/// RF power impinging on each RIS element: sum_k |g1[l,:] w_k|^2.
std::vector<double> incident_power(const ComplexMatrix& g1_true, const ComplexMatrix& w);

struct LinkBudget {
    std::vector<double> p_inc_per_element;
    ComplexMatrix effective_gain;  // (k, j): node k's gain on stream j
    std::vector<double> sinr;
    std::vector<double> rate;
};

struct PhyParams {
    double phi = 0.0;
    double noise_power = 1.0;
    double bandwidth = 1.0;
};

struct LinkRates {
    std::vector<double> sinr;
    std::vector<double> rate;
    ComplexMatrix effective_gain;
};

/// SINR with receiver distortion proportional to total received power:
/// S / (I + phi (S + I) + noise), rate = B log2(1 + sinr).
LinkRates sinr_and_rate(const ComplexMatrix& g1_true, const std::vector<ComplexVector>& g2_true,
                        const std::vector<double>& theta, const std::vector<double>& amplitude,
                        const ComplexMatrix& w, const PhyParams& phy);

/// Slot-average rates over a phase schedule, each phase weighted by its share
/// of the slot. The reported sinr is the one that would give the averaged
/// rate over the whole slot.
LinkBudget slot_link_budget(const ComplexMatrix& g1_true, const std::vector<ComplexVector>& g2_true,
                            const std::vector<double>& theta, const std::vector<Phase>& phases,
                            double slot_duration, const ComplexMatrix& w, const PhyParams& phy);

}  // namespace uavris
