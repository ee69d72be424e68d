#include "uavris/comms.hpp"

#include <cmath>

#include "uavris/errors.hpp"

namespace uavris {

Eigen::RowVectorXcd cascade(const ComplexMatrix& g1, const ComplexVector& g2_k,
                            const std::vector<double>& theta, const std::vector<double>& amplitude) {
    const Eigen::Index l = g1.rows();
    if (g2_k.size() != l || static_cast<Eigen::Index>(theta.size()) != l ||
        static_cast<Eigen::Index>(amplitude.size()) != l)
        throw InvalidInput("cascade: element count mismatch");
    Eigen::RowVectorXcd h = Eigen::RowVectorXcd::Zero(g1.cols());
    for (Eigen::Index i = 0; i < l; ++i) {
        if (amplitude[static_cast<std::size_t>(i)] == 0.0) continue;
        const Complex coeff = g2_k(i) * std::polar(amplitude[static_cast<std::size_t>(i)],
                                                   theta[static_cast<std::size_t>(i)]);
        h += coeff * g1.row(i);
    }
    return h;
}

Precoding precode(const ComplexMatrix& g1_est, const std::vector<ComplexVector>& g2_est,
                  const std::vector<double>& theta, const std::vector<double>& amplitude,
                  const std::vector<double>& power, PrecoderKind kind) {
    const std::size_t k = g2_est.size();
    if (power.size() != k) throw InvalidInput("precode: power length != K");
    const Eigen::Index z = g1_est.cols();
    Precoding out;
    out.w = ComplexMatrix::Zero(z, static_cast<Eigen::Index>(k));

    ComplexMatrix h(static_cast<Eigen::Index>(k), z);
    for (std::size_t i = 0; i < k; ++i) h.row(static_cast<Eigen::Index>(i)) = cascade(g1_est, g2_est[i], theta, amplitude);

    ComplexMatrix dirs = h.adjoint();  // MRT directions, Z x K
    if (kind == PrecoderKind::ZF && static_cast<Eigen::Index>(k) <= z) {
        const ComplexMatrix gram = h * h.adjoint();
        Eigen::FullPivLU<ComplexMatrix> lu(gram);
        if (lu.isInvertible()) dirs = h.adjoint() * lu.inverse();
    }

    const double uniform = 1.0 / std::sqrt(static_cast<double>(z));
    for (std::size_t i = 0; i < k; ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const double amp = std::sqrt(std::max(power[i], 0.0));
        const double n = dirs.col(col).norm();
        if (n > 0.0 && std::isfinite(n)) {
            out.w.col(col) = dirs.col(col) * (amp / n);
        } else {
            out.fallback = true;
            out.w.col(col).setConstant(Complex(amp * uniform, 0.0));
        }
    }
    return out;
}

std::vector<double> incident_power(const ComplexMatrix& g1_true, const ComplexMatrix& w) {
    const ComplexMatrix field = g1_true * w;  // L x K
    std::vector<double> p(static_cast<std::size_t>(g1_true.rows()), 0.0);
    for (Eigen::Index l = 0; l < field.rows(); ++l)
        for (Eigen::Index k = 0; k < field.cols(); ++k) p[static_cast<std::size_t>(l)] += std::norm(field(l, k));
    return p;
}

LinkRates sinr_and_rate(const ComplexMatrix& g1_true, const std::vector<ComplexVector>& g2_true,
                        const std::vector<double>& theta, const std::vector<double>& amplitude,
                        const ComplexMatrix& w, const PhyParams& phy) {
    const std::size_t k = g2_true.size();
    LinkRates out;
    out.effective_gain.resize(static_cast<Eigen::Index>(k), w.cols());
    for (std::size_t i = 0; i < k; ++i)
        out.effective_gain.row(static_cast<Eigen::Index>(i)) = cascade(g1_true, g2_true[i], theta, amplitude) * w;

    out.sinr.resize(k);
    out.rate.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const double s = std::norm(out.effective_gain(row, row));
        double interference = 0.0;
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            if (j != row) interference += std::norm(out.effective_gain(row, j));
        const double received = s + interference;
        out.sinr[i] = s / (interference + phy.phi * received + phy.noise_power);
        out.rate[i] = phy.bandwidth * std::log2(1.0 + out.sinr[i]);
    }
    return out;
}

LinkBudget slot_link_budget(const ComplexMatrix& g1_true, const std::vector<ComplexVector>& g2_true,
                            const std::vector<double>& theta, const std::vector<Phase>& phases,
                            double slot_duration, const ComplexMatrix& w, const PhyParams& phy) {
    const std::size_t k = g2_true.size();
    LinkBudget out;
    out.p_inc_per_element = incident_power(g1_true, w);
    out.rate.assign(k, 0.0);
    double longest = -1.0;
    for (const Phase& ph : phases) {
        const LinkRates lr = sinr_and_rate(g1_true, g2_true, theta, ph.amplitude, w, phy);
        const double share = ph.duration / slot_duration;
        for (std::size_t i = 0; i < k; ++i) out.rate[i] += share * lr.rate[i];
        if (ph.duration > longest) {
            longest = ph.duration;
            out.effective_gain = lr.effective_gain;
        }
    }
    out.sinr.resize(k);
    for (std::size_t i = 0; i < k; ++i) out.sinr[i] = std::exp2(out.rate[i] / phy.bandwidth) - 1.0;
    return out;
}

}  // namespace uavris
