#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "uavris/comms.hpp"
#include "uavris/errors.hpp"

using namespace uavris;

namespace {

ComplexMatrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = Complex(n(rng), n(rng));
    return m;
}

std::vector<ComplexVector> random_nodes(Rng& rng, std::size_t k, Eigen::Index l) {
    std::vector<ComplexVector> g2;
    for (std::size_t i = 0; i < k; ++i) g2.push_back(random_matrix(rng, l, 1).col(0));
    return g2;
}

std::vector<double> random_phases(Rng& rng, std::size_t l) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    std::vector<double> t(l);
    for (auto& v : t) v = u(rng);
    return t;
}

}  // namespace

TEST_CASE("scalar MRT precoder") {
    ComplexMatrix g1(1, 1);
    g1(0, 0) = Complex(0.6, 0.8);
    const std::vector<ComplexVector> g2{ComplexVector::Constant(1, Complex(0.0, 2.0))};
    const auto p = precode(g1, g2, {0.0}, {1.0}, {4.0});
    const Complex h = g2[0](0) * g1(0, 0);
    CHECK(std::abs(p.w(0, 0) - 2.0 * std::conj(h) / std::abs(h)) < 1e-12);
    CHECK_FALSE(p.fallback);
}

TEST_CASE("precoder columns carry the requested power") {
    Rng rng(21);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (auto kind : {PrecoderKind::MRT, PrecoderKind::ZF}) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto g1 = random_matrix(rng, 6, 4);
            const auto g2 = random_nodes(rng, 3, 6);
            std::vector<double> power{u(rng), u(rng), 0.0};
            const auto p = precode(g1, g2, random_phases(rng, 6), std::vector<double>(6, 1.0), power, kind);
            for (Eigen::Index k = 0; k < 3; ++k)
                CHECK(p.w.col(k).squaredNorm() == doctest::Approx(power[static_cast<std::size_t>(k)]).epsilon(1e-10));
            CHECK(p.w.col(2).norm() == 0.0);
        }
    }
}

TEST_CASE("zero-forcing nulls inter-node interference on the estimate") {
    Rng rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g1 = random_matrix(rng, 8, 4);
        const auto g2 = random_nodes(rng, 3, 8);
        const auto theta = random_phases(rng, 8);
        const std::vector<double> amp(8, 1.0);
        const auto p = precode(g1, g2, theta, amp, {1.0, 1.0, 1.0}, PrecoderKind::ZF);
        for (std::size_t i = 0; i < 3; ++i) {
            const Eigen::RowVectorXcd gain = cascade(g1, g2[i], theta, amp) * p.w;
            for (Eigen::Index j = 0; j < 3; ++j)
                if (j != static_cast<Eigen::Index>(i)) CHECK(std::abs(gain(j)) < 1e-9 * std::abs(gain(static_cast<Eigen::Index>(i))));
        }
    }
}

TEST_CASE("zero cascade falls back to a uniform beam") {
    const ComplexMatrix g1 = ComplexMatrix::Zero(2, 4);
    const std::vector<ComplexVector> g2{ComplexVector::Ones(2)};
    const auto p = precode(g1, g2, {0.0, 0.0}, {1.0, 1.0}, {1.0});
    CHECK(p.fallback);
    for (Eigen::Index z = 0; z < 4; ++z) CHECK(std::abs(p.w(z, 0) - Complex(0.5, 0.0)) < 1e-15);
}

TEST_CASE("incident power per element") {
    Rng rng(23);
    const auto g1 = random_matrix(rng, 5, 3);
    CHECK(incident_power(g1, ComplexMatrix::Zero(3, 2)) == std::vector<double>(5, 0.0));

    const auto w = random_matrix(rng, 3, 2);
    const auto p = incident_power(g1, w);
    for (Eigen::Index l = 0; l < 5; ++l) {
        double expect = 0.0;
        for (Eigen::Index k = 0; k < 2; ++k) {
            Complex field = 0.0;
            for (Eigen::Index z = 0; z < 3; ++z) field += g1(l, z) * w(z, k);
            expect += std::norm(field);
        }
        CHECK(p[static_cast<std::size_t>(l)] == doctest::Approx(expect).epsilon(1e-12));
    }

    ComplexMatrix scalar(1, 1);
    scalar(0, 0) = Complex(0.0, 3.0);
    ComplexMatrix w1(1, 1);
    w1(0, 0) = Complex(0.5, 0.0);
    CHECK(incident_power(scalar, w1)[0] == doctest::Approx(2.25));
}

TEST_CASE("distortion-limited SINR") {
    ComplexMatrix g1 = ComplexMatrix::Ones(1, 1);
    const std::vector<ComplexVector> g2{ComplexVector::Ones(1)};
    ComplexMatrix w = ComplexMatrix::Ones(1, 1);
    const auto r = sinr_and_rate(g1, g2, {0.0}, {1.0}, w, {0.08, 1.0, 1.0});
    CHECK(r.sinr[0] == doctest::Approx(1.0 / 1.08).epsilon(1e-12));
    CHECK(r.rate[0] == doctest::Approx(std::log2(1.0 + 1.0 / 1.08)).epsilon(1e-12));

    w(0, 0) = 1e6;
    CHECK(sinr_and_rate(g1, g2, {0.0}, {1.0}, w, {0.08, 1.0, 1.0}).sinr[0] == doctest::Approx(12.5).epsilon(1e-9));

    const auto off = sinr_and_rate(g1, g2, {0.0}, {0.0}, w, {0.08, 1.0, 20e6});
    CHECK(off.sinr[0] == 0.0);
    CHECK(off.rate[0] == 0.0);
}

TEST_CASE("single-node rate grows with power") {
    Rng rng(24);
    const auto g1 = random_matrix(rng, 4, 2);
    const auto g2 = random_nodes(rng, 1, 4);
    const auto theta = random_phases(rng, 4);
    const std::vector<double> amp(4, 1.0);
    double last = -1.0;
    for (int i = 0; i <= 50; ++i) {
        const double p = 0.1 * i;
        const auto pre = precode(g1, g2, theta, amp, {p});
        const double rate = sinr_and_rate(g1, g2, theta, amp, pre.w, {0.08, 0.01, 1.0}).rate[0];
        CHECK(rate >= last);
        last = rate;
    }
}

TEST_CASE("common phase offset leaves rates unchanged") {
    Rng rng(25);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g1 = random_matrix(rng, 6, 3);
        const auto g2 = random_nodes(rng, 2, 6);
        auto theta = random_phases(rng, 6);
        const std::vector<double> amp(6, 1.0);
        const auto w = random_matrix(rng, 3, 2);
        const PhyParams phy{0.05, 0.1, 1.0};
        const auto a = sinr_and_rate(g1, g2, theta, amp, w, phy);
        for (auto& t : theta) t += 1.234;
        const auto b = sinr_and_rate(g1, g2, theta, amp, w, phy);
        for (std::size_t k = 0; k < 2; ++k) CHECK(a.rate[k] == doctest::Approx(b.rate[k]).epsilon(1e-10));
    }
}

TEST_CASE("co-phasing beats every grid phase configuration") {
    Rng rng(26);
    const auto g1 = random_matrix(rng, 2, 1);
    const auto g2 = random_nodes(rng, 1, 2);
    const ComplexMatrix w = ComplexMatrix::Ones(1, 1);
    const std::vector<double> amp(2, 1.0);
    const PhyParams phy{0.0, 1.0, 1.0};
    std::vector<double> best_theta(2);
    for (std::size_t l = 0; l < 2; ++l) best_theta[l] = -std::arg(g2[0](static_cast<Eigen::Index>(l)) * g1(static_cast<Eigen::Index>(l), 0));
    const double best = sinr_and_rate(g1, g2, best_theta, amp, w, phy).sinr[0];
    const double closed = std::pow(std::abs(g2[0](0) * g1(0, 0)) + std::abs(g2[0](1) * g1(1, 0)), 2);
    CHECK(best == doctest::Approx(closed).epsilon(1e-12));
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            const std::vector<double> theta{2.0 * std::numbers::pi * i / 64, 2.0 * std::numbers::pi * j / 64};
            CHECK(sinr_and_rate(g1, g2, theta, amp, w, phy).sinr[0] <= best * (1.0 + 1e-12));
        }
}

TEST_CASE("slot link budget averages rates over phases") {
    Rng rng(27);
    const auto g1 = random_matrix(rng, 4, 2);
    const auto g2 = random_nodes(rng, 2, 4);
    const auto theta = random_phases(rng, 4);
    const auto w = random_matrix(rng, 2, 2);
    const PhyParams phy{0.08, 0.1, 10.0};
    const Phase dark{0.3, std::vector<double>(4, 0.0), std::vector<double>(4, 0.0)};
    const Phase lit{0.7, std::vector<double>(4, 0.8), std::vector<double>(4, 0.0)};
    const auto budget = slot_link_budget(g1, g2, theta, {dark, lit}, 1.0, w, phy);
    const auto full = sinr_and_rate(g1, g2, theta, lit.amplitude, w, phy);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(budget.rate[k] == doctest::Approx(0.7 * full.rate[k]).epsilon(1e-12));
        CHECK(phy.bandwidth * std::log2(1.0 + budget.sinr[k]) == doctest::Approx(budget.rate[k]).epsilon(1e-10));
    }
    CHECK(budget.p_inc_per_element == incident_power(g1, w));
}

TEST_CASE("comms shape errors") {
    Rng rng(28);
    const auto g1 = random_matrix(rng, 3, 2);
    const auto g2 = random_nodes(rng, 2, 3);
    CHECK_THROWS_AS(cascade(g1, g2[0], {0.0, 0.0}, {1.0, 1.0, 1.0}), InvalidInput);
    CHECK_THROWS_AS(precode(g1, g2, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {1.0}), InvalidInput);
}
