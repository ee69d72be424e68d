#include "uavris/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uavris/errors.hpp"

namespace uavris {

std::string_view to_string(EhProtocol p) {
    switch (p) {
        case EhProtocol::TS: return "TS";
        case EhProtocol::PS: return "PS";
        case EhProtocol::HYBRID: return "HYBRID";
    }
    return "?";
}

EhProtocol protocol_from_string(std::string_view s) {
    if (s == "TS") return EhProtocol::TS;
    if (s == "PS") return EhProtocol::PS;
    if (s == "HYBRID") return EhProtocol::HYBRID;
    throw InvalidInput("unknown EH protocol '" + std::string(s) + "'");
}

double rectify(double p_in, const EhConfig& cfg) {
    const double m = cfg.rectifier_max_power;
    const double a = cfg.rectifier_a;
    const double b = cfg.rectifier_b;
    const double sigmoid = 1.0 / (1.0 + std::exp(-a * (p_in - b)));
    const double omega = 1.0 / (1.0 + std::exp(a * b));
    return std::max(0.0, m * (sigmoid - omega) / (1.0 - omega));
}

double Phase::total_eh_input() const {
    return std::accumulate(eh_input.begin(), eh_input.end(), 0.0);
}

namespace {

void check_fraction(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput(std::string("incident_split: ") + what + " outside [0, 1]");
}

Phase harvest_all(const std::vector<double>& p_inc, double duration) {
    return {duration, std::vector<double>(p_inc.size(), 0.0), p_inc};
}

Phase reflect_all(std::size_t l, double duration) {
    return {duration, std::vector<double>(l, 1.0), std::vector<double>(l, 0.0)};
}

Phase power_split(const std::vector<double>& p_inc, double rho, double duration) {
    Phase ph{duration, std::vector<double>(p_inc.size(), std::sqrt(1.0 - rho)), {}};
    ph.eh_input.reserve(p_inc.size());
    for (double p : p_inc) ph.eh_input.push_back(rho * p);
    return ph;
}

Phase element_split(const std::vector<double>& p_inc, const std::vector<double>& omega,
                    double duration) {
    Phase ph{duration, std::vector<double>(p_inc.size()), std::vector<double>(p_inc.size())};
    for (std::size_t l = 0; l < p_inc.size(); ++l) {
        const bool harvest = omega[l] >= 0.5;
        ph.amplitude[l] = harvest ? 0.0 : 1.0;
        ph.eh_input[l] = harvest ? p_inc[l] : 0.0;
    }
    return ph;
}

}  // namespace

SplitResult incident_split(const std::vector<double>& p_inc, const EhAction& action,
                           EhProtocol protocol, const EhConfig& cfg) {
    const std::size_t l = p_inc.size();
    if (l == 0) throw InvalidInput("incident_split: no RIS elements");
    if (action.theta.size() != l) throw InvalidInput("incident_split: theta length != L");
    check_fraction(action.tau, "tau");
    check_fraction(action.rho, "rho");

    const double slot = cfg.slot_duration;
    SplitResult out;
    switch (protocol) {
        case EhProtocol::TS:
            out.phases.push_back(harvest_all(p_inc, action.tau * slot));
            out.phases.push_back(reflect_all(l, (1.0 - action.tau) * slot));
            break;
        case EhProtocol::PS:
            out.phases.push_back(power_split(p_inc, action.rho, slot));
            break;
        case EhProtocol::HYBRID:
            if (action.omega.size() != l) throw InvalidInput("incident_split: omega length != L");
            out.phases.push_back(element_split(p_inc, action.omega, action.tau * slot));
            out.phases.push_back(power_split(p_inc, action.rho, (1.0 - action.tau) * slot));
            break;
    }

    for (const Phase& ph : out.phases) {
        out.eh_input_energy += ph.duration * ph.total_eh_input();
        if (cfg.per_element_rectifier) {
            double p_out = 0.0;
            for (double p : ph.eh_input) p_out += rectify(p, cfg);
            out.harvested_energy += ph.duration * p_out;
        } else {
            out.harvested_energy += ph.duration * rectify(ph.total_eh_input(), cfg);
        }
    }
    return out;
}

double sample_solar(Rng& rng, const EhConfig& cfg) {
    if (cfg.solar_rate_lambda <= 0.0 || cfg.solar_packet <= 0.0) return 0.0;
    const double mean_count = cfg.solar_rate_lambda * cfg.slot_duration / cfg.solar_packet;
    std::poisson_distribution<long> arrivals(mean_count);
    return static_cast<double>(arrivals(rng)) * cfg.solar_packet;
}

BatteryStep battery_step(const Battery& b, double harvested, double consumed) {
    BatteryStep out;
    const double filled = b.level + harvested;
    out.overflow = std::max(0.0, filled - b.capacity);
    const double available = std::min(b.capacity, filled);
    out.causality_violated = consumed > available;
    out.consumed = std::min(consumed, available);
    out.battery = {available - out.consumed, b.capacity};
    return out;
}

}  // namespace uavris
