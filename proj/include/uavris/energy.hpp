#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "uavris/geometry.hpp"

namespace uavris {

/// ES is HYBRID with tau = 1 and no PS phase.
enum class EhProtocol { TS, PS, HYBRID };

std::string_view to_string(EhProtocol p);
EhProtocol protocol_from_string(std::string_view s);

struct EhAction {
    double tau = 0.0;
    double rho = 0.0;
    std::vector<double> omega;  // per-element ES factor, element harvests iff >= 0.5
    std::vector<double> theta;  // radians in [0, 2pi)
    std::vector<double> power;  // Watts per node
};

struct EhConfig {
    double rectifier_max_power = 24e-3;  // M, Watts
    double rectifier_a = 150.0;          // 1/W
    double rectifier_b = 14e-3;          // W
    double solar_rate_lambda = 0.05;     // J/s
    double solar_packet = 0.05;          // J per arrival
    double slot_duration = 1.0;          // s
    double hover_drain = 5.0;            // W
    bool per_element_rectifier = false;
};

/// Normalised logistic rectifier: 0 at 0, saturates at M.
double rectify(double p_in, const EhConfig& cfg);

/// One sub-interval of a slot: how long it lasts, what each element
/// reflects (amplitude), and what each element feeds its rectifier (W).
struct Phase {
    double duration = 0.0;
    std::vector<double> amplitude;
    std::vector<double> eh_input;

    double total_eh_input() const;
};

struct SplitResult {
    std::vector<Phase> phases;
    double eh_input_energy = 0.0;  // J into the rectifier(s)
    double harvested_energy = 0.0; // J out of the rectifier(s)
};

/// Applies a protocol's time/power/element split to the per-element incident
/// powers for one slot of `cfg.slot_duration` seconds.
SplitResult incident_split(const std::vector<double>& p_inc, const EhAction& action,
                           EhProtocol protocol, const EhConfig& cfg);

/// Solar energy arriving at the start of a slot: Poisson count of packets.
double sample_solar(Rng& rng, const EhConfig& cfg);

struct Battery {
    double level = 0.0;
    double capacity = 0.0;
};

struct BatteryStep {
    Battery battery;
    double overflow = 0.0;
    double consumed = 0.0;  // actually drawn, capped at what was available
    bool causality_violated = false;
};

/// Harvest, then consume. Overflow is clipped; a consumption larger than the
/// post-harvest level is capped and flagged rather than thrown.
BatteryStep battery_step(const Battery& b, double harvested, double consumed);

}  // namespace uavris
