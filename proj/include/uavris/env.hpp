#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "uavris/channel.hpp"
#include "uavris/comms.hpp"
#include "uavris/energy.hpp"
#include "uavris/geometry.hpp"

namespace uavris {

struct Layout {
    Position3 bs_position{0.0, 0.0, 25.0};
    Position3 uav_start{50.0, 50.0, 50.0};
    Box node_bounds{{0.0, 0.0, 1.5}, {100.0, 100.0, 1.5}};
    std::vector<Position3> node_start;  // empty: uniform in bounds
    double element_spacing = 0.0;       // 0: half carrier wavelength
};

struct EnvConfig {
    std::size_t antennas = 8;   // Z
    std::size_t elements = 16;  // L
    std::size_t nodes = 3;      // K
    std::size_t horizon = 100;  // T slots per episode
    double qos_min = 70e6;      // bps per node
    double p_max = 1.0;         // W total at the BS
    double battery_capacity = 1000.0;
    double battery_initial_fraction = 0.5;
    double zeta = 0.01;
    double phi = 0.08;
    EhProtocol protocol = EhProtocol::HYBRID;
    bool use_renewable = true;
    double w_qos = 0.5;
    double w_overflow = 0.25;
    double w_causality = 0.5;
    bool terminate_on_empty = true;
    std::uint64_t seed = 1;

    ChannelConfig channel;
    EhConfig eh;
    MobilityConfig mobility;
    UavLimits uav;
    double uav_speed = 10.0;  // m/s
    std::size_t kmeans_clusters = 1;
    std::size_t kmeans_iters = 50;
    PrecoderKind precoder = PrecoderKind::MRT;
    Layout layout;

    /// Throws ConfigError describing the first inconsistency.
    void validate() const;
    std::size_t action_dim() const;
    std::size_t state_dim() const;
};

/// Per-slot physical audit. Energies in Joules.
struct SlotReport {
    std::size_t t = 0;
    double incident_rf_energy = 0.0;
    double eh_input_energy = 0.0;
    double harvested_rf_energy = 0.0;
    double harvested_solar_energy = 0.0;
    double consumed_energy = 0.0;
    std::vector<double> rates;
    std::vector<bool> qos_ok;
    double overflow = 0.0;
    bool causality_violated = false;
    double battery_level = 0.0;
    double efficiency = 0.0;
    bool precoder_fallback = false;

    std::size_t qos_violations() const;
};

/// Harvested RF over incident RF; zero when nothing was incident.
double efficiency(const SlotReport& report);

/// The penalised reward for a report under the given weights.
double reward_from_report(const SlotReport& report, const EnvConfig& cfg);

struct SlotOutcome {
    SlotReport report;
    double reward = 0.0;
    Battery battery;
    bool done = false;
};

struct StepResult {
    Eigen::VectorXd next_state;
    double reward = 0.0;
    bool done = false;
    SlotReport report;
};

/// Affine map from the agent's box [-1, 1]^D to physical action ranges.
/// Layout: TS/PS [alpha, theta(L), power(K)]; HYBRID [tau, rho, omega(L), theta(L), power(K)].
EhAction map_action(const Eigen::VectorXd& raw, const EnvConfig& cfg);
/// Inverse of map_action for actions whose powers sum to at most p_max.
Eigen::VectorXd action_to_raw(const EhAction& action, const EnvConfig& cfg);

class Environment {
public:
    explicit Environment(EnvConfig cfg);

    Eigen::VectorXd reset(std::optional<std::uint64_t> seed = std::nullopt);
    StepResult step_raw(const Eigen::VectorXd& raw);
    StepResult step(const EhAction& action);

    /// Pure evaluation of an action on the current slot: same physics as
    /// step, no state change, no randomness.
    SlotOutcome evaluate_slot(const EhAction& action) const;

    const EnvConfig& config() const { return cfg_; }
    const Scene& scene() const { return scene_; }
    const ChannelRealization& channels() const { return channels_; }
    const Battery& battery() const { return battery_; }
    double solar_this_slot() const { return solar_; }
    std::size_t t() const { return t_; }
    bool done() const { return done_; }
    Eigen::VectorXd state() const;

private:
    void begin_slot(bool first);
    StepResult commit(const EhAction& action, const Eigen::VectorXd& raw);

    EnvConfig cfg_;
    Rng mobility_rng_;
    Rng channel_rng_;
    Rng csi_rng_;
    Rng solar_rng_;
    std::uint64_t kmeans_seed_ = 0;

    Scene scene_;
    ChannelRealization channels_;
    Battery battery_;
    double solar_ = 0.0;
    Eigen::VectorXd prev_action_;
    std::size_t t_ = 0;
    bool live_ = false;
    bool done_ = false;
};

/// CSV schema of a SlotReport row (K rate columns).
std::string slot_csv_header(std::size_t nodes);
void write_slot_csv_row(std::ostream& os, const SlotReport& r, double reward);

}  // namespace uavris
