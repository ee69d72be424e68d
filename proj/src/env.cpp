#include "uavris/env.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "uavris/errors.hpp"

namespace uavris {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Rng stream(std::uint64_t seed, std::uint64_t id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id)};
    return Rng(seq);
}

double to_fraction(double raw) { return 0.5 * (std::clamp(raw, -1.0, 1.0) + 1.0); }

double wrap_phase(double theta) {
    double w = std::fmod(theta, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

}  // namespace

void EnvConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (antennas < 1 || elements < 1 || nodes < 1 || horizon < 1) fail("Z, L, K and T must be >= 1");
    if (!(qos_min > 0.0)) fail("qos_min must be > 0");
    if (!(p_max > 0.0)) fail("p_max must be > 0");
    if (!(battery_capacity > 0.0)) fail("battery_capacity must be > 0");
    if (battery_initial_fraction < 0.0 || battery_initial_fraction > 1.0)
        fail("battery_initial_fraction must lie in [0, 1]");
    if (zeta < 0.0 || zeta > 1.0) fail("zeta must lie in [0, 1]");
    if (phi < 0.0) fail("phi must be >= 0");
    if (w_qos < 0.0 || w_overflow < 0.0 || w_causality < 0.0) fail("penalty weights must be >= 0");
    if (!(channel.noise_power > 0.0)) fail("noise_power must be > 0");
    if (!(channel.bandwidth > 0.0)) fail("bandwidth must be > 0");
    if (!(channel.carrier_wavelength > 0.0)) fail("carrier_wavelength must be > 0");
    if (channel.rician_k < 0.0) fail("rician_k must be >= 0");
    if (!(eh.rectifier_max_power > 0.0 && eh.rectifier_a > 0.0 && eh.rectifier_b > 0.0))
        fail("rectifier constants must be > 0");
    if (!(eh.slot_duration > 0.0)) fail("slot_duration must be > 0");
    if (eh.hover_drain < 0.0 || eh.solar_rate_lambda < 0.0) fail("hover_drain and solar rate must be >= 0");
    if (!(eh.solar_packet > 0.0)) fail("solar_packet must be > 0");
    if (mobility.v_node_min < 0.0 || mobility.v_node_max < mobility.v_node_min)
        fail("node speeds must satisfy 0 <= v_min <= v_max");
    if (uav.z_min < 0.0 || uav.z_max < uav.z_min) fail("UAV altitude limits must satisfy 0 <= z_min <= z_max");
    if (!(uav_speed > 0.0)) fail("uav_speed must be > 0");
    if (kmeans_clusters < 1 || kmeans_clusters > nodes) fail("kmeans_clusters must lie in [1, K]");
    const Box& b = layout.node_bounds;
    if (b.lo.x > b.hi.x || b.lo.y > b.hi.y || b.lo.z > b.hi.z || b.lo.z < 0.0) fail("node_bounds is not a valid box");
    if (!layout.node_start.empty()) {
        if (layout.node_start.size() != nodes) fail("node_start must list exactly K positions");
        for (const auto& p : layout.node_start)
            if (!b.contains(p)) fail("node_start position outside node_bounds");
    }
    if (layout.bs_position.z < 0.0) fail("bs_position.z must be >= 0");
}

std::size_t EnvConfig::action_dim() const {
    return protocol == EhProtocol::HYBRID ? 2 + 2 * elements + nodes : 1 + elements + nodes;
}

std::size_t EnvConfig::state_dim() const {
    return 2 * elements * antennas + 2 * elements * nodes + 3 * elements + 3 * nodes + 1 + action_dim();
}

std::size_t SlotReport::qos_violations() const {
    return static_cast<std::size_t>(std::count(qos_ok.begin(), qos_ok.end(), false));
}

double efficiency(const SlotReport& report) {
    if (report.incident_rf_energy <= 0.0) return 0.0;
    return report.harvested_rf_energy / report.incident_rf_energy;
}

double reward_from_report(const SlotReport& report, const EnvConfig& cfg) {
    const double k = static_cast<double>(report.qos_ok.size());
    return report.efficiency - cfg.w_qos * static_cast<double>(report.qos_violations()) / k -
           cfg.w_overflow * report.overflow / cfg.battery_capacity -
           cfg.w_causality * (report.causality_violated ? 1.0 : 0.0);
}

EhAction map_action(const Eigen::VectorXd& raw, const EnvConfig& cfg) {
    const std::size_t l = cfg.elements;
    const std::size_t k = cfg.nodes;
    if (static_cast<std::size_t>(raw.size()) != cfg.action_dim())
        throw InvalidInput("map_action: expected " + std::to_string(cfg.action_dim()) + " entries, got " +
                           std::to_string(raw.size()));
    EhAction a;
    Eigen::Index i = 0;
    switch (cfg.protocol) {
        case EhProtocol::TS: a.tau = to_fraction(raw(i++)); break;
        case EhProtocol::PS: a.rho = to_fraction(raw(i++)); break;
        case EhProtocol::HYBRID:
            a.tau = to_fraction(raw(i++));
            a.rho = to_fraction(raw(i++));
            a.omega.resize(l);
            for (auto& w : a.omega) w = to_fraction(raw(i++));
            break;
    }
    if (a.omega.empty()) a.omega.assign(l, 0.0);
    a.theta.resize(l);
    for (auto& th : a.theta) th = wrap_phase(std::numbers::pi * (std::clamp(raw(i++), -1.0, 1.0) + 1.0));

    std::vector<double> u(k);
    double total = 0.0;
    for (auto& v : u) {
        v = to_fraction(raw(i++));
        total += v;
    }
    const double scale = cfg.p_max / std::max(1.0, total);
    a.power.resize(k);
    for (std::size_t j = 0; j < k; ++j) a.power[j] = u[j] * scale;
    return a;
}

Eigen::VectorXd action_to_raw(const EhAction& action, const EnvConfig& cfg) {
    Eigen::VectorXd raw(static_cast<Eigen::Index>(cfg.action_dim()));
    Eigen::Index i = 0;
    auto frac = [](double f) { return 2.0 * std::clamp(f, 0.0, 1.0) - 1.0; };
    switch (cfg.protocol) {
        case EhProtocol::TS: raw(i++) = frac(action.tau); break;
        case EhProtocol::PS: raw(i++) = frac(action.rho); break;
        case EhProtocol::HYBRID:
            raw(i++) = frac(action.tau);
            raw(i++) = frac(action.rho);
            for (std::size_t l = 0; l < cfg.elements; ++l) raw(i++) = frac(action.omega.at(l));
            break;
    }
    for (std::size_t l = 0; l < cfg.elements; ++l) raw(i++) = wrap_phase(action.theta.at(l)) / std::numbers::pi - 1.0;
    for (std::size_t k = 0; k < cfg.nodes; ++k) raw(i++) = frac(action.power.at(k) / cfg.p_max);
    return raw;
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

Eigen::VectorXd Environment::reset(std::optional<std::uint64_t> seed) {
    if (seed) cfg_.seed = *seed;
    mobility_rng_ = stream(cfg_.seed, 1);
    channel_rng_ = stream(cfg_.seed, 2);
    csi_rng_ = stream(cfg_.seed, 3);
    solar_rng_ = stream(cfg_.seed, 4);
    kmeans_seed_ = cfg_.seed;

    scene_ = Scene{};
    scene_.bs_position = cfg_.layout.bs_position;
    scene_.uav_position = cfg_.layout.uav_start;
    scene_.uav_position.z = std::clamp(cfg_.uav.altitude, cfg_.uav.z_min, cfg_.uav.z_max);
    const double spacing = cfg_.layout.element_spacing > 0.0 ? cfg_.layout.element_spacing
                                                             : 0.5 * cfg_.channel.carrier_wavelength;
    scene_.ris_element_offsets = planar_grid_offsets(cfg_.elements, spacing);
    scene_.bounds = cfg_.layout.node_bounds;
    if (!cfg_.layout.node_start.empty()) {
        scene_.node_positions = cfg_.layout.node_start;
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const Box& b = scene_.bounds;
        for (std::size_t k = 0; k < cfg_.nodes; ++k) {
            const double ux = u(mobility_rng_), uy = u(mobility_rng_), uz = u(mobility_rng_);
            scene_.node_positions.push_back({b.lo.x + ux * (b.hi.x - b.lo.x), b.lo.y + uy * (b.hi.y - b.lo.y),
                                             b.lo.z + uz * (b.hi.z - b.lo.z)});
        }
    }
    init_node_mobility(scene_, cfg_.mobility, mobility_rng_);

    battery_ = {cfg_.battery_initial_fraction * cfg_.battery_capacity, cfg_.battery_capacity};
    prev_action_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cfg_.action_dim()));
    t_ = 0;
    live_ = true;
    done_ = false;
    begin_slot(true);
    return state();
}

void Environment::begin_slot(bool first) {
    const double dt = cfg_.eh.slot_duration;
    // solar is drawn unconditionally so toggling renewables leaves every
    // other random stream untouched
    const double solar = sample_solar(solar_rng_, cfg_.eh);
    solar_ = cfg_.use_renewable ? solar : 0.0;
    if (!first) scene_ = node_mobility_step(scene_, dt, cfg_.mobility, mobility_rng_);

    const KMeansResult km = kmeans(scene_.node_positions, cfg_.kmeans_clusters, cfg_.kmeans_iters, kmeans_seed_);
    std::vector<std::size_t> sizes(km.centroids.size(), 0);
    for (std::size_t c : km.assignment) ++sizes[c];
    const auto largest = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    scene_.uav_position = uav_step(scene_.uav_position, km.centroids[largest], cfg_.uav_speed, dt, cfg_.uav);

    ChannelRealization ch = sample_channels(channel_rng_, scene_, cfg_.antennas, cfg_.channel, 0.0);
    ch.zeta = cfg_.zeta;
    ch.g1_est = estimate_csi(ch.g1_true, cfg_.zeta, ch.gain_bs_ris, csi_rng_);
    for (std::size_t k = 0; k < ch.g2_true.size(); ++k)
        ch.g2_est[k] = estimate_csi(ch.g2_true[k], cfg_.zeta, ch.gain_ris_node[k], csi_rng_);
    channels_ = std::move(ch);
}

Eigen::VectorXd Environment::state() const {
    const std::size_t l = cfg_.elements, z = cfg_.antennas, k = cfg_.nodes;
    Eigen::VectorXd s(static_cast<Eigen::Index>(cfg_.state_dim()));
    Eigen::Index i = 0;

    const double g1_scale = 1.0 / std::sqrt(channels_.gain_bs_ris);
    for (std::size_t r = 0; r < l; ++r)
        for (std::size_t c = 0; c < z; ++c) s(i++) = channels_.g1_est(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)).real() * g1_scale;
    for (std::size_t r = 0; r < l; ++r)
        for (std::size_t c = 0; c < z; ++c) s(i++) = channels_.g1_est(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)).imag() * g1_scale;
    for (std::size_t n = 0; n < k; ++n) {
        const double sc = 1.0 / std::sqrt(channels_.gain_ris_node[n]);
        for (std::size_t r = 0; r < l; ++r) s(i++) = channels_.g2_est[n](static_cast<Eigen::Index>(r)).real() * sc;
    }
    for (std::size_t n = 0; n < k; ++n) {
        const double sc = 1.0 / std::sqrt(channels_.gain_ris_node[n]);
        for (std::size_t r = 0; r < l; ++r) s(i++) = channels_.g2_est[n](static_cast<Eigen::Index>(r)).imag() * sc;
    }

    const Box& b = cfg_.layout.node_bounds;
    const double cx = 0.5 * (b.lo.x + b.hi.x), cy = 0.5 * (b.lo.y + b.hi.y);
    const double hx = std::max(0.5 * (b.hi.x - b.lo.x), 1.0), hy = std::max(0.5 * (b.hi.y - b.lo.y), 1.0);
    const double hz = std::max(cfg_.uav.z_max, 1.0);
    auto put = [&](const Position3& p) {
        s(i++) = (p.x - cx) / hx;
        s(i++) = (p.y - cy) / hy;
        s(i++) = p.z / hz;
    };
    for (const auto& p : element_world_positions(scene_)) put(p);
    for (const auto& p : scene_.node_positions) put(p);

    s(i++) = solar_ / cfg_.battery_capacity;
    s.segment(i, prev_action_.size()) = prev_action_;
    return s;
}

SlotOutcome Environment::evaluate_slot(const EhAction& action) const {
    const double dt = cfg_.eh.slot_duration;
    const std::size_t l = cfg_.elements;
    if (action.theta.size() != l || action.power.size() != cfg_.nodes)
        throw InvalidInput("evaluate_slot: action shape does not match (L, K)");

    // one beam per slot, aimed through the fully reflecting surface
    const std::vector<double> unit(l, 1.0);
    const Precoding pre = precode(channels_.g1_est, channels_.g2_est, action.theta, unit, action.power, cfg_.precoder);
    const std::vector<double> p_inc = incident_power(channels_.g1_true, pre.w);
    const SplitResult split = incident_split(p_inc, action, cfg_.protocol, cfg_.eh);
    const PhyParams phy{cfg_.phi, cfg_.channel.noise_power, cfg_.channel.bandwidth};
    const LinkBudget link = slot_link_budget(channels_.g1_true, channels_.g2_true, action.theta, split.phases, dt, pre.w, phy);

    SlotOutcome out;
    SlotReport& r = out.report;
    r.t = t_;
    double p_total = 0.0;
    for (double p : p_inc) p_total += p;
    r.incident_rf_energy = p_total * dt;
    r.eh_input_energy = split.eh_input_energy;
    r.harvested_rf_energy = split.harvested_energy;
    r.harvested_solar_energy = solar_;
    r.rates = link.rate;
    r.qos_ok.resize(cfg_.nodes);
    for (std::size_t k = 0; k < cfg_.nodes; ++k) r.qos_ok[k] = link.rate[k] >= cfg_.qos_min;
    r.precoder_fallback = pre.fallback;

    const BatteryStep bs = battery_step(battery_, r.harvested_rf_energy + r.harvested_solar_energy, cfg_.eh.hover_drain * dt);
    r.consumed_energy = bs.consumed;
    r.overflow = bs.overflow;
    r.causality_violated = bs.causality_violated;
    r.battery_level = bs.battery.level;
    r.efficiency = efficiency(r);

    out.battery = bs.battery;
    out.reward = reward_from_report(r, cfg_);
    out.done = (t_ + 1 >= cfg_.horizon) ||
               (cfg_.terminate_on_empty && r.causality_violated && bs.battery.level <= 0.0);
    return out;
}

StepResult Environment::commit(const EhAction& action, const Eigen::VectorXd& raw) {
    if (!live_) throw LifecycleError("step called before reset");
    if (done_) throw LifecycleError("step called after the episode finished");
    const SlotOutcome o = evaluate_slot(action);
    battery_ = o.battery;
    prev_action_ = raw;
    done_ = o.done;
    ++t_;
    if (!done_) begin_slot(false);
    return {state(), o.reward, o.done, o.report};
}

StepResult Environment::step_raw(const Eigen::VectorXd& raw) {
    const EhAction a = map_action(raw, cfg_);
    return commit(a, raw.cwiseMax(-1.0).cwiseMin(1.0));
}

StepResult Environment::step(const EhAction& action) {
    return commit(action, action_to_raw(action, cfg_));
}

std::string slot_csv_header(std::size_t nodes) {
    std::string h =
        "t,incident_rf_energy,eh_input_energy,harvested_rf_energy,harvested_solar_energy,"
        "consumed_energy,overflow,causality_violated,battery_level,efficiency,qos_violations";
    for (std::size_t k = 0; k < nodes; ++k) h += ",rate_" + std::to_string(k);
    h += ",precoder_fallback,reward";
    return h;
}

void write_slot_csv_row(std::ostream& os, const SlotReport& r, double reward) {
    std::ostringstream line;
    line << std::setprecision(17);
    line << r.t << ',' << r.incident_rf_energy << ',' << r.eh_input_energy << ',' << r.harvested_rf_energy << ','
         << r.harvested_solar_energy << ',' << r.consumed_energy << ',' << r.overflow << ','
         << (r.causality_violated ? 1 : 0) << ',' << r.battery_level << ',' << r.efficiency << ','
         << r.qos_violations();
    for (double rate : r.rates) line << ',' << rate;
    line << ',' << (r.precoder_fallback ? 1 : 0) << ',' << reward;
    os << line.str() << '\n';
}

}  // namespace uavris
