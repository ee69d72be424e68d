#include "uavris/harness/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "uavris/errors.hpp"
#include "uavris/rl/checkpoint.hpp"

namespace uavris::harness {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

double num(const Json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

std::uint64_t uint(const Json& v, const std::string& path) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
        fail(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

bool flag(const Json& v, const std::string& path) {
    if (!v.is_boolean()) fail(path, "expected true or false");
    return v.get<bool>();
}

std::string text(const Json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

Position3 point(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) fail(path, "expected [x, y, z]");
    return {num(v[0], path + "[0]"), num(v[1], path + "[1]"), num(v[2], path + "[2]")};
}

Json point_json(const Position3& p) { return Json::array({p.x, p.y, p.z}); }

using Handler = std::function<void(const Json&, const std::string&)>;

void walk(const Json& obj, const std::string& path, const std::map<std::string, Handler>& schema) {
    if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string here = join(path, it.key());
        const auto h = schema.find(it.key());
        if (h == schema.end()) fail(here, "unknown key");
        h->second(it.value(), here);
    }
}

#define NUM(obj, field) {#field, [&](const Json& v, const std::string& p) { obj.field = num(v, p); }}
#define UINT(obj, field) {#field, [&](const Json& v, const std::string& p) { obj.field = uint(v, p); }}
#define FLAG(obj, field) {#field, [&](const Json& v, const std::string& p) { obj.field = flag(v, p); }}

void parse_env(const Json& j, const std::string& path, EnvConfig& e) {
    ChannelConfig& ch = e.channel;
    EhConfig& eh = e.eh;
    MobilityConfig& mob = e.mobility;
    UavLimits& uav = e.uav;
    Layout& lay = e.layout;
    const std::map<std::string, Handler> channel{
        NUM(ch, pathloss_exponent_bs_ris), NUM(ch, pathloss_exponent_ris_node), NUM(ch, ref_loss_db),
        NUM(ch, rician_k), NUM(ch, noise_power), NUM(ch, bandwidth), NUM(ch, carrier_wavelength)};
    const std::map<std::string, Handler> energy{
        NUM(eh, rectifier_max_power), NUM(eh, rectifier_a), NUM(eh, rectifier_b), NUM(eh, solar_rate_lambda),
        NUM(eh, solar_packet), NUM(eh, slot_duration), NUM(eh, hover_drain), FLAG(eh, per_element_rectifier)};
    const std::map<std::string, Handler> mobility{NUM(mob, v_node_min), NUM(mob, v_node_max)};
    const std::map<std::string, Handler> limits{NUM(uav, altitude), NUM(uav, z_min), NUM(uav, z_max)};
    const std::map<std::string, Handler> bounds{
        {"lo", [&](const Json& v, const std::string& p) { lay.node_bounds.lo = point(v, p); }},
        {"hi", [&](const Json& v, const std::string& p) { lay.node_bounds.hi = point(v, p); }}};
    const std::map<std::string, Handler> layout{
        {"bs_position", [&](const Json& v, const std::string& p) { lay.bs_position = point(v, p); }},
        {"uav_start", [&](const Json& v, const std::string& p) { lay.uav_start = point(v, p); }},
        {"node_bounds", [&](const Json& v, const std::string& p) { walk(v, p, bounds); }},
        {"node_start",
         [&](const Json& v, const std::string& p) {
             if (!v.is_array()) fail(p, "expected a list of [x, y, z]");
             lay.node_start.clear();
             for (std::size_t i = 0; i < v.size(); ++i)
                 lay.node_start.push_back(point(v[i], p + "[" + std::to_string(i) + "]"));
         }},
        NUM(lay, element_spacing)};
    const std::map<std::string, Handler> env{
        UINT(e, antennas), UINT(e, elements), UINT(e, nodes), UINT(e, horizon), NUM(e, qos_min), NUM(e, p_max),
        NUM(e, battery_capacity), NUM(e, battery_initial_fraction), NUM(e, zeta), NUM(e, phi),
        {"protocol",
         [&](const Json& v, const std::string& p) {
             try {
                 e.protocol = protocol_from_string(text(v, p));
             } catch (const InvalidInput&) {
                 fail(p, "expected TS, PS or HYBRID");
             }
         }},
        FLAG(e, use_renewable), NUM(e, w_qos), NUM(e, w_overflow), NUM(e, w_causality), FLAG(e, terminate_on_empty),
        UINT(e, seed), NUM(e, uav_speed), UINT(e, kmeans_clusters), UINT(e, kmeans_iters),
        {"precoder",
         [&](const Json& v, const std::string& p) {
             const std::string s = text(v, p);
             if (s == "MRT") e.precoder = PrecoderKind::MRT;
             else if (s == "ZF") e.precoder = PrecoderKind::ZF;
             else fail(p, "expected MRT or ZF");
         }},
        {"channel", [&](const Json& v, const std::string& p) { walk(v, p, channel); }},
        {"eh", [&](const Json& v, const std::string& p) { walk(v, p, energy); }},
        {"mobility", [&](const Json& v, const std::string& p) { walk(v, p, mobility); }},
        {"uav", [&](const Json& v, const std::string& p) { walk(v, p, limits); }},
        {"layout", [&](const Json& v, const std::string& p) { walk(v, p, layout); }}};
    walk(j, path, env);
}

void parse_agent(const Json& j, const std::string& path, rl::AgentConfig& a) {
    // the kind sets its defining switches first so explicit keys can override them
    if (j.is_object() && j.contains("kind")) {
        const std::string p = join(path, "kind");
        try {
            a = rl::agent_config_for(rl::agent_kind_from_string(text(j["kind"], p)));
        } catch (const InvalidInput&) {
            fail(p, "expected ddpg_eh, td3 or ddpg");
        }
    }
    const std::map<std::string, Handler> schema{
        {"kind", [](const Json&, const std::string&) {}},
        UINT(a, pairs), UINT(a, critics_per_pair), UINT(a, target_samples), NUM(a, beta), NUM(a, gamma),
        NUM(a, soft_update_rate), UINT(a, policy_delay), NUM(a, sigma_explore), NUM(a, sigma_target),
        NUM(a, noise_clip), FLAG(a, target_smoothing), FLAG(a, select_highest_q),
        {"hidden",
         [&](const Json& v, const std::string& p) {
             if (!v.is_array()) fail(p, "expected a list of layer widths");
             a.hidden.clear();
             for (std::size_t i = 0; i < v.size(); ++i) a.hidden.push_back(uint(v[i], p + "[" + std::to_string(i) + "]"));
         }},
        NUM(a, lr_actor), NUM(a, lr_critic), UINT(a, batch_size), UINT(a, buffer_capacity), UINT(a, warmup_steps),
        UINT(a, seed)};
    walk(j, path, schema);
}

void parse_train(const Json& j, const std::string& path, TrainSettings& t) {
    const std::map<std::string, Handler> schema{
        UINT(t, episodes), UINT(t, eval_episodes),
        {"seeds",
         [&](const Json& v, const std::string& p) {
             if (!v.is_array()) fail(p, "expected a list of integers");
             t.seeds.clear();
             for (std::size_t i = 0; i < v.size(); ++i) t.seeds.push_back(uint(v[i], p + "[" + std::to_string(i) + "]"));
         }},
        {"output_dir", [&](const Json& v, const std::string& p) { t.output_dir = text(v, p); }},
        UINT(t, updates_per_step), UINT(t, train_every), FLAG(t, write_steps), UINT(t, final_window),
        UINT(t, eval_seed)};
    walk(j, path, schema);
}

void parse_exhaustive(const Json& j, const std::string& path, rl::ExhaustiveConfig& x) {
    const std::map<std::string, Handler> schema{UINT(x, fraction_points), UINT(x, omega_points),
                                                UINT(x, phase_levels), UINT(x, phase_sweeps),
                                                UINT(x, power_points), UINT(x, budget)};
    walk(j, path, schema);
}

#undef NUM
#undef UINT
#undef FLAG

}  // namespace

void ExperimentConfig::validate() const {
    try {
        env.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("env: ") + e.what());
    }
    try {
        agent.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("agent: ") + e.what());
    }
    if (train.episodes < 1) throw ConfigError("train.episodes: must be >= 1");
    if (train.seeds.empty()) throw ConfigError("train.seeds: need at least one seed");
    if (train.output_dir.empty()) throw ConfigError("train.output_dir: must not be empty");
    if (train.train_every < 1) throw ConfigError("train.train_every: must be >= 1");
    if (train.final_window < 1) throw ConfigError("train.final_window: must be >= 1");
}

ExperimentConfig parse_config(const Json& doc) {
    ExperimentConfig cfg;
    const std::map<std::string, Handler> root{
        {"env", [&](const Json& v, const std::string& p) { parse_env(v, p, cfg.env); }},
        {"agent", [&](const Json& v, const std::string& p) { parse_agent(v, p, cfg.agent); }},
        {"train", [&](const Json& v, const std::string& p) { parse_train(v, p, cfg.train); }},
        {"exhaustive", [&](const Json& v, const std::string& p) { parse_exhaustive(v, p, cfg.exhaustive); }}};
    walk(doc, "", root);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError(path.string() + ": cannot open config file");
    Json doc;
    try {
        doc = Json::parse(is, nullptr, true, true);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

Json to_json(const ExperimentConfig& cfg) {
    const EnvConfig& e = cfg.env;
    Json env{
        {"antennas", e.antennas},
        {"elements", e.elements},
        {"nodes", e.nodes},
        {"horizon", e.horizon},
        {"qos_min", e.qos_min},
        {"p_max", e.p_max},
        {"battery_capacity", e.battery_capacity},
        {"battery_initial_fraction", e.battery_initial_fraction},
        {"zeta", e.zeta},
        {"phi", e.phi},
        {"protocol", std::string(to_string(e.protocol))},
        {"use_renewable", e.use_renewable},
        {"w_qos", e.w_qos},
        {"w_overflow", e.w_overflow},
        {"w_causality", e.w_causality},
        {"terminate_on_empty", e.terminate_on_empty},
        {"seed", e.seed},
        {"uav_speed", e.uav_speed},
        {"kmeans_clusters", e.kmeans_clusters},
        {"kmeans_iters", e.kmeans_iters},
        {"precoder", e.precoder == PrecoderKind::ZF ? "ZF" : "MRT"},
    };
    env["channel"] = {{"pathloss_exponent_bs_ris", e.channel.pathloss_exponent_bs_ris},
                      {"pathloss_exponent_ris_node", e.channel.pathloss_exponent_ris_node},
                      {"ref_loss_db", e.channel.ref_loss_db},
                      {"rician_k", e.channel.rician_k},
                      {"noise_power", e.channel.noise_power},
                      {"bandwidth", e.channel.bandwidth},
                      {"carrier_wavelength", e.channel.carrier_wavelength}};
    env["eh"] = {{"rectifier_max_power", e.eh.rectifier_max_power},
                 {"rectifier_a", e.eh.rectifier_a},
                 {"rectifier_b", e.eh.rectifier_b},
                 {"solar_rate_lambda", e.eh.solar_rate_lambda},
                 {"solar_packet", e.eh.solar_packet},
                 {"slot_duration", e.eh.slot_duration},
                 {"hover_drain", e.eh.hover_drain},
                 {"per_element_rectifier", e.eh.per_element_rectifier}};
    env["mobility"] = {{"v_node_min", e.mobility.v_node_min}, {"v_node_max", e.mobility.v_node_max}};
    env["uav"] = {{"altitude", e.uav.altitude}, {"z_min", e.uav.z_min}, {"z_max", e.uav.z_max}};
    Json starts = Json::array();
    for (const auto& p : e.layout.node_start) starts.push_back(point_json(p));
    env["layout"] = {{"bs_position", point_json(e.layout.bs_position)},
                     {"uav_start", point_json(e.layout.uav_start)},
                     {"node_bounds", {{"lo", point_json(e.layout.node_bounds.lo)}, {"hi", point_json(e.layout.node_bounds.hi)}}},
                     {"node_start", starts},
                     {"element_spacing", e.layout.element_spacing}};

    const rl::AgentConfig& a = cfg.agent;
    Json agent{{"kind", rl::to_string(a.kind)},
               {"pairs", a.pairs},
               {"critics_per_pair", a.critics_per_pair},
               {"target_samples", a.target_samples},
               {"beta", a.beta},
               {"gamma", a.gamma},
               {"soft_update_rate", a.soft_update_rate},
               {"policy_delay", a.policy_delay},
               {"sigma_explore", a.sigma_explore},
               {"sigma_target", a.sigma_target},
               {"noise_clip", a.noise_clip},
               {"target_smoothing", a.target_smoothing},
               {"select_highest_q", a.select_highest_q},
               {"hidden", a.hidden},
               {"lr_actor", a.lr_actor},
               {"lr_critic", a.lr_critic},
               {"batch_size", a.batch_size},
               {"buffer_capacity", a.buffer_capacity},
               {"warmup_steps", a.warmup_steps},
               {"seed", a.seed}};

    const TrainSettings& t = cfg.train;
    Json train{{"episodes", t.episodes},
               {"eval_episodes", t.eval_episodes},
               {"seeds", t.seeds},
               {"output_dir", t.output_dir},
               {"updates_per_step", t.updates_per_step},
               {"train_every", t.train_every},
               {"write_steps", t.write_steps},
               {"final_window", t.final_window},
               {"eval_seed", t.eval_seed}};

    const rl::ExhaustiveConfig& x = cfg.exhaustive;
    Json ex{{"fraction_points", x.fraction_points}, {"omega_points", x.omega_points},
            {"phase_levels", x.phase_levels},       {"phase_sweeps", x.phase_sweeps},
            {"power_points", x.power_points},       {"budget", x.budget}};

    return Json{{"env", env}, {"agent", agent}, {"train", train}, {"exhaustive", ex}};
}

std::string canonical_text(const ExperimentConfig& cfg) { return to_json(cfg).dump(); }

std::string config_hash(const ExperimentConfig& cfg) { return rl::hash_hex(rl::fnv1a64(canonical_text(cfg))); }

void apply_override(Json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(assignment + ": expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    Json value;
    try {
        value = Json::parse(raw);
    } catch (const Json::parse_error&) {
        value = raw;
    }
    Json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError(key + ": empty path component");
        if (!node->is_object()) throw ConfigError(key + ": " + part + " is not inside an object");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = Json::object();
        start = dot + 1;
    }
}

}  // namespace uavris::harness
