#include "uavris/rl/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "uavris/errors.hpp"

namespace uavris::rl {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", v);
    os << buf << '\n';
}

double get(std::istream& is) {
    std::string tok;
    if (!(is >> tok)) throw InvalidInput("checkpoint: truncated");
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw InvalidInput("checkpoint: bad number '" + tok + "'");
    return v;
}

void expect(std::istream& is, const std::string& word) {
    std::string tok;
    if (!(is >> tok) || tok != word)
        throw InvalidInput("checkpoint: expected '" + word + "', found '" + tok + "'");
}

template <typename T>
T get_int(std::istream& is) {
    long long v = 0;
    if (!(is >> v)) throw InvalidInput("checkpoint: expected integer");
    return static_cast<T>(v);
}

void write_layers(std::ostream& os, const std::vector<Layer>& layers) {
    for (const auto& l : layers) {
        os << "layer " << l.w.rows() << ' ' << l.w.cols() << '\n';
        for (Eigen::Index i = 0; i < l.w.size(); ++i) put(os, l.w.data()[i]);
        for (Eigen::Index i = 0; i < l.b.size(); ++i) put(os, l.b(i));
    }
}

void read_layers(std::istream& is, std::vector<Layer>& layers) {
    for (auto& l : layers) {
        expect(is, "layer");
        const auto r = get_int<Eigen::Index>(is);
        const auto c = get_int<Eigen::Index>(is);
        if (r != l.w.rows() || c != l.w.cols()) throw InvalidInput("checkpoint: layer shape mismatch");
        for (Eigen::Index i = 0; i < l.w.size(); ++i) l.w.data()[i] = get(is);
        for (Eigen::Index i = 0; i < l.b.size(); ++i) l.b(i) = get(is);
    }
}

void write_net(std::ostream& os, const std::string& name, const Mlp& net) {
    os << "net " << name << ' ' << net.layers().size() << '\n';
    write_layers(os, net.layers());
}

void read_net(std::istream& is, const std::string& name, Mlp& net) {
    expect(is, "net");
    expect(is, name);
    if (get_int<std::size_t>(is) != net.layers().size()) throw InvalidInput("checkpoint: depth mismatch for " + name);
    read_layers(is, net.layers());
}

void write_adam(std::ostream& os, const std::string& name, const Adam& opt) {
    os << "adam " << name << ' ' << opt.steps() << ' ' << opt.first_moment().size() << '\n';
    write_layers(os, opt.first_moment());
    write_layers(os, opt.second_moment());
}

void read_adam(std::istream& is, const std::string& name, Adam& opt) {
    expect(is, "adam");
    expect(is, name);
    opt.set_steps(get_int<long>(is));
    if (get_int<std::size_t>(is) != opt.first_moment().size())
        throw InvalidInput("checkpoint: depth mismatch for optimiser " + name);
    read_layers(is, opt.first_moment());
    read_layers(is, opt.second_moment());
}

}  // namespace

void save_checkpoint(std::ostream& os, const Agent& agent, const std::string& config_hash) {
    const auto& cfg = agent.config();
    os << "uavris-checkpoint " << kCheckpointVersion << '\n';
    os << "config_hash " << config_hash << '\n';
    os << "agent " << to_string(cfg.kind) << ' ' << agent.state_dim() << ' ' << agent.action_dim() << ' '
       << cfg.pairs << ' ' << cfg.critics_per_pair << ' ' << agent.updates() << '\n';
    const auto& pairs = agent.pairs();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const std::string tag = "p" + std::to_string(p);
        write_net(os, tag + ".actor", pairs[p].actor);
        write_net(os, tag + ".actor_target", pairs[p].actor_target);
        write_adam(os, tag + ".actor", pairs[p].actor_opt);
        for (std::size_t c = 0; c < pairs[p].critics.size(); ++c) {
            const std::string ct = tag + ".critic" + std::to_string(c);
            write_net(os, ct, pairs[p].critics[c]);
            write_net(os, ct + "_target", pairs[p].critic_targets[c]);
            write_adam(os, ct, pairs[p].critic_opts[c]);
        }
    }
    os << "end\n";
}

void save_checkpoint(const std::filesystem::path& path, const Agent& agent, const std::string& config_hash) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write checkpoint " + path.string());
    save_checkpoint(os, agent, config_hash);
}

void load_checkpoint(std::istream& is, Agent& agent, const std::string& expected_hash) {
    expect(is, "uavris-checkpoint");
    const int version = get_int<int>(is);
    if (version != kCheckpointVersion)
        throw ConfigError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kCheckpointVersion) + ")");
    expect(is, "config_hash");
    std::string hash;
    is >> hash;
    if (hash != expected_hash)
        throw ConfigError("checkpoint config hash " + hash + " does not match configuration hash " + expected_hash);
    expect(is, "agent");
    std::string kind;
    is >> kind;
    const auto& cfg = agent.config();
    if (kind != to_string(cfg.kind)) throw ConfigError("checkpoint holds a " + kind + " agent");
    if (get_int<std::size_t>(is) != agent.state_dim() || get_int<std::size_t>(is) != agent.action_dim() ||
        get_int<std::size_t>(is) != cfg.pairs || get_int<std::size_t>(is) != cfg.critics_per_pair)
        throw ConfigError("checkpoint dimensions do not match the agent");
    const long updates = get_int<long>(is);
    auto& pairs = agent.pairs();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const std::string tag = "p" + std::to_string(p);
        read_net(is, tag + ".actor", pairs[p].actor);
        read_net(is, tag + ".actor_target", pairs[p].actor_target);
        read_adam(is, tag + ".actor", pairs[p].actor_opt);
        for (std::size_t c = 0; c < pairs[p].critics.size(); ++c) {
            const std::string ct = tag + ".critic" + std::to_string(c);
            read_net(is, ct, pairs[p].critics[c]);
            read_net(is, ct + "_target", pairs[p].critic_targets[c]);
            read_adam(is, ct, pairs[p].critic_opts[c]);
        }
    }
    expect(is, "end");
    agent.set_updates(updates);
}

void load_checkpoint(const std::filesystem::path& path, Agent& agent, const std::string& expected_hash) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("checkpoint not found: " + path.string());
    load_checkpoint(is, agent, expected_hash);
}

std::string checkpoint_hash(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("checkpoint not found: " + path.string());
    expect(is, "uavris-checkpoint");
    get_int<int>(is);
    expect(is, "config_hash");
    std::string hash;
    is >> hash;
    return hash;
}

}  // namespace uavris::rl
