#include "uavris/harness/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "uavris/errors.hpp"
#include "uavris/rl/checkpoint.hpp"

namespace uavris::harness {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

EpisodeRecord summarize(std::size_t episode, std::uint64_t seed, const std::vector<StepRecord>& steps,
                        std::size_t first) {
    EpisodeRecord rec;
    rec.episode = episode;
    rec.env_seed = seed;
    double eff = 0.0;
    for (std::size_t i = first; i < steps.size(); ++i) {
        const SlotReport& r = steps[i].report;
        rec.reward += steps[i].reward;
        eff += r.efficiency;
        rec.qos_violations += r.qos_violations();
        rec.causality_slots += r.causality_violated ? 1 : 0;
        rec.final_battery = r.battery_level;
        ++rec.steps;
    }
    rec.mean_efficiency = rec.steps ? eff / static_cast<double>(rec.steps) : 0.0;
    return rec;
}

}  // namespace

ExperimentConfig with_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
    ExperimentConfig c = cfg;
    c.env.seed = seed;
    c.agent.seed = seed;
    return c;
}

std::uint64_t episode_seed(std::uint64_t run_seed, std::size_t episode) {
    return splitmix64(splitmix64(run_seed) + static_cast<std::uint64_t>(episode));
}

void write_json(const fs::path& path, const Json& doc) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << doc.dump(2) << '\n';
}

void write_episodes_csv(const fs::path& path, const std::vector<EpisodeRecord>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << "episode,env_seed,reward,mean_efficiency,qos_violations,causality_slots,final_battery,steps\n";
    for (const auto& r : rows)
        os << r.episode << ',' << r.env_seed << ',' << fmt(r.reward) << ',' << fmt(r.mean_efficiency) << ','
           << r.qos_violations << ',' << r.causality_slots << ',' << fmt(r.final_battery) << ',' << r.steps << '\n';
}

void write_steps_csv(const fs::path& path, const std::vector<StepRecord>& rows, std::size_t nodes) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << "episode," << slot_csv_header(nodes) << '\n';
    for (const auto& r : rows) {
        os << r.episode << ',';
        write_slot_csv_row(os, r.report, r.reward);
    }
}

TrainResult train(const ExperimentConfig& cfg, const std::optional<fs::path>& run_dir) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    TrainResult out;
    out.config_hash = config_hash(cfg);

    Environment env(cfg.env);
    const std::size_t sd = cfg.env.state_dim(), ad = cfg.env.action_dim();
    out.agent = std::make_unique<rl::Agent>(sd, ad, cfg.agent);
    rl::Agent& agent = *out.agent;
    rl::ReplayBuffer buffer(cfg.agent.buffer_capacity, sd, ad);

    std::vector<StepRecord> steps;
    std::size_t total = 0;
    for (std::size_t e = 0; e < cfg.train.episodes; ++e) {
        const std::uint64_t seed = episode_seed(cfg.env.seed, e);
        Eigen::VectorXd s = env.reset(seed);
        const std::size_t first = steps.size();
        while (!env.done()) {
            const Eigen::VectorXd raw = total < cfg.agent.warmup_steps ? agent.random_action() : agent.act(s, true);
            StepResult r = env.step_raw(raw);
            // running out of slots is a truncation, not a terminal state
            const bool terminal = r.done && r.report.t + 1 < cfg.env.horizon;
            buffer.push(s, raw, r.reward, r.next_state, terminal);
            ++total;
            if (total % cfg.train.train_every == 0)
                for (std::size_t u = 0; u < cfg.train.updates_per_step; ++u) agent.train_step(buffer);
            steps.push_back({e, std::move(r.report), r.reward});
            s = std::move(r.next_state);
        }
        out.episodes.push_back(summarize(e, seed, steps, first));
        if (!cfg.train.write_steps) steps.clear();
    }

    const std::size_t n = out.episodes.size();
    const std::size_t w = std::min(cfg.train.final_window, n);
    for (std::size_t i = n - w; i < n; ++i) out.final_mean_reward += out.episodes[i].reward;
    out.final_mean_reward /= static_cast<double>(w);
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (run_dir) {
        fs::create_directories(*run_dir);
        write_json(*run_dir / "config.json", to_json(cfg));
        write_episodes_csv(*run_dir / "episodes.csv", out.episodes);
        if (cfg.train.write_steps) write_steps_csv(*run_dir / "steps.csv", steps, cfg.env.nodes);
        rl::save_checkpoint(*run_dir / "checkpoint.txt", agent, out.config_hash);
        write_json(*run_dir / "summary.json", Json{{"config_hash", out.config_hash},
                                                   {"episodes", n},
                                                   {"final_window", w},
                                                   {"final_mean_reward", out.final_mean_reward},
                                                   {"wall_seconds", out.wall_seconds}});
    }
    return out;
}

EvalResult evaluate(const ExperimentConfig& cfg, const Policy& policy, std::size_t episodes) {
    Environment env(cfg.env);
    EvalResult out;
    double eff = 0.0, reward = 0.0;
    for (std::size_t e = 0; e < episodes; ++e) {
        const std::uint64_t seed = cfg.train.eval_seed + e;
        Eigen::VectorXd s = env.reset(seed);
        const std::size_t first = out.steps.size();
        while (!env.done()) {
            StepResult r = env.step_raw(policy(env, s));
            eff += r.report.efficiency;
            reward += r.reward;
            out.steps.push_back({e, std::move(r.report), r.reward});
            s = std::move(r.next_state);
        }
        out.episodes.push_back(summarize(e, seed, out.steps, first));
    }
    if (!out.steps.empty()) {
        out.mean_efficiency = eff / static_cast<double>(out.steps.size());
        out.mean_reward = reward / static_cast<double>(out.steps.size());
    }
    return out;
}

Policy agent_policy(rl::Agent& agent) {
    return [&agent](const Environment&, const Eigen::VectorXd& s) { return agent.act(s, false); };
}

Policy exhaustive_policy(const rl::ExhaustiveConfig& ex) {
    return [ex](const Environment& env, const Eigen::VectorXd&) { 
        return action_to_raw(rl::exhaustive_search(env, ex).action, env.config());
    };
}

Policy random_policy(std::uint64_t seed) {
    auto rng = std::make_shared<Rng>(seed);
    return [rng](const Environment& env, const Eigen::VectorXd&) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Eigen::VectorXd raw(static_cast<Eigen::Index>(env.config().action_dim()));
        for (Eigen::Index i = 0; i < raw.size(); ++i) raw(i) = u(*rng);
        return raw;
    };
}

std::unique_ptr<rl::Agent> load_agent(const ExperimentConfig& cfg, const fs::path& checkpoint) {
    if (!fs::exists(checkpoint)) throw std::runtime_error("checkpoint not found: " + checkpoint.string());
    auto agent = std::make_unique<rl::Agent>(cfg.env.state_dim(), cfg.env.action_dim(), cfg.agent);
    rl::load_checkpoint(checkpoint, *agent, config_hash(cfg));
    return agent;
}

std::vector<fs::path> sweep(const Json& base_doc, const std::string& key, const std::vector<std::string>& values,
                            const fs::path& out_dir) {
    std::vector<std::pair<fs::path, ExperimentConfig>> plan;
    // validate the whole cross product before spending time on any run
    for (const auto& v : values) {
        Json doc = base_doc;
        apply_override(doc, key + "=" + v);
        const ExperimentConfig cfg = parse_config(doc);
        for (std::uint64_t seed : cfg.train.seeds)
            plan.emplace_back(out_dir / (key + "=" + v) / ("seed" + std::to_string(seed)), with_seed(cfg, seed));
    }
    std::vector<fs::path> dirs;
    for (const auto& [dir, cfg] : plan) {
        train(cfg, dir);
        dirs.push_back(dir);
    }
    return dirs;
}

namespace {

std::vector<std::map<std::string, std::string>> read_csv(const fs::path& path) {
    std::ifstream is(path);
    std::vector<std::map<std::string, std::string>> rows;
    std::string line;
    if (!std::getline(is, line)) return rows;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        return out;
    };
    const auto header = split(line);
    while (std::getline(is, line)) {
        const auto cells = split(line);
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) row[header[i]] = cells[i];
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::size_t export_plots(const fs::path& root, const fs::path& out_csv) {
    if (!fs::exists(root)) throw std::runtime_error("run directory not found: " + root.string());
    std::vector<fs::path> runs;
    if (fs::exists(root / "config.json")) runs.push_back(root);
    if (fs::is_directory(root))
        for (const auto& entry : fs::recursive_directory_iterator(root))
            if (entry.is_regular_file() && entry.path().filename() == "config.json" && entry.path().parent_path() != root)
                runs.push_back(entry.path().parent_path());
    std::sort(runs.begin(), runs.end());
    if (runs.empty()) throw std::runtime_error("no run directories (config.json) under " + root.string());

    std::ofstream os(out_csv);
    if (!os) throw std::runtime_error("cannot write " + out_csv.string());
    os << "run,seed,protocol,agent,metric,index,value\n";
    std::size_t count = 0;
    for (const auto& dir : runs) {
        std::ifstream cs(dir / "config.json");
        const Json cfg = Json::parse(cs);
        const std::string run = fs::relative(dir, root).generic_string();
        const std::string prefix = (run == "." ? dir.filename().generic_string() : run) + "," +
                                   std::to_string(cfg["env"]["seed"].get<std::uint64_t>()) + "," +
                                   cfg["env"]["protocol"].get<std::string>() + "," +
                                   cfg["agent"]["kind"].get<std::string>() + ",";
        for (const auto& row : read_csv(dir / "episodes.csv")) {
            os << prefix << "episode_reward," << row.at("episode") << ',' << row.at("reward") << '\n';
            os << prefix << "episode_efficiency," << row.at("episode") << ',' << row.at("mean_efficiency") << '\n';
            count += 2;
        }
        if (fs::exists(dir / "eval_steps.csv")) {
            std::size_t i = 0;
            for (const auto& row : read_csv(dir / "eval_steps.csv")) {
                os << prefix << "step_efficiency," << i++ << ',' << row.at("efficiency") << '\n';
                ++count;
            }
        }
    }
    return count;
}

}  // namespace uavris::harness
