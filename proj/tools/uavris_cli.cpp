#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "uavris/errors.hpp"
#include "uavris/harness/figures.hpp"
#include "uavris/harness/runner.hpp"

using namespace uavris;
using namespace uavris::harness;

namespace {

enum Exit { kOk = 0, kConfig = 2, kRuntime = 3, kAcceptance = 4 };

Json read_doc(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream is(path);
    if (!is) throw ConfigError(path + ": cannot open config file");
    Json doc;
    try {
        doc = Json::parse(is, nullptr, true, true);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    for (const auto& o : overrides) apply_override(doc, o);
    return doc;
}

std::vector<std::uint64_t> pick_seeds(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& cli) {
    return cli.empty() ? cfg.train.seeds : cli;
}

void print_eval(const std::string& label, const EvalResult& ev) {
    std::printf("%s: %zu slots, mean efficiency %.6f, mean reward %.6f\n", label.c_str(), ev.steps.size(),
                ev.mean_efficiency, ev.mean_reward);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV-mounted RIS energy harvesting simulator and DRL trainer"};
    app.require_subcommand(1);

    std::string config_path, out_dir, run_dir, checkpoint, kind = "exhaustive", key, values, out_csv;
    std::vector<std::string> overrides;
    std::vector<std::uint64_t> seeds;
    std::size_t episodes = 0;

    auto add_config = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("-c,--config", config_path, "JSON experiment config");
        if (required) opt->required();
        sub->add_option("--set", overrides, "override a config field, e.g. env.protocol=TS");
    };

    auto* train_cmd = app.add_subcommand("train", "train an agent, one run directory per seed");
    add_config(train_cmd, true);
    train_cmd->add_option("--seed", seeds, "seeds to run (default: train.seeds)");
    train_cmd->add_option("-o,--out", out_dir, "output directory (default: train.output_dir)");

    auto* eval_cmd = app.add_subcommand("evaluate", "greedy roll-outs of a trained checkpoint on held-out slots");
    eval_cmd->add_option("-r,--run", run_dir, "run directory written by train")->required();
    eval_cmd->add_option("--checkpoint", checkpoint, "checkpoint file (default: <run>/checkpoint.txt)");
    eval_cmd->add_option("-n,--episodes", episodes, "held-out episodes (default: train.eval_episodes)");

    auto* base_cmd = app.add_subcommand("baseline", "evaluate a reference policy (exhaustive, random, ddpg, td3, ddpg_eh)");
    add_config(base_cmd, true);
    base_cmd->add_option("-k,--kind", kind, "exhaustive, random, ddpg, td3 or ddpg_eh")
        ->check(CLI::IsMember({"exhaustive", "random", "ddpg", "td3", "ddpg_eh"}));
    base_cmd->add_option("-o,--out", out_dir, "output directory")->required();
    base_cmd->add_option("--seed", seeds, "seeds (default: train.seeds)");

    auto* sweep_cmd = app.add_subcommand("sweep", "cross one config key over values and seeds");
    add_config(sweep_cmd, true);
    sweep_cmd->add_option("-k,--key", key, "dotted config key, e.g. env.protocol")->required();
    sweep_cmd->add_option("-v,--values", values, "comma-separated values")->required();
    sweep_cmd->add_option("-o,--out", out_dir, "output directory")->required();

    auto* plot_cmd = app.add_subcommand("export-plots", "tidy CSV of every run under a directory");
    plot_cmd->add_option("-r,--run", run_dir, "run directory or a tree of them")->required();
    plot_cmd->add_option("-o,--out", out_csv, "output CSV (default: <run>/plot_data.csv)");

    auto* repro_cmd = app.add_subcommand("reproduce", "run the protocol, algorithm and impairment experiments");
    add_config(repro_cmd, true);
    repro_cmd->add_option("-o,--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*train_cmd) {
            const Json doc = read_doc(config_path, overrides);
            const ExperimentConfig cfg = parse_config(doc);
            const fs::path root = out_dir.empty() ? fs::path(cfg.train.output_dir) : fs::path(out_dir);
            for (std::uint64_t s : pick_seeds(cfg, seeds)) {
                const fs::path dir = root / ("seed" + std::to_string(s));
                const TrainResult r = train(with_seed(cfg, s), dir);
                std::printf("%s: %zu episodes, final mean reward %.6f, %.1fs\n", dir.string().c_str(),
                            r.episodes.size(), r.final_mean_reward, r.wall_seconds);
            }
        } else if (*eval_cmd) {
            const fs::path dir(run_dir);
            if (!fs::exists(dir / "config.json")) throw std::runtime_error("no config.json in " + dir.string());
            const ExperimentConfig cfg = load_config(dir / "config.json");
            const fs::path ckpt = checkpoint.empty() ? dir / "checkpoint.txt" : fs::path(checkpoint);
            auto agent = load_agent(cfg, ckpt);
            const EvalResult ev = evaluate(cfg, agent_policy(*agent), episodes ? episodes : cfg.train.eval_episodes);
            write_steps_csv(dir / "eval_steps.csv", ev.steps, cfg.env.nodes);
            print_eval(dir.string(), ev);
        } else if (*base_cmd) {
            const ExperimentConfig cfg = parse_config(read_doc(config_path, overrides));
            const fs::path root(out_dir);
            if (kind == "exhaustive" || kind == "random") {
                const ExperimentConfig c = with_seed(cfg, pick_seeds(cfg, seeds).front());
                const Policy pol = kind == "exhaustive" ? exhaustive_policy(cfg.exhaustive) : random_policy(c.env.seed);
                fs::create_directories(root);
                const EvalResult ev = evaluate(c, pol, cfg.train.eval_episodes);
                write_json(root / "config.json", to_json(c));
                write_steps_csv(root / "eval_steps.csv", ev.steps, cfg.env.nodes);
                write_episodes_csv(root / "episodes.csv", ev.episodes);
                print_eval(kind, ev);
            } else {
                ExperimentConfig c = cfg;
                const rl::AgentConfig d = rl::agent_config_for(rl::agent_kind_from_string(kind));
                c.agent.kind = d.kind;
                c.agent.pairs = d.pairs;
                c.agent.critics_per_pair = d.critics_per_pair;
                c.agent.target_samples = d.target_samples;
                c.agent.target_smoothing = d.target_smoothing;
                c.agent.select_highest_q = d.select_highest_q;
                c.agent.policy_delay = d.policy_delay;
                for (std::uint64_t s : pick_seeds(cfg, seeds)) {
                    const ExperimentConfig cs = with_seed(c, s);
                    const fs::path dir = root / ("seed" + std::to_string(s));
                    TrainResult r = train(cs, dir);
                    const EvalResult ev = evaluate(cs, agent_policy(*r.agent), cs.train.eval_episodes);
                    write_steps_csv(dir / "eval_steps.csv", ev.steps, cs.env.nodes);
                    print_eval(dir.string(), ev);
                }
            }
        } else if (*sweep_cmd) {
            const Json doc = read_doc(config_path, overrides);
            std::vector<std::string> vals;
            std::stringstream ss(values);
            for (std::string v; std::getline(ss, v, ',');)
                if (!v.empty()) vals.push_back(v);
            if (vals.empty()) throw ConfigError("--values: need at least one value");
            for (const auto& d : sweep(doc, key, vals, out_dir)) std::printf("%s\n", d.string().c_str());
        } else if (*plot_cmd) {
            const fs::path out = out_csv.empty() ? fs::path(run_dir) / "plot_data.csv" : fs::path(out_csv);
            const std::size_t rows = export_plots(run_dir, out);
            std::printf("%s: %zu rows\n", out.string().c_str(), rows);
        } else if (*repro_cmd) {
            const ExperimentConfig cfg = parse_config(read_doc(config_path, overrides));
            const FigureReport rep = reproduce_figures(cfg, out_dir, [](const std::string& m) {
                std::fprintf(stderr, "%s\n", m.c_str());
            });
            std::printf("%s", rep.table().c_str());
            std::printf("overall: %s (%.1fs)\n", rep.pass() ? "ok" : "FAILED", rep.wall_seconds);
            return rep.pass() ? kOk : kAcceptance;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntime;
    }
    return kOk;
}
