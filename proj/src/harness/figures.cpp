#include "uavris/harness/figures.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "uavris/harness/runner.hpp"

namespace uavris::harness {

bool ExperimentReport::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

bool FigureReport::pass() const {
    for (const auto& e : experiments)
        if (!e.pass()) return false;
    return true;
}

const Check* FigureReport::find(const std::string& check_name) const {
    for (const auto& e : experiments)
        for (const auto& c : e.checks)
            if (c.name == check_name) return &c;
    return nullptr;
}

std::string FigureReport::table() const {
    std::ostringstream os;
    for (const auto& e : experiments) {
        char head[160];
        std::snprintf(head, sizeof head, "%-22s %-6s %8.1fs\n", e.name.c_str(), e.pass() ? "ok" : "FAILED", e.wall_seconds);
        os << head;
        for (const auto& c : e.checks) os << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
    return os.str();
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

struct RunSummary {
    double final_reward = 0.0;
    double eval_efficiency = 0.0;
    double eval_reward = 0.0;
    double wall_seconds = 0.0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

class Runner {
public:
    Runner(const fs::path& root, const Progress& progress) : root_(root), progress_(progress) {}

    /// Trains (or reuses) the run at `key`, then evaluates it greedily.
    RunSummary run(const std::string& key, const ExperimentConfig& cfg) {
        const auto hit = cache_.find(key);
        if (hit != cache_.end()) return hit->second;
        const fs::path dir = root_ / key;
        if (progress_) progress_("train " + key);
        TrainResult tr = train(cfg, dir);
        const EvalResult ev = evaluate(cfg, agent_policy(*tr.agent), cfg.train.eval_episodes);
        write_steps_csv(dir / "eval_steps.csv", ev.steps, cfg.env.nodes);
        RunSummary s{tr.final_mean_reward, ev.mean_efficiency, ev.mean_reward, tr.wall_seconds};
        write_json(dir / "eval.json", Json{{"mean_efficiency", ev.mean_efficiency}, {"mean_reward", ev.mean_reward},
                                           {"slots", ev.steps.size()}});
        if (progress_)
            progress_("  final reward " + num(s.final_reward) + ", eval efficiency " + num(s.eval_efficiency) + ", " +
                      num(s.wall_seconds) + "s");
        cache_.emplace(key, s);
        return s;
    }

    const fs::path& root() const { return root_; }

private:
    fs::path root_;
    Progress progress_;
    std::map<std::string, RunSummary> cache_;
};

/// Checks a strictly decreasing chain and names the first violating pair.
Check chain(const std::string& name, const std::vector<std::pair<std::string, double>>& items, bool strict) {
    Check c{name, true, ""};
    std::string text;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) text += strict ? " > " : " >= ";
        text += items[i].first + " " + num(items[i].second);
    }
    for (std::size_t i = 0; i + 1 < items.size(); ++i) {
        const bool ok = strict ? items[i].second > items[i + 1].second : items[i].second >= items[i + 1].second;
        if (!ok && c.pass) {
            c.pass = false;
            text += "; violated by " + items[i].first + " vs " + items[i + 1].first;
        }
    }
    c.detail = text;
    return c;
}

std::string protocol_name(EhProtocol p) { return std::string(to_string(p)); }

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

ExperimentReport protocols_and_renewables(const ExperimentConfig& base, Runner& runner) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentReport rep;
    rep.name = "protocols_renewables";
    const std::vector<EhProtocol> protocols{EhProtocol::TS, EhProtocol::PS, EhProtocol::HYBRID};
    std::map<std::string, double> with_re, budget;
    std::map<std::string, std::size_t> uplift_wins;
    double budget_seconds = 0.0;
    for (EhProtocol p : protocols) {
        const std::string pn = protocol_name(p);
        std::vector<double> re;
        for (std::uint64_t seed : base.train.seeds) {
            ExperimentConfig on = with_seed(base, seed);
            on.env.protocol = p;
            on.env.use_renewable = true;
            ExperimentConfig off = on;
            off.env.use_renewable = false;
            const RunSummary a = runner.run(pn + "_re/seed" + std::to_string(seed), on);
            const RunSummary b = runner.run(pn + "_nore/seed" + std::to_string(seed), off);
            re.push_back(a.final_reward);
            budget_seconds += a.wall_seconds;
            if (a.final_reward >= b.final_reward) ++uplift_wins[pn];
            rep.values[pn + "_re_seed" + std::to_string(seed)] = a.final_reward;
            rep.values[pn + "_nore_seed" + std::to_string(seed)] = b.final_reward;
        }
        with_re[pn] = mean(re);
        rep.values[pn + "_re_mean"] = with_re[pn];
    }

    rep.checks.push_back(
        chain("protocol_ordering", {{"HYBRID", with_re["HYBRID"]}, {"PS", with_re["PS"]}, {"TS", with_re["TS"]}}, true));
    const double ts = with_re["TS"], hy = with_re["HYBRID"];
    const double rel = ts != 0.0 ? (hy - ts) / std::abs(ts) : (hy > 0.0 ? INFINITY : 0.0);
    rep.values["hybrid_over_ts_relative"] = rel;
    rep.checks.push_back({"hybrid_margin_over_ts", rel >= 0.10, "HYBRID exceeds TS by " + num(100.0 * rel) + "% (need >= 10%)"});
    rep.values["protocol_training_seconds"] = budget_seconds;
    rep.checks.push_back({"protocol_budget", budget_seconds < 1800.0,
                          "renewable-on protocol runs took " + num(budget_seconds) + "s (limit 1800s)"});

    const std::size_t seeds = base.train.seeds.size();
    const std::size_t need = (2 * seeds + 2) / 3;  // 2 of 3 for three seeds
    Check up{"renewable_uplift", true, ""};
    for (EhProtocol p : protocols) {
        const std::string pn = protocol_name(p);
        const std::size_t w = uplift_wins[pn];
        up.detail += (up.detail.empty() ? "" : ", ") + pn + " " + std::to_string(w) + "/" + std::to_string(seeds);
        if (w < need) {
            up.pass = false;
            up.detail += " (violated: with RE below without RE)";
        }
    }
    up.detail += " seeds with RE >= without RE (need " + std::to_string(need) + ")";
    rep.checks.push_back(up);
    rep.wall_seconds = seconds_since(t0);
    return rep;
}

ExperimentReport algorithms(const ExperimentConfig& base, Runner& runner) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentReport rep;
    rep.name = "algorithms";
    const std::string pn = protocol_name(base.env.protocol);
    std::vector<double> eh, td3, ddpg;
    for (std::uint64_t seed : base.train.seeds) {
        ExperimentConfig c = with_seed(base, seed);
        c.env.use_renewable = true;
        eh.push_back(runner.run(pn + "_re/seed" + std::to_string(seed), c).eval_efficiency);

        ExperimentConfig t = c;
        const rl::AgentConfig td3_defaults = rl::td3_config();
        t.agent.kind = td3_defaults.kind;
        t.agent.pairs = td3_defaults.pairs;
        t.agent.target_samples = td3_defaults.target_samples;
        t.agent.select_highest_q = td3_defaults.select_highest_q;
        t.agent.critics_per_pair = td3_defaults.critics_per_pair;
        td3.push_back(runner.run("td3/seed" + std::to_string(seed), t).eval_efficiency);

        ExperimentConfig d = t;
        const rl::AgentConfig ddpg_defaults = rl::ddpg_config();
        d.agent.kind = ddpg_defaults.kind;
        d.agent.critics_per_pair = ddpg_defaults.critics_per_pair;
        d.agent.target_smoothing = ddpg_defaults.target_smoothing;
        d.agent.policy_delay = ddpg_defaults.policy_delay;
        ddpg.push_back(runner.run("ddpg/seed" + std::to_string(seed), d).eval_efficiency);
    }

    ExperimentConfig oracle_cfg = base;
    oracle_cfg.env.use_renewable = true;
    if (!base.train.seeds.empty()) oracle_cfg = with_seed(oracle_cfg, base.train.seeds.front());
    const fs::path dir = runner.root() / "exhaustive";
    fs::create_directories(dir);
    const EvalResult ex = evaluate(oracle_cfg, exhaustive_policy(base.exhaustive), base.train.eval_episodes);
    write_steps_csv(dir / "eval_steps.csv", ex.steps, base.env.nodes);
    write_json(dir / "config.json", to_json(oracle_cfg));
    write_json(dir / "eval.json", Json{{"mean_efficiency", ex.mean_efficiency}, {"mean_reward", ex.mean_reward},
                                       {"slots", ex.steps.size()}, {"label", "coarse-grid oracle"}});

    rep.values["exhaustive"] = ex.mean_efficiency;
    rep.values["ddpg_eh"] = mean(eh);
    rep.values["td3"] = mean(td3);
    rep.values["ddpg"] = mean(ddpg);
    rep.values["eval_slots"] = static_cast<double>(ex.steps.size());
    rep.checks.push_back(chain("algorithm_ordering",
                               {{"exhaustive", ex.mean_efficiency}, {"DDPG-EH", mean(eh)}, {"TD3", mean(td3)}, {"DDPG", mean(ddpg)}},
                               false));
    const double gap = ex.mean_efficiency > 0.0 ? (ex.mean_efficiency - mean(eh)) / ex.mean_efficiency : 0.0;
    rep.values["ddpg_eh_gap_to_oracle"] = gap;
    rep.checks.push_back({"ddpg_eh_near_oracle", gap <= 0.15,
                          "DDPG-EH is " + num(100.0 * gap) + "% below the coarse-grid oracle (limit 15%)"});
    rep.wall_seconds = seconds_since(t0);
    return rep;
}

ExperimentReport impairments(const ExperimentConfig& base, Runner& runner) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentReport rep;
    rep.name = "impairments";
    const std::string pn = protocol_name(base.env.protocol);
    struct Condition {
        std::string label, key;
        double zeta, phi;
    };
    const std::vector<Condition> conds{{"ideal", "ideal", 0.0, 0.0},
                                       {"csi_only", "csi_only", base.env.zeta, 0.0},
                                       {"hardware_only", "hardware_only", 0.0, base.env.phi},
                                       {"both", pn + "_re", base.env.zeta, base.env.phi}};
    std::map<std::string, double> eff;
    for (const auto& cond : conds) {
        std::vector<double> e;
        for (std::uint64_t seed : base.train.seeds) {
            ExperimentConfig c = with_seed(base, seed);
            c.env.use_renewable = true;
            c.env.zeta = cond.zeta;
            c.env.phi = cond.phi;
            e.push_back(runner.run(cond.key + "/seed" + std::to_string(seed), c).eval_efficiency);
        }
        eff[cond.label] = mean(e);
        rep.values[cond.label] = eff[cond.label];
    }
    rep.checks.push_back(chain("impairment_ordering",
                               {{"ideal", eff["ideal"]}, {"csi_only", eff["csi_only"]},
                                {"hardware_only", eff["hardware_only"]}, {"both", eff["both"]}},
                               true));
    const double d_csi = eff["ideal"] - eff["csi_only"], d_hw = eff["ideal"] - eff["hardware_only"];
    rep.checks.push_back({"csi_drop_smaller", d_csi < d_hw,
                          "ideal-csi_only " + num(d_csi) + " vs ideal-hardware_only " + num(d_hw)});
    rep.wall_seconds = seconds_since(t0);
    return rep;
}

}  // namespace

FigureReport reproduce_figures(const ExperimentConfig& base, const fs::path& out_dir, const Progress& progress) {
    base.validate();
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    Runner runner(out_dir, progress);
    FigureReport report;
    report.experiments.push_back(protocols_and_renewables(base, runner));
    report.experiments.push_back(algorithms(base, runner));
    report.experiments.push_back(impairments(base, runner));
    report.wall_seconds = seconds_since(t0);

    Json summary = Json::object();
    for (const auto& e : report.experiments) {
        Json checks = Json::array();
        for (const auto& c : e.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        summary[e.name] = {{"status", e.pass() ? "ok" : "FAILED"}, {"checks", checks}, {"values", e.values},
                           {"wall_seconds", e.wall_seconds}};
    }
    summary["status"] = report.pass() ? "ok" : "FAILED";
    write_json(out_dir / "report.json", summary);
    return report;
}

}  // namespace uavris::harness
