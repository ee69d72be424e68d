#include "uavris/rl/exhaustive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uavris/errors.hpp"

namespace uavris::rl {

namespace {

std::vector<double> levels(std::size_t points) {
    if (points <= 1) return {0.0};
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) v[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    return v;
}

struct FractionPoint {
    double tau = 0.0;
    double rho = 0.0;
    double omega = 0.0;
};

std::vector<FractionPoint> fraction_grid(EhProtocol protocol, const ExhaustiveConfig& ex) {
    const auto f = levels(ex.fraction_points);
    std::vector<FractionPoint> out;
    switch (protocol) {
        case EhProtocol::TS:
            for (double t : f) out.push_back({t, 0.0, 0.0});
            break;
        case EhProtocol::PS:
            for (double r : f) out.push_back({0.0, r, 0.0});
            break;
        case EhProtocol::HYBRID:
            for (double t : f)
                for (double r : f)
                    for (double w : levels(ex.omega_points)) out.push_back({t, r, w});
            break;
    }
    return out;
}

double worst_then_sum(const SlotReport& r) {
    double worst = r.rates.empty() ? 0.0 : *std::min_element(r.rates.begin(), r.rates.end());
    double sum = 0.0;
    for (double v : r.rates) sum += v;
    return worst + 1e-6 * sum;
}

}  // namespace

std::vector<std::vector<double>> power_grid(std::size_t nodes, std::size_t points, double p_max) {
    const auto u = levels(std::max<std::size_t>(points, 1));
    std::vector<std::vector<double>> out;
    std::vector<std::size_t> idx(nodes, 0);
    while (true) {
        double total = 0.0;
        for (std::size_t k = 0; k < nodes; ++k) total += u[idx[k]];
        const double scale = p_max / std::max(1.0, total);
        std::vector<double> p(nodes);
        for (std::size_t k = 0; k < nodes; ++k) p[k] = u[idx[k]] * scale;
        out.push_back(std::move(p));

        std::size_t k = nodes;
        while (k > 0) {
            --k;
            if (++idx[k] < u.size()) break;
            idx[k] = 0;
            if (k == 0) return out;
        }
        if (nodes == 0) return out;
    }
}

std::vector<double> greedy_phases(const Environment& env, const std::vector<double>& power, std::size_t levels_n,
                                  std::size_t sweeps, std::size_t* evaluations) {
    const EnvConfig& cfg = env.config();
    EhAction a;
    a.omega.assign(cfg.elements, 0.0);
    a.theta.assign(cfg.elements, 0.0);
    a.power = power;
    if (levels_n <= 1) return a.theta;

    double best = worst_then_sum(env.evaluate_slot(a).report);
    std::size_t evals = 1;
    for (std::size_t s = 0; s < sweeps; ++s) {
        bool improved = false;
        for (std::size_t l = 0; l < cfg.elements; ++l) {
            const double keep = a.theta[l];
            double best_theta = keep;
            for (std::size_t c = 0; c < levels_n; ++c) {
                const double th = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(levels_n);
                if (th == keep) continue;
                a.theta[l] = th;
                const double v = worst_then_sum(env.evaluate_slot(a).report);
                ++evals;
                if (v > best) {
                    best = v;
                    best_theta = th;
                    improved = true;
                }
            }
            a.theta[l] = best_theta;
        }
        if (!improved) break;
    }
    if (evaluations) *evaluations += evals;
    return a.theta;
}

std::size_t exhaustive_cost(const EnvConfig& cfg, const ExhaustiveConfig& ex) {
    const std::size_t powers = power_grid(cfg.nodes, ex.power_points, cfg.p_max).size();
    const std::size_t phase = ex.phase_levels <= 1 ? 0 : 1 + ex.phase_sweeps * cfg.elements * (ex.phase_levels - 1);
    return powers * (phase + fraction_grid(cfg.protocol, ex).size());
}

ExhaustiveResult exhaustive_search(const Environment& env, const ExhaustiveConfig& ex) {
    const EnvConfig& cfg = env.config();
    const std::size_t cost = exhaustive_cost(cfg, ex);
    if (cost > ex.budget)
        throw BudgetError("exhaustive_search: grid needs " + std::to_string(cost) + " evaluations, budget is " +
                          std::to_string(ex.budget));

    const auto fractions = fraction_grid(cfg.protocol, ex);
    ExhaustiveResult best;
    bool have = false;
    for (const auto& power : power_grid(cfg.nodes, ex.power_points, cfg.p_max)) {
        EhAction a;
        a.power = power;
        a.theta = greedy_phases(env, power, ex.phase_levels, ex.phase_sweeps, &best.evaluations);
        for (const FractionPoint& f : fractions) {
            a.tau = f.tau;
            a.rho = f.rho;
            a.omega.assign(cfg.elements, f.omega);
            const SlotOutcome o = env.evaluate_slot(a);
            ++best.evaluations;
            if (!have || o.reward > best.reward) {
                best.action = a;
                best.reward = o.reward;
                best.report = o.report;
                have = true;
            }
        }
    }
    return best;
}

}  // namespace uavris::rl
