#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "uavris/errors.hpp"
#include "uavris/rl/agent.hpp"
#include "uavris/rl/checkpoint.hpp"
#include "uavris/rl/exhaustive.hpp"
#include "uavris/rl/mlp.hpp"
#include "uavris/rl/replay.hpp"

using namespace uavris;
using namespace uavris::rl;

namespace {

Eigen::MatrixXd uniform_matrix(Rng& rng, Eigen::Index r, Eigen::Index c, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) m(i, j) = u(rng);
    return m;
}

Batch random_batch(Rng& rng, std::size_t sd, std::size_t ad, std::size_t n, double done_prob = 0.1) {
    Batch b;
    const auto N = static_cast<Eigen::Index>(n);
    b.states = uniform_matrix(rng, static_cast<Eigen::Index>(sd), N);
    b.actions = uniform_matrix(rng, static_cast<Eigen::Index>(ad), N);
    b.rewards = uniform_matrix(rng, N, 1).col(0);
    b.next_states = uniform_matrix(rng, static_cast<Eigen::Index>(sd), N);
    b.done.resize(N);
    std::bernoulli_distribution d(done_prob);
    for (Eigen::Index i = 0; i < N; ++i) b.done(i) = d(rng) ? 1.0 : 0.0;
    b.slots.assign(n, 0);
    return b;
}

AgentConfig small(AgentKind kind) {
    AgentConfig c = agent_config_for(kind);
    c.hidden = {16, 16};
    c.batch_size = 8;
    c.buffer_capacity = 64;
    c.seed = 3;
    return c;
}

double total_loss(const Mlp& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& weights) {
    return (net.forward(x).array() * weights.array()).sum();
}

void same_nets(const Agent& a, const Agent& b) {
    REQUIRE(a.pairs().size() == b.pairs().size());
    for (std::size_t p = 0; p < a.pairs().size(); ++p) {
        const auto& x = a.pairs()[p];
        const auto& y = b.pairs()[p];
        CHECK(x.actor == y.actor);
        CHECK(x.actor_target == y.actor_target);
        for (std::size_t c = 0; c < x.critics.size(); ++c) {
            CHECK(x.critics[c] == y.critics[c]);
            CHECK(x.critic_targets[c] == y.critic_targets[c]);
        }
    }
}

}  // namespace

TEST_CASE("backprop matches central differences") {
    Rng rng(1);
    for (auto act : {Activation::Tanh, Activation::Relu}) {
        Mlp net({3, 5, 4, 2}, act, Activation::Tanh, rng, 0.5);
        const Eigen::MatrixXd x = uniform_matrix(rng, 3, 6);
        const Eigen::MatrixXd w = uniform_matrix(rng, 2, 6);
        Tape tape;
        Gradients g;
        net.forward(x, tape);
        const Eigen::MatrixXd dx = net.backward(tape, w, g);
        const Eigen::VectorXd analytic = flatten(g);

        const Eigen::VectorXd p0 = net.flat();
        const double h = 1e-6;
        double worst = 0.0;
        for (Eigen::Index i = 0; i < p0.size(); ++i) {
            Eigen::VectorXd p = p0;
            p(i) += h;
            net.set_flat(p);
            const double up = total_loss(net, x, w);
            p(i) -= 2 * h;
            net.set_flat(p);
            const double down = total_loss(net, x, w);
            worst = std::max(worst, std::abs((up - down) / (2 * h) - analytic(i)));
        }
        net.set_flat(p0);
        CHECK(worst < 1e-4);

        worst = 0.0;
        for (Eigen::Index r = 0; r < x.rows(); ++r)
            for (Eigen::Index c = 0; c < x.cols(); ++c) {
                Eigen::MatrixXd xp = x, xm = x;
                xp(r, c) += h;
                xm(r, c) -= h;
                const double fd = (total_loss(net, xp, w) - total_loss(net, xm, w)) / (2 * h);
                worst = std::max(worst, std::abs(fd - dx(r, c)));
            }
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("network initialisation") {
    Rng rng(2);
    Mlp net({10, 32, 4}, Activation::Relu, Activation::Tanh, rng, 3e-3);
    CHECK(net.parameter_count() == 10 * 32 + 32 + 32 * 4 + 4);
    CHECK(net.layers()[1].w.cwiseAbs().maxCoeff() <= 3e-3);
    CHECK(net.layers()[0].w.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(10.0));
    Eigen::VectorXd p = net.flat();
    p(7) = 42.0;
    net.set_flat(p);
    CHECK(net.flat() == p);
    CHECK_THROWS_AS(net.set_flat(Eigen::VectorXd::Zero(3)), InvalidInput);
    CHECK_THROWS_AS(Mlp({4}, Activation::Relu, Activation::Tanh, rng), InvalidInput);
}

TEST_CASE("adam first step moves by the learning rate") {
    Rng rng(3);
    Mlp net({2, 3}, Activation::Relu, Activation::Identity, rng, 1.0);
    Adam opt(net, AdamConfig{0.01});
    Gradients g;
    g.dw = {uniform_matrix(rng, 3, 2, -5.0, 5.0)};
    g.db = {uniform_matrix(rng, 3, 1, -5.0, 5.0).col(0)};
    const Mlp before = net;
    opt.step(net, g);
    CHECK(opt.steps() == 1);
    for (Eigen::Index i = 0; i < 6; ++i) {
        const double moved = net.layers()[0].w(i) - before.layers()[0].w(i);
        CHECK(moved == doctest::Approx(-0.01 * (g.dw[0](i) > 0 ? 1.0 : -1.0)).epsilon(1e-6));
    }
}

TEST_CASE("adam minimises a quadratic") {
    Rng rng(4);
    Mlp net({1, 1}, Activation::Relu, Activation::Identity, rng, 1.0);
    net.layers()[0].w(0, 0) = 1.0;
    net.layers()[0].b(0) = -0.5;
    Adam opt(net, AdamConfig{0.01});
    for (int i = 0; i < 3000; ++i) {
        Gradients g;
        g.dw = {2.0 * net.layers()[0].w};
        g.db = {2.0 * net.layers()[0].b};
        opt.step(net, g);
    }
    CHECK(net.flat().norm() < 1e-3);
}

TEST_CASE("soft update") {
    Rng rng(5);
    Mlp a({3, 4, 2}, Activation::Relu, Activation::Tanh, rng, 1.0);
    Mlp b({3, 4, 2}, Activation::Relu, Activation::Tanh, rng, 1.0);
    Mlp t = b;
    soft_update(t, a, 0.0);
    CHECK(t == b);
    soft_update(t, a, 0.5);
    CHECK((t.flat() - 0.5 * (a.flat() + b.flat())).cwiseAbs().maxCoeff() < 1e-15);
    soft_update(t, a, 1.0);
    CHECK(t == a);
    Mlp other({3, 2}, Activation::Relu, Activation::Tanh, rng);
    CHECK_THROWS_AS(soft_update(other, a, 0.5), InvalidInput);
}

TEST_CASE("softmax value") {
    const std::vector<double> q{0.0, 1.0};
    CHECK(softmax_value(q, 1.0) == doctest::Approx(std::exp(1.0) / (1.0 + std::exp(1.0))).epsilon(1e-14));
    CHECK(softmax_value(q, 0.0) == doctest::Approx(0.5));
    CHECK(softmax_value(q, 1e4) == doctest::Approx(1.0));
    CHECK(softmax_value(std::vector<double>{-2.5}, 3.0) == -2.5);
    CHECK(softmax_value(std::vector<double>{1e6, 1e6 - 1.0}, 1.0) == doctest::Approx(1e6 - 1.0 / (1.0 + std::exp(1.0))));
    CHECK_THROWS_AS(softmax_value(std::vector<double>{}, 1.0), InvalidInput);
    CHECK_THROWS_AS(softmax_value(q, -1.0), InvalidInput);

    Rng rng(6);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> v(1 + trial % 9);
        for (auto& x : v) x = u(rng);
        const double lo = *std::min_element(v.begin(), v.end());
        const double hi = *std::max_element(v.begin(), v.end());
        double last = -std::numeric_limits<double>::infinity();
        for (double beta : {0.0, 0.01, 0.1, 1.0, 10.0, 100.0}) {
            const double s = softmax_value(v, beta);
            CHECK(s >= lo);
            CHECK(s <= hi);
            CHECK(s >= last - 1e-9);
            last = s;
        }
        double mean = 0.0;
        for (double x : v) mean += x;
        CHECK(softmax_value(v, 0.0) == doctest::Approx(mean / static_cast<double>(v.size())).epsilon(1e-12));
    }
}

TEST_CASE("terminal transitions bootstrap nothing") {
    Rng rng(7);
    Agent agent(5, 3, small(AgentKind::DDPG_EH));
    Batch b = random_batch(rng, 5, 3, 16);
    b.done.setOnes();
    const auto y = agent.target_q(b, 0);
    for (Eigen::Index i = 0; i < 16; ++i) CHECK(y(i) == b.rewards(i));
}

TEST_CASE("single-sample target is the clipped double-Q target") {
    Rng rng(8);
    Agent agent(5, 3, small(AgentKind::TD3));
    const Batch b = random_batch(rng, 5, 3, 16, 0.3);
    TargetLog log;
    const auto y = agent.target_q(b, 0, &log);
    REQUIRE(log.actions.size() == 1);
    const auto& pc = agent.pairs()[0];
    Eigen::MatrixXd x(8, 16);
    x << b.next_states, log.actions[0];
    const Eigen::MatrixXd q1 = pc.critic_targets[0].forward(x);
    const Eigen::MatrixXd q2 = pc.critic_targets[1].forward(x);
    const double gamma = agent.config().gamma;
    for (Eigen::Index i = 0; i < 16; ++i) {
        CHECK(log.min_q(0, i) == std::min(q1(0, i), q2(0, i)));
        CHECK(y(i) == b.rewards(i) + (1.0 - b.done(i)) * gamma * log.min_q(0, i));
    }
    // smoothing noise is bounded by the clip
    const Eigen::MatrixXd base = pc.actor_target.forward(b.next_states);
    CHECK((log.actions[0] - base).cwiseAbs().maxCoeff() <= agent.config().noise_clip + 1e-15);
    CHECK(log.actions[0].cwiseAbs().maxCoeff() <= 1.0);
}

TEST_CASE("multi-sample target softmaxes the per-sample minima") {
    Rng rng(9);
    auto cfg = small(AgentKind::DDPG_EH);
    cfg.target_samples = 4;
    cfg.beta = 2.0;
    Agent agent(5, 3, cfg);
    const Batch b = random_batch(rng, 5, 3, 16, 0.2);
    for (std::size_t pair = 0; pair < 2; ++pair) {
        TargetLog log;
        const auto y = agent.target_q(b, pair, &log);
        REQUIRE(log.actions.size() == 4);
        const auto& pc = agent.pairs()[pair];
        for (Eigen::Index i = 0; i < 16; ++i) {
            double num = 0.0, den = 0.0;
            for (Eigen::Index m = 0; m < 4; ++m) {
                Eigen::VectorXd x(8);
                x << b.next_states.col(i), log.actions[static_cast<std::size_t>(m)].col(i);
                const double q = std::min(pc.critic_targets[0].forward(x)(0, 0), pc.critic_targets[1].forward(x)(0, 0));
                CHECK(std::abs(q - log.min_q(m, i)) < 1e-12);
                num += q * std::exp(cfg.beta * q);
                den += std::exp(cfg.beta * q);
            }
            const double oracle = b.rewards(i) + (1.0 - b.done(i)) * cfg.gamma * num / den;
            CHECK(std::abs(y(i) - oracle) < 1e-10);
        }
    }
}

TEST_CASE("DDPG target uses the single target critic without smoothing") {
    Rng rng(10);
    Agent agent(5, 3, small(AgentKind::DDPG));
    const Batch b = random_batch(rng, 5, 3, 8, 0.3);
    const auto y = agent.target_q(b, 0);
    const auto& pc = agent.pairs()[0];
    Eigen::MatrixXd x(8, 8);
    x << b.next_states, pc.actor_target.forward(b.next_states);
    const Eigen::MatrixXd q = pc.critic_targets[0].forward(x);
    for (Eigen::Index i = 0; i < 8; ++i) CHECK(y(i) == b.rewards(i) + (1.0 - b.done(i)) * agent.config().gamma * q(0, i));
}

TEST_CASE("the extended agent collapses to TD3 with one pair and one sample") {
    Rng rng(11);
    auto eh = small(AgentKind::DDPG_EH);
    eh.pairs = 1;
    eh.target_samples = 1;
    eh.select_highest_q = false;
    Agent a(5, 3, eh);
    Agent b(5, 3, small(AgentKind::TD3));
    same_nets(a, b);
    for (int i = 0; i < 6; ++i) {
        const Batch batch = random_batch(rng, 5, 3, 8);
        a.train_on(batch);
        b.train_on(batch);
    }
    same_nets(a, b);
}

TEST_CASE("actor and targets move only every d-th update") {
    Rng rng(12);
    Agent agent(5, 3, small(AgentKind::TD3));
    const Batch batch = random_batch(rng, 5, 3, 8);
    const Mlp actor0 = agent.pairs()[0].actor;
    const Mlp target0 = agent.pairs()[0].critic_targets[0];
    const Mlp critic0 = agent.pairs()[0].critics[0];

    auto d1 = agent.train_on(batch);
    CHECK_FALSE(d1.actor_updated);
    CHECK(std::isnan(d1.actor_loss[0]));
    CHECK(agent.pairs()[0].actor == actor0);
    CHECK(agent.pairs()[0].critic_targets[0] == target0);
    CHECK_FALSE(agent.pairs()[0].critics[0] == critic0);

    auto d2 = agent.train_on(batch);
    CHECK(d2.actor_updated);
    CHECK(std::isfinite(d2.actor_loss[0]));
    CHECK_FALSE(agent.pairs()[0].actor == actor0);
    CHECK_FALSE(agent.pairs()[0].critic_targets[0] == target0);
    CHECK_FALSE(agent.train_on(batch).actor_updated);
    CHECK(agent.updates() == 3);

    Agent ddpg(5, 3, small(AgentKind::DDPG));
    CHECK(ddpg.train_on(batch).actor_updated);
}

TEST_CASE("critics can fit a fixed batch") {
    Rng rng(13);
    auto cfg = small(AgentKind::DDPG_EH);
    cfg.hidden = {64, 64};
    Agent agent(5, 3, cfg);
    Batch batch = random_batch(rng, 5, 3, 32);
    batch.done.setOnes();
    const double first = agent.train_on(batch).critic_loss[0];
    double last = first;
    for (int i = 0; i < 200; ++i) last = agent.train_on(batch).critic_loss[0];
    CHECK(last < first / 100.0);
}

TEST_CASE("training stays finite") {
    Rng rng(14);
    for (auto kind : {AgentKind::DDPG_EH, AgentKind::TD3, AgentKind::DDPG}) {
        auto cfg = small(kind);
        cfg.batch_size = 16;
        Agent agent(6, 2, cfg);
        ReplayBuffer buf(200, 6, 2);
        CHECK_FALSE(agent.train_step(buf).ready);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            Transition t{uniform_matrix(rng, 6, 1).col(0), agent.random_action(), u(rng), uniform_matrix(rng, 6, 1).col(0), i % 50 == 49};
            buf.push(t);
        }
        for (int i = 0; i < 300; ++i) {
            const auto d = agent.train_step(buf);
            REQUIRE(d.ready);
            for (double l : d.critic_loss) CHECK(std::isfinite(l));
            CHECK(std::isfinite(d.q_mean));
        }
        for (const auto& pc : agent.pairs()) {
            CHECK(pc.actor.flat().allFinite());
            for (const auto& c : pc.critics) CHECK(c.flat().allFinite());
        }
    }
}

TEST_CASE("acting") {
    Rng rng(15);
    Agent agent(5, 3, small(AgentKind::DDPG_EH));
    for (int i = 0; i < 200; ++i) {
        const Eigen::VectorXd s = uniform_matrix(rng, 5, 1, -3.0, 3.0).col(0);
        const auto d = agent.propose(s);
        REQUIRE(d.proposals.size() == 2);
        CHECK(d.scores[d.chosen] == *std::max_element(d.scores.begin(), d.scores.end()));
        CHECK(agent.act(s, false) == d.action);
        const auto noisy = agent.act(s, true);
        CHECK(noisy.cwiseAbs().maxCoeff() <= 1.0);
        CHECK(agent.random_action().cwiseAbs().maxCoeff() <= 1.0);
    }
    agent.pairs()[1] = agent.pairs()[0];
    const auto tie = agent.propose(Eigen::VectorXd::Zero(5));
    CHECK(tie.scores[0] == tie.scores[1]);
    CHECK(tie.chosen == 0);

    Agent td3(5, 3, small(AgentKind::TD3));
    CHECK(td3.propose(Eigen::VectorXd::Zero(5)).proposals.size() == 1);
    CHECK_THROWS_AS(agent.act(Eigen::VectorXd::Zero(4), false), InvalidInput);
}

TEST_CASE("agent configuration") {
    CHECK(agent_kind_from_string(to_string(AgentKind::TD3)) == AgentKind::TD3);
    CHECK_THROWS_AS(agent_kind_from_string("sac"), InvalidInput);
    auto c = ddpg_eh_config();
    c.gamma = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = ddpg_eh_config();
    c.buffer_capacity = 4;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    CHECK(ddpg_config().critics_per_pair == 1);
    CHECK_FALSE(ddpg_config().target_smoothing);
    CHECK(td3_config().pairs == 1);
}

TEST_CASE("replay buffer overwrites oldest first") {
    ReplayBuffer buf(5, 1, 1);
    for (int i = 0; i < 8; ++i)
        buf.push(Eigen::VectorXd::Constant(1, i), Eigen::VectorXd::Zero(1), i, Eigen::VectorXd::Zero(1), false);
    CHECK(buf.size() == 5);
    CHECK(buf.inserted() == 8);
    std::set<std::size_t> serials;
    for (std::size_t s = 0; s < 5; ++s) {
        serials.insert(buf.serial(s));
        CHECK(buf.at(s).reward == static_cast<double>(buf.serial(s)));
    }
    CHECK(serials == std::set<std::size_t>{3, 4, 5, 6, 7});
    CHECK_THROWS_AS(buf.push(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(1), 0, Eigen::VectorXd::Zero(1), false),
                    InvalidInput);
    Rng rng(16);
    CHECK_THROWS_AS(buf.sample(6, rng), InvalidInput);
}

TEST_CASE("replay sampling is uniform without replacement") {
    ReplayBuffer buf(20, 1, 1);
    for (int i = 0; i < 20; ++i)
        buf.push(Eigen::VectorXd::Constant(1, i), Eigen::VectorXd::Zero(1), i, Eigen::VectorXd::Zero(1), i % 2 == 0);
    Rng rng(17);
    std::vector<double> counts(20, 0.0);
    const int draws = 20000;
    for (int d = 0; d < draws; ++d) {
        const Batch b = buf.sample(5, rng);
        std::set<std::size_t> seen(b.slots.begin(), b.slots.end());
        CHECK(seen.size() == 5);
        for (std::size_t i = 0; i < 5; ++i) {
            ++counts[b.slots[i]];
            CHECK(b.rewards(static_cast<Eigen::Index>(i)) == buf.at(b.slots[i]).reward);
            CHECK(b.done(static_cast<Eigen::Index>(i)) == (buf.at(b.slots[i]).done ? 1.0 : 0.0));
        }
    }
    const double expect = draws * 5.0 / 20.0;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;
    CHECK(chi2 < 43.82);  // 19 dof, p = 0.001
}

namespace {

EnvConfig search_env(EhProtocol p) {
    EnvConfig c;
    c.antennas = 2;
    c.elements = 3;
    c.nodes = 2;
    c.horizon = 5;
    c.protocol = p;
    c.p_max = 10.0;
    c.qos_min = 1e6;
    return c;
}

}  // namespace

TEST_CASE("single-point search grid") {
    Environment env(search_env(EhProtocol::PS));
    env.reset(1);
    ExhaustiveConfig ex{1, 1, 1, 1, 1, 10};
    CHECK(exhaustive_cost(env.config(), ex) == 1);
    const auto r = exhaustive_search(env, ex);
    CHECK(r.evaluations == 1);
    CHECK(r.action.rho == 0.0);
    for (double p : r.action.power) CHECK(p == 0.0);
}

TEST_CASE("search matches full enumeration of its grid") {
    for (auto proto : {EhProtocol::TS, EhProtocol::PS, EhProtocol::HYBRID}) {
        Environment env(search_env(proto));
        env.reset(2);
        const ExhaustiveConfig ex{3, 2, 1, 1, 3, 100000};
        const auto r = exhaustive_search(env, ex);
        CHECK(r.evaluations == exhaustive_cost(env.config(), ex));

        double best = -std::numeric_limits<double>::infinity();
        const auto grid = power_grid(2, 3, env.config().p_max);
        CHECK(grid.size() == 9);
        std::vector<EhAction> all;
        for (const auto& pw : grid)
            for (double t : {0.0, 0.5, 1.0})
                for (double rho : {0.0, 0.5, 1.0})
                    for (double w : {0.0, 1.0}) {
                        EhAction a;
                        a.tau = proto == EhProtocol::PS ? 0.0 : t;
                        a.rho = proto == EhProtocol::TS ? 0.0 : rho;
                        a.omega.assign(3, proto == EhProtocol::HYBRID ? w : 0.0);
                        a.theta.assign(3, 0.0);
                        a.power = pw;
                        best = std::max(best, env.evaluate_slot(a).reward);
                        all.push_back(a);
                    }
        CHECK(r.reward == best);

        Rng rng(18);
        std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
        for (int i = 0; i < 1000; ++i) CHECK(env.evaluate_slot(all[pick(rng)]).reward <= r.reward);
    }
}

TEST_CASE("power grid respects the budget") {
    const auto g = power_grid(3, 5, 2.0);
    CHECK(g.size() == 125);
    for (const auto& p : g) {
        double s = 0.0;
        for (double v : p) s += v;
        CHECK(s <= 2.0 * (1.0 + 1e-12));
    }
}

TEST_CASE("greedy phases never do worse than all-zero phases") {
    Environment env(search_env(EhProtocol::PS));
    env.reset(4);
    const std::vector<double> power{3.0, 3.0};
    const auto theta = greedy_phases(env, power, 8, 2);
    EhAction a;
    a.omega.assign(3, 0.0);
    a.power = power;
    a.theta.assign(3, 0.0);
    const auto zero = env.evaluate_slot(a).report.rates;
    a.theta = theta;
    const auto tuned = env.evaluate_slot(a).report.rates;
    CHECK(std::min(tuned[0], tuned[1]) >= std::min(zero[0], zero[1]));
}

TEST_CASE("search refuses grids over budget") {
    Environment env(search_env(EhProtocol::HYBRID));
    env.reset(3);
    const ExhaustiveConfig ex{11, 2, 8, 2, 5, 100};
    CHECK_THROWS_AS(exhaustive_search(env, ex), BudgetError);
}

TEST_CASE("checkpoint round trip") {
    Rng rng(19);
    Agent a(5, 3, small(AgentKind::DDPG_EH));
    for (int i = 0; i < 5; ++i) a.train_on(random_batch(rng, 5, 3, 8));
    std::stringstream ss;
    save_checkpoint(ss, a, "00000000000000ab");
    const std::string text = ss.str();

    Agent b(5, 3, small(AgentKind::DDPG_EH));
    std::istringstream in(text);
    load_checkpoint(in, b, "00000000000000ab");
    same_nets(a, b);
    CHECK(b.updates() == a.updates());
    for (std::size_t p = 0; p < 2; ++p) {
        const auto& x = a.pairs()[p];
        const auto& y = b.pairs()[p];
        CHECK(y.actor_opt.steps() == x.actor_opt.steps());
        for (std::size_t c = 0; c < 2; ++c) {
            CHECK(y.critic_opts[c].steps() == x.critic_opts[c].steps());
            for (std::size_t l = 0; l < x.critic_opts[c].first_moment().size(); ++l) {
                CHECK(y.critic_opts[c].first_moment()[l].w == x.critic_opts[c].first_moment()[l].w);
                CHECK(y.critic_opts[c].second_moment()[l].b == x.critic_opts[c].second_moment()[l].b);
            }
        }
    }
    std::stringstream again;
    save_checkpoint(again, b, "00000000000000ab");
    CHECK(again.str() == text);

    Agent c(5, 3, small(AgentKind::DDPG_EH));
    std::istringstream wrong_hash(text);
    CHECK_THROWS_AS(load_checkpoint(wrong_hash, c, "00000000000000ac"), ConfigError);
    Agent d(5, 3, small(AgentKind::TD3));
    std::istringstream wrong_kind(text);
    CHECK_THROWS_AS(load_checkpoint(wrong_kind, d, "00000000000000ab"), ConfigError);
    std::istringstream truncated(text.substr(0, text.size() / 2));
    Agent e(5, 3, small(AgentKind::DDPG_EH));
    CHECK_THROWS_AS(load_checkpoint(truncated, e, "00000000000000ab"), InvalidInput);
}

TEST_CASE("hashing") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hash_hex(0xabULL) == "00000000000000ab");
}
