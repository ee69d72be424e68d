#include "uavris/geometry.hpp"

#include <algorithm>
#include <limits>

#include "uavris/errors.hpp"

namespace uavris {

Position3 Box::clamp(const Position3& p) const {
    return {std::clamp(p.x, lo.x, hi.x), std::clamp(p.y, lo.y, hi.y), std::clamp(p.z, lo.z, hi.z)};
}

std::vector<Position3> planar_grid_offsets(std::size_t count, double spacing) {
    std::size_t rows = 1;
    for (std::size_t r = 1; r * r <= count; ++r) {
        if (count % r == 0) rows = r;
    }
    const std::size_t cols = count / rows;
    std::vector<Position3> offsets;
    offsets.reserve(count);
    const double x0 = -0.5 * static_cast<double>(cols - 1) * spacing;
    const double y0 = -0.5 * static_cast<double>(rows - 1) * spacing;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            offsets.push_back({x0 + static_cast<double>(c) * spacing,
                               y0 + static_cast<double>(r) * spacing, 0.0});
        }
    }
    return offsets;
}

double within_cluster_ss(std::span<const Position3> points, std::span<const Position3> centroids,
                         std::span<const std::size_t> assignment) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        total += squared_distance(points[i], centroids[assignment[i]]);
    }
    return total;
}

namespace {

std::size_t nearest(const Position3& p, const std::vector<Position3>& centroids) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(p, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

std::vector<Position3> farthest_point_init(std::span<const Position3> points, std::size_t k,
                                           std::size_t first) {
    std::vector<Position3> centroids{points[first]};
    std::vector<double> dist(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) dist[i] = squared_distance(points[i], points[first]);
    while (centroids.size() < k) {
        std::size_t pick = 0;
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (dist[i] > dist[pick]) pick = i;
        }
        centroids.push_back(points[pick]);
        for (std::size_t i = 0; i < points.size(); ++i) {
            dist[i] = std::min(dist[i], squared_distance(points[i], points[pick]));
        }
    }
    return centroids;
}

KMeansResult lloyd(std::span<const Position3> points, std::vector<Position3> centroids,
                   std::size_t max_iters) {
    KMeansResult out;
    const std::size_t k = centroids.size();
    std::vector<std::size_t> assignment(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) assignment[i] = nearest(points[i], centroids);

    for (std::size_t it = 0; it < max_iters; ++it) {
        std::vector<Position3> sums(k);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            sums[assignment[i]] = sums[assignment[i]] + points[i];
            ++counts[assignment[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            // empty clusters keep their previous centre
            if (counts[c] > 0) centroids[c] = sums[c] * (1.0 / static_cast<double>(counts[c]));
        }
        out.objective_trace.push_back(within_cluster_ss(points, centroids, assignment));

        bool changed = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const std::size_t c = nearest(points[i], centroids);
            // only move on strict improvement so ties cannot oscillate
            if (c != assignment[i] && squared_distance(points[i], centroids[c]) <
                                          squared_distance(points[i], centroids[assignment[i]])) {
                assignment[i] = c;
                changed = true;
            }
        }
        if (!changed) break;
    }
    out.objective = within_cluster_ss(points, centroids, assignment);
    out.centroids = std::move(centroids);
    out.assignment = std::move(assignment);
    return out;
}

}  // namespace

KMeansResult kmeans(std::span<const Position3> points, std::size_t n_clusters,
                    std::size_t max_iters, std::uint64_t seed, std::size_t restarts) {
    if (points.empty()) throw InvalidInput("kmeans: empty point list");
    if (n_clusters < 1 || n_clusters > points.size())
        throw InvalidInput("kmeans: n_clusters must be in [1, |points|]");
    if (max_iters < 1) throw InvalidInput("kmeans: max_iters must be >= 1");

    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    KMeansResult best;
    bool have = false;
    for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
        KMeansResult run = lloyd(points, farthest_point_init(points, n_clusters, pick(rng)), max_iters);
        if (!have || run.objective < best.objective) {
            best = std::move(run);
            have = true;
        }
    }
    return best;
}

Position3 uav_step(const Position3& current, const Position3& target, double v_max, double dt,
                   const UavLimits& limits) {
    const double z = std::clamp(limits.altitude, limits.z_min, limits.z_max);
    const double dx = target.x - current.x;
    const double dy = target.y - current.y;
    const double horizontal = std::hypot(dx, dy);
    const double reach = v_max * dt;
    if (horizontal <= reach) return {target.x, target.y, z};
    const double s = reach / horizontal;
    return {current.x + s * dx, current.y + s * dy, z};
}

namespace {

Position3 uniform_in(const Box& b, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double ux = u(rng), uy = u(rng), uz = u(rng);
    return {b.lo.x + ux * (b.hi.x - b.lo.x), b.lo.y + uy * (b.hi.y - b.lo.y),
            b.lo.z + uz * (b.hi.z - b.lo.z)};
}

double draw_speed(const MobilityConfig& cfg, Rng& rng) {
    if (cfg.v_node_max <= cfg.v_node_min) return std::max(cfg.v_node_max, 0.0);
    return std::uniform_real_distribution<double>(cfg.v_node_min, cfg.v_node_max)(rng);
}

}  // namespace

void init_node_mobility(Scene& scene, const MobilityConfig& cfg, Rng& rng) {
    const std::size_t k = scene.node_positions.size();
    scene.node_waypoints.resize(k);
    scene.node_speeds.resize(k);
    scene.node_velocities.assign(k, Position3{});
    for (std::size_t i = 0; i < k; ++i) {
        scene.node_waypoints[i] = uniform_in(scene.bounds, rng);
        scene.node_speeds[i] = draw_speed(cfg, rng);
    }
}

Scene node_mobility_step(const Scene& scene, double dt, const MobilityConfig& cfg, Rng& rng) {
    Scene next = scene;
    const std::size_t k = next.node_positions.size();
    if (next.node_waypoints.size() != k || next.node_speeds.size() != k) init_node_mobility(next, cfg, rng);
    next.node_velocities.assign(k, Position3{});

    for (std::size_t i = 0; i < k; ++i) {
        const Position3 to_wp = next.node_waypoints[i] - next.node_positions[i];
        const double gap = to_wp.norm();
        const double reach = next.node_speeds[i] * dt;
        if (gap <= reach) {
            next.node_velocities[i] = to_wp * (1.0 / dt);
            next.node_positions[i] = next.node_waypoints[i];
            next.node_waypoints[i] = uniform_in(next.bounds, rng);
            next.node_speeds[i] = draw_speed(cfg, rng);
        } else {
            const Position3 step = to_wp * (reach / gap);
            next.node_velocities[i] = step * (1.0 / dt);
            next.node_positions[i] = next.bounds.clamp(next.node_positions[i] + step);
        }
    }
    return next;
}

std::vector<Position3> element_world_positions(const Scene& scene) {
    std::vector<Position3> out;
    out.reserve(scene.ris_element_offsets.size());
    for (const auto& off : scene.ris_element_offsets) out.push_back(scene.uav_position + off);
    return out;
}

}  // namespace uavris
