#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace uavris {

using Rng = std::mt19937_64;

/// A point (or displacement) in meters, world frame, z up.
struct Position3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Position3 operator+(const Position3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Position3 operator-(const Position3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Position3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Position3&) const = default;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double horizontal_norm() const { return std::hypot(x, y); }
};

inline double distance(const Position3& a, const Position3& b) { return (a - b).norm(); }
inline double squared_distance(const Position3& a, const Position3& b) {
    const Position3 d = a - b;
    return d.x * d.x + d.y * d.y + d.z * d.z;
}

struct Box {
    Position3 lo;
    Position3 hi;

    bool contains(const Position3& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
               p.z <= hi.z;
    }
    Position3 clamp(const Position3& p) const;
};

struct UavLimits {
    double altitude = 50.0;  // service altitude
    double z_min = 20.0;
    double z_max = 120.0;
};

struct MobilityConfig {
    double v_node_min = 0.5;
    double v_node_max = 2.0;
};

/// Entity layout. Node waypoints and speeds are the private random-waypoint
/// state; node_velocities is what an observer would measure.
struct Scene {
    Position3 bs_position;
    Position3 uav_position;
    std::vector<Position3> ris_element_offsets;
    std::vector<Position3> node_positions;
    std::vector<Position3> node_velocities;
    std::vector<Position3> node_waypoints;
    std::vector<double> node_speeds;
    Box bounds;
};

/// Uniform rectangular grid of `count` elements in the horizontal plane,
/// centred on the origin. Rows x cols is the most square factorisation.
std::vector<Position3> planar_grid_offsets(std::size_t count, double spacing);

struct KMeansResult {
    std::vector<Position3> centroids;
    std::vector<std::size_t> assignment;
    /// Within-cluster sum of squares after each Lloyd iteration of the
    /// restart that was kept.
    std::vector<double> objective_trace;
    double objective = 0.0;
};

/// Lloyd's algorithm with farthest-point seeding. The first centre is drawn
/// from `seed`; every later centre is the point farthest from the chosen
/// set, ties to the lowest index. `restarts` independent seeds are tried and
/// the lowest objective kept.
KMeansResult kmeans(std::span<const Position3> points, std::size_t n_clusters,
                    std::size_t max_iters, std::uint64_t seed, std::size_t restarts = 4);

double within_cluster_ss(std::span<const Position3> points, std::span<const Position3> centroids,
                         std::span<const std::size_t> assignment);

/// One slot of UAV motion toward the horizontal projection of `target`,
/// flying at the clamped service altitude.
Position3 uav_step(const Position3& current, const Position3& target, double v_max, double dt,
                   const UavLimits& limits);

/// Random-waypoint step for every node.
Scene node_mobility_step(const Scene& scene, double dt, const MobilityConfig& cfg, Rng& rng);

/// Draws fresh waypoints and speeds for all nodes (used at reset).
void init_node_mobility(Scene& scene, const MobilityConfig& cfg, Rng& rng);

std::vector<Position3> element_world_positions(const Scene& scene);

}  // namespace uavris
