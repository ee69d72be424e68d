#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "uavris/env.hpp"

namespace uavris::rl {

/// Coarse-grid search settings. The grid is the Cartesian product of
/// fraction levels (tau and/or rho), a shared scalar omega, and a power grid
/// per node; phases come from a greedy per-element codebook sweep done once
/// per power point.
struct ExhaustiveConfig {
    std::size_t fraction_points = 11;
    std::size_t omega_points = 2;
    std::size_t phase_levels = 8;
    std::size_t phase_sweeps = 2;
    std::size_t power_points = 5;
    std::size_t budget = 2'000'000;  // max slot evaluations per call
};

struct ExhaustiveResult {
    EhAction action;
    double reward = 0.0;
    SlotReport report;
    std::size_t evaluations = 0;
};

/// Evaluations a search over `env`'s configuration would need.
std::size_t exhaustive_cost(const EnvConfig& cfg, const ExhaustiveConfig& ex);

/// Best action on the grid for the environment's current slot. Ties go to
/// the earliest grid point in enumeration order.
ExhaustiveResult exhaustive_search(const Environment& env, const ExhaustiveConfig& ex);

/// Greedy coordinate sweep over a uniform phase codebook that maximises the
/// worst node rate (sum rate breaks ties) with every element reflecting.
std::vector<double> greedy_phases(const Environment& env, const std::vector<double>& power,
                                  std::size_t levels, std::size_t sweeps, std::size_t* evaluations = nullptr);

/// Power tuples on the clip-and-rescale grid used by map_action.
std::vector<std::vector<double>> power_grid(std::size_t nodes, std::size_t points, double p_max);

}  // namespace uavris::rl
