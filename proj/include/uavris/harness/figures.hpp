#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "uavris/harness/config.hpp"

namespace uavris::harness {

/// One ordering or threshold check inside an experiment.
struct Check {
    std::string name;
    bool pass = false;
    std::string detail;  // the numbers behind the verdict, or the violating pair
};

struct ExperimentReport {
    std::string name;
    std::vector<Check> checks;
    std::map<std::string, double> values;  // headline numbers by label
    double wall_seconds = 0.0;

    bool pass() const;
};

struct FigureReport {
    std::vector<ExperimentReport> experiments;
    double wall_seconds = 0.0;

    bool pass() const;
    const Check* find(const std::string& check_name) const;
    /// Fixed-width text table, one line per check.
    std::string table() const;
};

using Progress = std::function<void(const std::string&)>;

/// Runs the protocol/renewable, algorithm and impairment experiments on the
/// given base config (its protocol, seeds and episode count are used) and
/// writes every run under out_dir.
FigureReport reproduce_figures(const ExperimentConfig& base, const std::filesystem::path& out_dir,
                               const Progress& progress = {});

}  // namespace uavris::harness
