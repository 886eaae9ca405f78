#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyshock/flux.hpp"
#include "polyshock/profile.hpp"

namespace polyshock {

/// Fully validated run description. Built from the JSON config schema; any
/// real-valued field accepts either a number or an exact ratio string "p/q".
struct RunConfig {
    PolygonalFlux flux;
    RandomProfileModel model;
    double horizon = kInf;
    std::vector<double> times;
    std::vector<double> x_grid;
    double box_width = 0.0;
    int realizations = 1;
    int max_order = 2;
    std::uint64_t seed = 0;
    int workers = 1;
    int crosscheck_points = 1000;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical serialized form; stable bytes for identical configs.
std::string serialize_config(const RunConfig& cfg);

}  // namespace polyshock
