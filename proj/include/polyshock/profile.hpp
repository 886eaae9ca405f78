#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyshock/flux.hpp"

namespace polyshock {

/// Right-continuous piecewise-constant state profile. pieces[0] is the state
/// index on (-inf, breakpoints[0]) and pieces[j] the one on
/// [breakpoints[j-1], breakpoints[j]), with the last piece extending to +inf;
/// the value at a breakpoint is the piece to its right.
struct Profile {
    std::vector<double> breakpoints;  // strictly increasing, may be empty
    std::vector<int> pieces;          // size breakpoints.size()+1, 1-based state indices
};

/// Validates shape and admissibility (upward jumps only to the next state).
Profile make_profile(std::vector<double> breakpoints, std::vector<int> pieces,
                     const PolygonalFlux& flux);

int eval(const Profile& p, double x);
int eval_left(const Profile& p, double x);

/// Sum of |u(x_j) - u(x_j-)| over jumps, in state value units.
double total_variation(const Profile& p, const PolygonalFlux& flux);

/// Exact L1 distance between two profiles over the whole line (finite because
/// both are constant outside bounded windows; raises if tails differ).
double l1_distance(const Profile& a, const Profile& b, const PolygonalFlux& flux);

std::string serialize_profile(const Profile& p);
Profile parse_profile(const std::string& text, const PolygonalFlux& flux);

enum class ProfileKind { deterministic, iid_grid, markov_jump };

/// Seeded generator of admissible random profiles. sample() is a pure
/// function of (model, index).
struct RandomProfileModel {
    ProfileKind kind = ProfileKind::deterministic;
    Profile fixed;                                   // deterministic
    double spacing = 1.0;                            // iid_grid cell width
    double rate = 1.0;                               // markov_jump jump rate
    std::vector<double> weights;                     // cell / initial-state weights
    std::vector<std::vector<double>> transition;     // markov_jump row weights
    double window_lo = 0.0;
    double window_hi = 1.0;
    std::uint64_t seed = 0;
};

Profile sample(const RandomProfileModel& model, const PolygonalFlux& flux, std::uint64_t index);

/// Exact per-cell state marginals implied by the iid_grid draw-then-repair
/// rule, for the first `cells` cells. Test oracle for the sampler.
std::vector<std::vector<double>> iid_grid_cell_marginals(const RandomProfileModel& model,
                                                         int M, int cells);

}  // namespace polyshock
