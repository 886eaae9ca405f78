#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "polyshock/fronttrack.hpp"
#include "polyshock/rng.hpp"

namespace polyshock::testutil {

// Example-1 setup used across suites: flux values (2,3,8) at states (1,2,3),
// data (3,2,1) with breakpoints (1,2). Single collision at t=1/4, x=9/4.
inline PolygonalFlux example1_flux() { return build_flux({1, 2, 3}, {2, 3, 8}); }

inline Profile example1_profile(const PolygonalFlux& flux) {
    return make_profile({1, 2}, {3, 2, 1}, flux);
}

// Random strictly convex polygonal flux with M states; speeds may be of
// either sign.
inline PolygonalFlux random_flux(Rng& rng, int M) {
    std::vector<double> states, values;
    double u = rng.uniform(-3.0, 0.0);
    for (int i = 0; i < M; ++i) {
        states.push_back(u);
        u += rng.uniform(0.3, 1.2);
    }
    double slope = rng.uniform(-3.0, 0.0);
    double f = rng.uniform(-1.0, 1.0);
    values.push_back(f);
    for (int i = 0; i + 1 < M; ++i) {
        slope += rng.uniform(0.25, 1.5);
        f += slope * (states[static_cast<std::size_t>(i + 1)] - states[static_cast<std::size_t>(i)]);
        values.push_back(f);
    }
    return build_flux(std::move(states), std::move(values));
}

// Random admissible profile with at most `max_jumps` jumps inside [lo, hi].
inline Profile random_profile(Rng& rng, const PolygonalFlux& flux, int max_jumps, double lo,
                              double hi) {
    const int M = flux.num_states();
    int jumps = rng.uniform_int(1, max_jumps);
    std::vector<double> bps;
    for (int j = 0; j < jumps; ++j) bps.push_back(rng.uniform(lo, hi));
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    std::vector<int> pieces;
    pieces.push_back(rng.uniform_int(1, M));
    for (std::size_t j = 0; j < bps.size(); ++j) {
        int cur = pieces.back();
        std::vector<int> choices;
        for (int v = 1; v < cur; ++v) choices.push_back(v);
        if (cur + 1 <= M) choices.push_back(cur + 1);
        if (choices.empty()) {  // cur == 1 and M == 1 cannot happen (M >= 2)
            choices.push_back(cur + 1);
        }
        pieces.push_back(choices[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(choices.size()) - 1))]);
    }
    return make_profile(std::move(bps), std::move(pieces), flux);
}

// Staircase data: every jump is between neighboring states (unit steps both
// directions). This is the regime in which per-level transport is exact
// before the first collision.
inline Profile random_staircase_profile(Rng& rng, const PolygonalFlux& flux, int max_jumps,
                                        double lo, double hi) {
    const int M = flux.num_states();
    int jumps = rng.uniform_int(1, max_jumps);
    std::vector<double> bps;
    for (int j = 0; j < jumps; ++j) bps.push_back(rng.uniform(lo, hi));
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    std::vector<int> pieces;
    pieces.push_back(rng.uniform_int(1, M));
    for (std::size_t j = 0; j < bps.size(); ++j) {
        int cur = pieces.back();
        int next;
        if (cur == 1)
            next = 2;
        else if (cur == M)
            next = M - 1;
        else
            next = rng.uniform() < 0.5 ? cur - 1 : cur + 1;
        pieces.push_back(next);
    }
    return make_profile(std::move(bps), std::move(pieces), flux);
}

inline double min_front_distance(const FrontSolution& sol, double x, double t) {
    double d = kInf;
    for (int id : sol.alive_ids(t)) {
        const Front& f = sol.fronts[static_cast<std::size_t>(id)];
        d = std::min(d, std::fabs(f.position(t) - x));
    }
    return d;
}

}  // namespace polyshock::testutil
