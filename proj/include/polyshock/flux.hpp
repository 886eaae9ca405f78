#pragma once

#include <vector>

#include "polyshock/common.hpp"

namespace polyshock {

/// Convex piecewise-linear flux defined by its values f_i at the ordered
/// states u_1 < ... < u_M. State indices are 1-based throughout the library.
struct PolygonalFlux {
    std::vector<double> states;           // u_i, strictly increasing
    std::vector<double> values;           // f(u_i)
    std::vector<double> neighbor_slopes;  // c_k = (f_{k+1}-f_k)/(u_{k+1}-u_k), strictly increasing

    int num_states() const { return static_cast<int>(states.size()); }
    double state(int i) const { return states[static_cast<std::size_t>(i - 1)]; }
    double value(int i) const { return values[static_cast<std::size_t>(i - 1)]; }
    // segment slope c_k, k in [1, M-1]
    double slope(int k) const { return neighbor_slopes[static_cast<std::size_t>(k - 1)]; }
    double lipschitz() const;  // max_k |c_k|
    bool valid_index(int i) const { return i >= 1 && i <= num_states(); }
};

PolygonalFlux build_flux(std::vector<double> states, std::vector<double> values);

/// Rankine-Hugoniot speed (f_i - f_j)/(u_i - u_j); exactly symmetric in (i, j).
double rh_speed(const PolygonalFlux& flux, int i, int j);

/// All pairwise speeds c_{uv}, computed once per flux. The matrix is filled
/// from i < j and mirrored, so symmetry holds bit-exactly.
struct SpeedTable {
    int M = 0;
    std::vector<double> c;  // M x M, diagonal unused
    double speed(int i, int j) const { return c[static_cast<std::size_t>((i - 1) * M + (j - 1))]; }
};

SpeedTable build_speed_table(const PolygonalFlux& flux);

/// f*(q) = max_i (q*u_i - f_i). Piecewise linear with kinks at the neighbor
/// slopes c_k and slopes in the state set.
struct LegendreTransform {
    std::vector<double> breakpoints;   // the c_k, ascending
    std::vector<double> node_values;   // f*(c_k)
    double slope_lo = 0.0;             // u_1
    double slope_hi = 0.0;             // u_M
    std::vector<double> states;        // copies for evaluation
    std::vector<double> flux_values;

    double value(double q) const;
    /// 1-based indices attaining the max at q, within kTol of it.
    std::vector<int> attaining(double q) const;
};

LegendreTransform legendre(const PolygonalFlux& flux);

/// v < u (downward) or v == u+1 (nearest-neighbor upward).
inline bool admissible_jump(int u, int v) { return v < u || v == u + 1; }

}  // namespace polyshock
