#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polyshock/fronttrack.hpp"
#include "polyshock/profile.hpp"

namespace polyshock {

struct EnsembleSpec {
    RandomProfileModel model;
    int realizations = 1;
    std::vector<double> times;
    std::vector<double> x_grid;
    int max_order = 1;       // 1 or 2
    double box_width = 0.0;  // shock box width; defaults to the grid spacing
};

/// Empirical point-value statistics: counts of observed states at grid
/// points (and at grid-point pairs when max_order == 2). Counts are plain
/// integers, so merged estimates are bit-identical regardless of order.
struct PointEstimate {
    int M = 0;
    int max_order = 1;
    std::vector<double> times, grid;
    std::uint64_t N = 0;
    std::vector<std::uint64_t> c1;  // [t][x][k]
    std::vector<std::uint64_t> c2;  // [t][pair i<j][k1][k2]

    std::uint64_t& count1(int ti, int xi, int k);
    std::uint64_t count1(int ti, int xi, int k) const;
    std::uint64_t& count2(int ti, int xi, int xj, int ki, int kj);
    std::uint64_t count2(int ti, int xi, int xj, int ki, int kj) const;
    void merge(const PointEstimate& other);
};

/// Empirical shock-species statistics over boxes [x_i, x_i + width).
/// front_counts tallies every front; outcome tallies classify each box per
/// realization as empty / exactly one front of species s / multiple, which
/// makes the pair-marginalization identity exact at the counting level.
struct ShockEstimate {
    int M = 0;
    std::vector<double> times, grid;
    double width = 0.0;
    std::uint64_t N = 0;
    std::vector<std::uint64_t> front_counts;  // [t][box][species]
    std::vector<std::uint64_t> pair_counts;   // [t][box pair i<j][s1][s2], distinct fronts
    std::vector<std::uint64_t> outcome1;      // [t][box][outcome]
    std::vector<std::uint64_t> outcome2;      // [t][box pair i<j][o1][o2]
    std::vector<std::uint64_t> coincident;    // [t][width idx 0..2][s1][s2]

    int species_id(int u, int v) const { return (u - 1) * M + (v - 1); }
    int num_species() const { return M * M; }
    int num_outcomes() const { return M * M + 2; }  // 0 empty, 1..M^2 species, last multi
    void merge(const ShockEstimate& other);
};

struct EventRecord {
    std::uint64_t realization = 0;
    CollisionEvent event;
};

struct EnsembleResult {
    PointEstimate points;
    ShockEstimate shocks;
    std::vector<EventRecord> events;
    void merge(const EnsembleResult& other);
};

/// Realization i uses sample(model, first_index + i). Deterministic for a
/// fixed spec regardless of `workers`.
EnsembleResult run_ensemble(const EnsembleSpec& spec, const PolygonalFlux& flux,
                            int workers = 1, std::uint64_t first_index = 0);

/// Empirical joint tail P{u(x_i, t) >= u_{k_i + 1} for all i}; supports one
/// or two positions.
double estimate_F(const PointEstimate& pe, double t, std::span<const double> xs,
                  std::span<const int> ks);

/// Expected number of (u,v)-fronts per realization in the stored box
/// [box_lo, box_lo + width).
double estimate_shock_density(const ShockEstimate& se, int u, int v, double t,
                              double box_lo, double box_hi);

struct CompatibilityReport {
    bool marginals_exact = false;
    std::uint64_t max_marginal_gap = 0;
    std::vector<double> coincidence_mass;  // per width, unequal-species ordered pairs / N
    bool coincidence_monotone = false;
    bool ok() const { return marginals_exact && coincidence_monotone; }
};

CompatibilityReport check_compatibility(const ShockEstimate& se);

}  // namespace polyshock
