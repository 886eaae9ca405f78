#pragma once

#include <string>
#include <vector>

#include "polyshock/fronttrack.hpp"

namespace polyshock {

/// Middle/partner state sets governing collisions of a species (u, v):
///   w1: middles w such that (u,w)+(w,v) can create (u,v)
///   w2: partners w such that (v,w) destroys (u,v) from the right
///   w3: partners w such that (w,u) destroys (u,v) from the left
struct InteractionSets {
    int u = 0, v = 0;
    std::vector<int> w1, w2, w3;
};

/// Sets per the one-point case split: for v == u+1, w1 is empty, w2 = {w<u},
/// w3 = {w>u+1}; for v < u, w1 = {w<=u+1}, w2 = {w<=v+1}, w3 = {w>=u-1}.
/// All sets exclude u, v and clamp to [1, M].
InteractionSets interaction_sets(const PolygonalFlux& flux, int u, int v);

/// Oracle: enumerate w in [1, M] requiring every involved species to be
/// admissible and the catch-up inequality on the pair speeds to hold.
InteractionSets interaction_sets_bruteforce(const PolygonalFlux& flux, int u, int v);

struct SetDisagreement {
    int u = 0, v = 0, w = 0;
    char which = '?';          // '1', '2', '3'
    bool in_case_split = false;
    bool in_brute = false;
};

/// Case-split vs brute-force comparison over every admissible species.
std::vector<SetDisagreement> compare_interaction_sets(const PolygonalFlux& flux);

/// Each collision (u,w)+(w,v) -> (u,v) plays exactly three hierarchy roles.
struct EventClassification {
    int u = 0, w = 0, v = 0;
    double coefficient = 0.0;  // c_uw - c_wv, strictly positive
};

/// Throws RoleViolation if any membership or positivity check fails.
EventClassification classify_event(const PolygonalFlux& flux, const SpeedTable& speeds,
                                   int u, int w, int v);

/// Smooth compactly supported bump phi(x,t) = b((x-cx)/wx) b((t-ct)/wt) with
/// b(r) = exp(1 - 1/(1-r^2)) on |r| < 1.
struct BumpTestFunction {
    double cx = 0.0, wx = 1.0, ct = 0.0, wt = 1.0;
    double operator()(double x, double t) const;
    double dx(double x, double t) const;
    double dt(double x, double t) const;
};

std::vector<BumpTestFunction> seeded_bumps(double x_lo, double x_hi, double t_lo, double t_hi,
                                           int count, std::uint64_t seed);

struct SpeciesLedger {
    int u = 0, v = 0;
    int births_t0 = 0;
    int created = 0;
    int destroyed = 0;
    int alive_end = 0;
    bool balance_ok = false;
};

struct LedgerReport {
    std::vector<SpeciesLedger> species;
    std::vector<std::string> violations;   // classify_event failures
    double max_balance_residual = 0.0;     // test-function creation/destruction identity
    double max_stream_residual = 0.0;      // free-streaming line integral vs endpoints
    bool all_ok = false;
};

/// Distributional check of the one-point shock equations on one realization:
/// per species, trajectory endpoint sums against classified event sums for
/// each test function, plus the transport integral along every trajectory.
LedgerReport ledger_verify(const FrontSolution& sol,
                           const std::vector<BumpTestFunction>& phis);

struct OverlapInterval {
    double t = 0.0;
    int k = 0;        // tail index pair (k, k+1) in violation
    double x_lo = 0.0;
    double x_hi = 0.0;
};

/// Approach-I transport check on a single realization. residual(t,x,k) =
/// F(x,t,k) - F(x - c_k t, 0, k) with F the exact tail indicator; overlap
/// intervals mark where the transported tails lose monotonicity in k.
struct TransportCheck {
    std::vector<double> speeds;        // c_k
    double first_collision = kInf;
    std::vector<double> times, xs;
    // residuals[ti][xi][k-1], k in [1, M-1]
    std::vector<std::vector<std::vector<double>>> residuals;
    std::vector<OverlapInterval> overlaps;
    double max_abs_residual = 0.0;
    double max_abs_residual_precollision = 0.0;
};

TransportCheck verify_transport(const FrontSolution& sol, const std::vector<double>& times,
                                const std::vector<double>& xs);

/// Tail indicator F(x,t,k) = 1{u(x,t) > u_k} evaluated exactly from a slice.
int tail_indicator(const FrontSolution& sol, double x, double t, int k);

}  // namespace polyshock
