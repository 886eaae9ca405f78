#pragma once

#include <vector>

#include "polyshock/flux.hpp"
#include "polyshock/profile.hpp"

namespace polyshock {

/// Variational (Hopf-Lax) form of the same initial-value problem the front
/// tracker solves: u(x,t) is read off the largest minimizer of
///   I(p) = G(p) + t f*((x-p)/t),  G(p) = integral of the data from 0 to p.
/// I is piecewise linear in p, so the minimum over the line is attained on
/// the finite candidate set {data breakpoints} U {x - c_k t} U window edges,
/// extended by one sentinel on each side to capture flat tails exactly.
class VariationalProblem {
  public:
    VariationalProblem(PolygonalFlux flux, Profile data, double window_lo, double window_hi);

    /// G(p): continuous piecewise-linear with slopes in the state set.
    double integrated_data(double p) const;

    /// I(p, x, t); requires t > 0.
    double functional(double p, double x, double t) const;

    /// Largest minimizer of I over the candidate set. On a flat tail at the
    /// minimum this returns the largest finite kink of the tail, which keeps
    /// the value inside the data window for in-window queries.
    double inverse_lagrangian(double x, double t) const;

    /// Entropy solution at (x, t), resolved right-continuously: with
    /// s = (x-a)/t, state u_k for s strictly inside (c_{k-1}, c_k); when s
    /// lands on a chord slope c_k the consistent choice is the state above it.
    int query(double x, double t) const;

    const PolygonalFlux& flux() const { return flux_; }
    const Profile& data() const { return data_; }
    double window_lo() const { return window_lo_; }
    double window_hi() const { return window_hi_; }

  private:
    struct Candidate {
        double p;
        int kink = -1;      // k when p == x - c_k t, else -1
        bool sentinel = false;
    };
    struct Argmin {
        double a;           // largest non-sentinel minimizer
        double value;
        int state;
    };
    Argmin minimize(double x, double t) const;

    PolygonalFlux flux_;
    LegendreTransform lt_;
    Profile data_;
    double window_lo_, window_hi_;
    std::vector<double> g_at_bp_;  // G at each data breakpoint
};

}  // namespace polyshock
