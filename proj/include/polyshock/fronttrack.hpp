#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "polyshock/flux.hpp"
#include "polyshock/profile.hpp"

namespace polyshock {

/// A shock/contact front: jump from left state u to right state v travelling
/// at the Rankine-Hugoniot speed of the pair.
struct Front {
    int id = -1;
    double birth_time = 0.0;
    double birth_pos = 0.0;
    double speed = 0.0;
    int left = 0;   // u
    int right = 0;  // v
    double death_time = kInf;

    double position(double t) const { return birth_pos + speed * (t - birth_time); }
    bool alive_at(double t) const { return birth_time <= t && t < death_time; }
};

struct CollisionEvent {
    double time = 0.0;
    double pos = 0.0;
    int left_id = -1;
    int right_id = -1;
    int created_id = -1;
    int u = 0, w = 0, v = 0;  // species triple: (u,w) + (w,v) -> (u,v)
    bool triple = false;      // resolved within a triple-coincidence
};

struct NextCollision {
    double time = 0.0;
    int left_id = -1;
    int right_id = -1;
};

/// Earliest meeting of adjacent fronts in `alive` (ordered by position at
/// `now`); ties broken by leftmost position then lowest id. nullopt when no
/// adjacent pair satisfies the catch-up condition c_left > c_right.
std::optional<NextCollision> next_collision(const std::vector<Front>& fronts,
                                            const std::vector<int>& alive, double now);

/// Exact entropy solution of one realization: all front trajectories plus the
/// chronological collision log.
struct FrontSolution {
    PolygonalFlux flux;
    SpeedTable speeds;
    Profile initial;
    std::vector<Front> fronts;          // id == index; dead and alive
    std::vector<CollisionEvent> events; // chronological
    double horizon = kInf;

    std::vector<int> alive_ids(double t) const;  // ordered by position at t
    int query(double x, double t) const;         // right-continuous
    int query_left(double x, double t) const;
    Profile slice(double t) const;
    double first_event_time() const { return events.empty() ? kInf : events.front().time; }
    int alive_count_at_horizon() const;
};

/// horizon = kInf runs to quiescence (finitely many events).
FrontSolution solve(const PolygonalFlux& flux, const Profile& initial, double horizon = kInf);

}  // namespace polyshock
