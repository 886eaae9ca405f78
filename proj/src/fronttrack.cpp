#include "polyshock/fronttrack.hpp"

#include <algorithm>
#include <cmath>

namespace polyshock {

std::optional<NextCollision> next_collision(const std::vector<Front>& fronts,
                                            const std::vector<int>& alive, double now) {
    std::optional<NextCollision> best;
    double best_pos = 0.0;
    for (std::size_t i = 0; i + 1 < alive.size(); ++i) {
        const Front& L = fronts[static_cast<std::size_t>(alive[i])];
        const Front& R = fronts[static_cast<std::size_t>(alive[i + 1])];
        double rel = L.speed - R.speed;
        if (!(rel > 0.0)) continue;  // never catches up; equal speeds never meet
        double gap = R.position(now) - L.position(now);
        if (gap < 0.0) gap = 0.0;  // rounding guard at coincidence instants
        double t_meet = now + gap / rel;
        double x_meet = L.position(t_meet);
        if (!best || t_meet < best->time - kTol ||
            (t_meet <= best->time + kTol && x_meet < best_pos - kTol) ||
            (t_meet <= best->time + kTol && std::fabs(x_meet - best_pos) <= kTol &&
             alive[i] < best->left_id)) {
            best = NextCollision{t_meet, alive[i], alive[i + 1]};
            best_pos = x_meet;
        }
    }
    return best;
}

FrontSolution solve(const PolygonalFlux& flux, const Profile& initial, double horizon) {
    if (!(horizon > 0.0)) raise(Errc::validation_error, "horizon must be positive");
    FrontSolution sol;
    sol.flux = flux;
    sol.speeds = build_speed_table(flux);
    sol.initial = initial;
    sol.horizon = horizon;

    std::vector<int> alive;  // ids ordered by position
    for (std::size_t j = 0; j < initial.breakpoints.size(); ++j) {
        Front f;
        f.id = static_cast<int>(j);
        f.birth_time = 0.0;
        f.birth_pos = initial.breakpoints[j];
        f.left = initial.pieces[j];
        f.right = initial.pieces[j + 1];
        f.speed = sol.speeds.speed(f.left, f.right);
        sol.fronts.push_back(f);
        alive.push_back(f.id);
    }

    double now = 0.0;
    while (true) {
        auto next = next_collision(sol.fronts, alive, now);
        if (!next || next->time > horizon) break;

        Front& L = sol.fronts[static_cast<std::size_t>(next->left_id)];
        Front& R = sol.fronts[static_cast<std::size_t>(next->right_id)];
        double t_e = next->time;
        double x_e = L.position(t_e);
        int u = L.left, w = L.right, v = R.right;
        if (w != R.left)
            raise(Errc::inadmissible_merge_internal, "adjacent fronts lost their shared state");
        if (!admissible_jump(u, v))
            raise(Errc::inadmissible_merge_internal, "merge produced a forbidden upward jump");

        // Triple coincidence: a third front within tolerance of the same
        // point, or a zero-gap merge chained onto the previous event.
        bool triple = false;
        auto pos_of = [&](int id) { return sol.fronts[static_cast<std::size_t>(id)].position(t_e); };
        for (std::size_t i = 0; i < alive.size(); ++i) {
            int id = alive[i];
            if (id == next->left_id || id == next->right_id) continue;
            if (std::fabs(pos_of(id) - x_e) <= kTol) { triple = true; break; }
        }
        if (!sol.events.empty() && std::fabs(sol.events.back().time - t_e) <= kTol &&
            std::fabs(sol.events.back().pos - x_e) <= kTol)
            triple = true;

        L.death_time = t_e;
        R.death_time = t_e;
        Front created;
        created.id = static_cast<int>(sol.fronts.size());
        created.birth_time = t_e;
        created.birth_pos = x_e;
        created.left = u;
        created.right = v;
        created.speed = sol.speeds.speed(u, v);
        sol.fronts.push_back(created);

        CollisionEvent ev;
        ev.time = t_e;
        ev.pos = x_e;
        ev.left_id = next->left_id;
        ev.right_id = next->right_id;
        ev.created_id = created.id;
        ev.u = u;
        ev.w = w;
        ev.v = v;
        ev.triple = triple;
        sol.events.push_back(ev);

        auto it = std::find(alive.begin(), alive.end(), next->left_id);
        *it = created.id;
        alive.erase(it + 1);
        now = t_e;
    }
    return sol;
}

std::vector<int> FrontSolution::alive_ids(double t) const {
    std::vector<int> ids;
    for (const Front& f : fronts)
        if (f.alive_at(t)) ids.push_back(f.id);
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
        return fronts[static_cast<std::size_t>(a)].position(t) <
               fronts[static_cast<std::size_t>(b)].position(t);
    });
    return ids;
}

int FrontSolution::alive_count_at_horizon() const {
    int n = 0;
    for (const Front& f : fronts)
        if (f.death_time > horizon || f.death_time == kInf) ++n;
    return n;
}

namespace {

void check_time(double t, double horizon) {
    if (t < 0.0 || t > horizon) raise(Errc::out_of_horizon, "t=" + format_double(t));
}

}  // namespace

int FrontSolution::query(double x, double t) const {
    check_time(t, horizon);
    std::vector<int> ids = alive_ids(t);
    if (ids.empty()) return initial.pieces.front();
    // value is the right state of the last front at position <= x
    int state = fronts[static_cast<std::size_t>(ids.front())].left;
    for (int id : ids) {
        const Front& f = fronts[static_cast<std::size_t>(id)];
        if (f.position(t) <= x) state = f.right;
    }
    return state;
}

int FrontSolution::query_left(double x, double t) const {
    check_time(t, horizon);
    std::vector<int> ids = alive_ids(t);
    if (ids.empty()) return initial.pieces.front();
    int state = fronts[static_cast<std::size_t>(ids.front())].left;
    for (int id : ids) {
        const Front& f = fronts[static_cast<std::size_t>(id)];
        if (f.position(t) < x) state = f.right;
    }
    return state;
}

Profile FrontSolution::slice(double t) const {
    check_time(t, horizon);
    std::vector<int> ids = alive_ids(t);
    std::vector<double> bps;
    std::vector<int> pieces;
    if (ids.empty()) {
        pieces.push_back(initial.pieces.front());
        return make_profile(std::move(bps), std::move(pieces), flux);
    }
    pieces.push_back(fronts[static_cast<std::size_t>(ids.front())].left);
    for (int id : ids) {
        const Front& f = fronts[static_cast<std::size_t>(id)];
        bps.push_back(f.position(t));
        pieces.push_back(f.right);
    }
    return make_profile(std::move(bps), std::move(pieces), flux);
}

}  // namespace polyshock
