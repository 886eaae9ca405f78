#include <cmath>

#include "doctest.h"
#include "polyshock/fronttrack.hpp"
#include "test_util.hpp"

using namespace polyshock;
using testutil::example1_flux;
using testutil::example1_profile;

TEST_CASE("Example 1: one collision at t=1/4, x=9/4 merging (3,2)+(2,1) into (3,1)") {
    PolygonalFlux f = example1_flux();
    FrontSolution sol = solve(f, example1_profile(f));
    REQUIRE(sol.events.size() == 1);
    const CollisionEvent& ev = sol.events[0];
    CHECK(std::fabs(ev.time - 0.25) < 1e-12);
    CHECK(std::fabs(ev.pos - 2.25) < 1e-12);
    CHECK(ev.u == 3);
    CHECK(ev.w == 2);
    CHECK(ev.v == 1);
    CHECK(sol.fronts[static_cast<std::size_t>(ev.created_id)].speed == 3.0);
    CHECK_FALSE(ev.triple);
}

TEST_CASE("single front persists; slower-left pair never meets") {
    PolygonalFlux f = example1_flux();
    FrontSolution one = solve(f, make_profile({0}, {2, 1}, f));
    CHECK(one.events.empty());
    CHECK(one.alive_ids(100.0).size() == 1);

    // (1,2) then (2,3): speeds c_1 < c_2, gap grows
    FrontSolution two = solve(f, make_profile({0, 1}, {1, 2, 3}, f));
    CHECK(two.events.empty());
    CHECK(two.alive_ids(50.0).size() == 2);
}

TEST_CASE("next_collision picks the earliest pair") {
    PolygonalFlux f = example1_flux();
    FrontSolution sol = solve(f, example1_profile(f), 0.1);  // before the event
    auto nc = next_collision(sol.fronts, sol.alive_ids(0.0), 0.0);
    REQUIRE(nc.has_value());
    CHECK(std::fabs(nc->time - 0.25) < 1e-12);
    CHECK(nc->left_id == 0);
    CHECK(nc->right_id == 1);

    // four states, three fronts, right pair meets first:
    // speeds (4,3)=c_3, (3,2)=c_2, (2,1)=c_1 with gaps tuned so that the
    // right pair's meeting precedes the left pair's.
    PolygonalFlux g = build_flux({1, 2, 3, 4}, {0, 0, 1, 3});  // slopes 0,1,2
    Profile p = make_profile({0, 10, 10.5}, {4, 3, 2, 1}, g);
    FrontSolution s2 = solve(g, p);
    // left pair gap 10, closing speed 1 -> t=10; right pair gap 0.5, closing 1 -> t=0.5
    auto nc2 = next_collision(s2.fronts, {0, 1, 2}, 0.0);
    REQUIRE(nc2.has_value());
    CHECK(std::fabs(nc2->time - 0.5) < 1e-12);
    CHECK(nc2->left_id == 1);
    CHECK(nc2->right_id == 2);
}

TEST_CASE("equal-speed adjacent fronts never meet") {
    PolygonalFlux f = example1_flux();
    // (1,2) and (2,1) both travel at c_1
    FrontSolution sol = solve(f, make_profile({0, 1}, {1, 2, 1}, f));
    CHECK(sol.events.empty());
    auto nc = next_collision(sol.fronts, sol.alive_ids(0.0), 0.0);
    CHECK_FALSE(nc.has_value());
}

TEST_CASE("query matches the Example-1 solution bands") {
    PolygonalFlux f = example1_flux();
    FrontSolution sol = solve(f, example1_profile(f));
    CHECK(sol.query(2.0, 0.1) == 2);  // fronts at 1.5 and 2.1
    CHECK(sol.query(1.0, 0.1) == 3);
    CHECK(sol.query(3.0, 0.1) == 1);
    // merged shock at x = 9/4 + 3 (t - 1/4); at t=0.5 it sits at 3.0
    CHECK(sol.query(3.0, 0.5) == 1);       // right-continuous on the shock
    CHECK(sol.query_left(3.0, 0.5) == 3);
    // t = 0 reproduces the data everywhere
    for (double x : {-1.0, 0.5, 1.0, 1.5, 2.0, 2.5, 7.0}) {
        CHECK(sol.query(x, 0.0) == eval(sol.initial, x));
        CHECK(sol.query_left(x, 0.0) == eval_left(sol.initial, x));
    }
}

TEST_CASE("slice reproduces the data at t=0 and the merged state after") {
    PolygonalFlux f = example1_flux();
    FrontSolution sol = solve(f, example1_profile(f));
    Profile s0 = sol.slice(0.0);
    CHECK(s0.breakpoints == sol.initial.breakpoints);
    CHECK(s0.pieces == sol.initial.pieces);

    Profile s = sol.slice(0.5);
    REQUIRE(s.breakpoints.size() == 1);
    CHECK(std::fabs(s.breakpoints[0] - 3.0) < 1e-12);
    CHECK(s.pieces == std::vector<int>{3, 1});

    CHECK_THROWS_AS(solve(f, example1_profile(f), 0.1).slice(0.2), Error);
}

TEST_CASE("semigroup property: re-solving from a slice matches the original") {
    Rng rng(40100);
    for (int trial = 0; trial < 30; ++trial) {
        PolygonalFlux f = testutil::random_flux(rng, rng.uniform_int(2, 5));
        Profile p0 = testutil::random_profile(rng, f, 8, -2.0, 2.0);
        FrontSolution sol = solve(f, p0);
        double t = rng.uniform(0.05, 1.0);
        double s = rng.uniform(0.05, 1.0);
        FrontSolution restarted = solve(f, sol.slice(t));
        for (int q = 0; q < 200; ++q) {
            double x = rng.uniform(-6.0, 6.0);
            if (testutil::min_front_distance(sol, x, t + s) < 1e-9) continue;
            CHECK(sol.query(x, t + s) == restarted.query(x, s));
        }
    }
}

TEST_CASE("slices stay admissible and TV never grows; L1 is Lipschitz in time") {
    Rng rng(40200);
    for (int trial = 0; trial < 50; ++trial) {
        PolygonalFlux f = testutil::random_flux(rng, rng.uniform_int(2, 6));
        Profile p0 = testutil::random_profile(rng, f, 10, -3.0, 3.0);
        FrontSolution sol = solve(f, p0);
        double tv_prev = total_variation(p0, f);
        Profile prev = p0;
        double t_prev = 0.0;
        std::vector<double> ts = {0.1, 0.33, 0.7, 1.5, 4.0};
        for (double ev_t : ts) {
            Profile cut = sol.slice(ev_t);  // make_profile validates admissibility
            double tv = total_variation(cut, f);
            CHECK(tv <= tv_prev + 1e-12);
            double l1 = l1_distance(cut, prev, f);
            CHECK(l1 <= f.lipschitz() * total_variation(p0, f) * (ev_t - t_prev) + 1e-9);
            tv_prev = tv;
            prev = cut;
            t_prev = ev_t;
        }
        // every event removes exactly one front
        CHECK(static_cast<int>(sol.events.size()) ==
              static_cast<int>(p0.breakpoints.size()) - sol.alive_count_at_horizon());
    }
}

TEST_CASE("triple coincidence resolves leftmost-first and flags the events") {
    // slopes 0,1,2: fronts (4,3) speed 2 from x=0, (3,2) speed 1 from x=1,
    // (2,1) speed 0 from x=2 all meet at (t,x)=(1,2)
    PolygonalFlux g = build_flux({1, 2, 3, 4}, {0, 0, 1, 3});
    Profile p = make_profile({0, 1, 2}, {4, 3, 2, 1}, g);
    FrontSolution sol = solve(g, p);
    REQUIRE(sol.events.size() == 2);
    for (const CollisionEvent& ev : sol.events) {
        CHECK(std::fabs(ev.time - 1.0) < 1e-12);
        CHECK(std::fabs(ev.pos - 2.0) < 1e-12);
        CHECK(ev.triple);
    }
    CHECK(sol.events[0].u == 4);
    CHECK(sol.events[0].w == 3);
    CHECK(sol.events[0].v == 2);
    CHECK(sol.events[1].u == 4);
    CHECK(sol.events[1].w == 2);
    CHECK(sol.events[1].v == 1);
    std::vector<int> alive = sol.alive_ids(2.0);
    REQUIRE(alive.size() == 1);
    CHECK(sol.fronts[static_cast<std::size_t>(alive[0])].left == 4);
    CHECK(sol.fronts[static_cast<std::size_t>(alive[0])].right == 1);
}

TEST_CASE("k-fold simultaneous collisions resolve deterministically") {
    // M-1 staircase fronts engineered to meet at (t,x) = (1,0) exactly
    for (int M : {3, 4, 5, 6}) {
        std::vector<double> states, values;
        for (int i = 0; i < M; ++i) states.push_back(i + 1);
        values.push_back(0.0);
        for (int k = 0; k + 1 < M; ++k) values.push_back(values.back() + k);  // slopes 0..M-2
        PolygonalFlux f = build_flux(states, values);

        std::vector<double> bps;
        std::vector<int> pieces{M};
        for (int j = 1; j < M; ++j) {
            double speed = f.slope(M - j);  // species (M-j+1, M-j)
            bps.push_back(0.0 - speed * 1.0);
            pieces.push_back(M - j);
        }
        FrontSolution sol = solve(f, make_profile(bps, pieces, f));
        REQUIRE(static_cast<int>(sol.events.size()) == M - 2);
        for (const CollisionEvent& ev : sol.events) {
            CHECK(std::fabs(ev.time - 1.0) <= 1e-12);
            CHECK(std::fabs(ev.pos - 0.0) <= 1e-12);
            CHECK(ev.triple == (M > 3));  // two fronts alone are a plain collision
        }
        std::vector<int> alive = sol.alive_ids(2.0);
        REQUIRE(alive.size() == 1);
        CHECK(sol.fronts[static_cast<std::size_t>(alive[0])].left == M);
        CHECK(sol.fronts[static_cast<std::size_t>(alive[0])].right == 1);
        CHECK_NOTHROW(sol.slice(1.0));
        CHECK_NOTHROW(sol.slice(1.0 + 1e-9));
    }
}

TEST_CASE("horizon bounds queries") {
    PolygonalFlux f = example1_flux();
    FrontSolution sol = solve(f, example1_profile(f), 2.0);
    CHECK_NOTHROW(sol.query(0.0, 2.0));
    CHECK_THROWS_AS(sol.query(0.0, 2.5), Error);
    CHECK_THROWS_AS(sol.query(0.0, -0.1), Error);
}
