#include <array>
#include <cmath>

#include "doctest.h"
#include "polyshock/profile.hpp"
#include "test_util.hpp"

using namespace polyshock;
using testutil::example1_flux;

TEST_CASE("make_profile accepts Example-1 data and nearest-neighbor up-jumps") {
    PolygonalFlux f = example1_flux();
    Profile p = make_profile({1, 2}, {3, 2, 1}, f);
    CHECK(p.pieces.size() == 3);
    CHECK_NOTHROW(make_profile({0}, {1, 2}, f));
}

TEST_CASE("make_profile rejects invalid shapes") {
    PolygonalFlux f = example1_flux();
    try {
        make_profile({0}, {1, 3}, f);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::inadmissible_up_jump);
    }
    try {
        make_profile({2, 1}, {3, 2, 1}, f);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::non_increasing_breakpoints);
    }
    try {
        make_profile({0}, {2, 2}, f);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::redundant_piece);
    }
}

TEST_CASE("eval is right-continuous; eval_left is the left limit") {
    PolygonalFlux f = example1_flux();
    Profile p = make_profile({1, 2}, {3, 2, 1}, f);
    CHECK(eval(p, 1.0) == 2);
    CHECK(eval_left(p, 1.0) == 3);
    CHECK(eval(p, 1.5) == eval_left(p, 1.5));
    CHECK(eval(p, 0.0) == 3);
    CHECK(eval_left(p, -10.0) == 3);
    CHECK(eval(p, 5.0) == 1);
}

TEST_CASE("total variation in state value units") {
    PolygonalFlux f = example1_flux();
    Profile p = make_profile({1, 2}, {3, 2, 1}, f);
    CHECK(total_variation(p, f) == 2.0);
    Profile up = make_profile({0, 1}, {1, 2, 1}, f);
    CHECK(total_variation(up, f) == 2.0);
}

TEST_CASE("serialize -> parse -> serialize is byte-identical") {
    PolygonalFlux f = example1_flux();
    Rng rng(88331);
    for (int trial = 0; trial < 50; ++trial) {
        Profile p = testutil::random_profile(rng, f, 8, -2.0, 2.0);
        std::string s1 = serialize_profile(p);
        Profile q = parse_profile(s1, f);
        CHECK(serialize_profile(q) == s1);
    }
}

TEST_CASE("deterministic model returns the configured profile for every index") {
    PolygonalFlux f = example1_flux();
    RandomProfileModel model;
    model.kind = ProfileKind::deterministic;
    model.fixed = make_profile({1, 2}, {3, 2, 1}, f);
    for (std::uint64_t i : {0ull, 1ull, 77ull})
        CHECK(serialize_profile(sample(model, f, i)) == serialize_profile(model.fixed));
}

TEST_CASE("sampling is a pure function of (seed, index)") {
    PolygonalFlux f = example1_flux();
    RandomProfileModel model;
    model.kind = ProfileKind::iid_grid;
    model.spacing = 0.25;
    model.weights = {0.5, 0.3, 0.2};
    model.window_lo = 0.0;
    model.window_hi = 3.0;
    model.seed = 424242;
    for (std::uint64_t i = 0; i < 20; ++i)
        CHECK(serialize_profile(sample(model, f, i)) == serialize_profile(sample(model, f, i)));

    RandomProfileModel other = model;
    other.seed = 424243;
    bool any_different = false;
    for (std::uint64_t i = 0; i < 20; ++i)
        any_different = any_different ||
                        serialize_profile(sample(model, f, i)) != serialize_profile(sample(other, f, i));
    CHECK(any_different);
}

TEST_CASE("every sampled profile is admissible, all kinds") {
    Rng flux_rng(5);
    PolygonalFlux f = testutil::random_flux(flux_rng, 4);
    RandomProfileModel grid;
    grid.kind = ProfileKind::iid_grid;
    grid.spacing = 0.5;
    grid.weights = {0.4, 0.3, 0.2, 0.1};
    grid.window_lo = -2.0;
    grid.window_hi = 2.0;
    grid.seed = 99;

    RandomProfileModel markov;
    markov.kind = ProfileKind::markov_jump;
    markov.rate = 2.0;
    markov.transition = {{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}};
    markov.window_lo = -2.0;
    markov.window_hi = 2.0;
    markov.seed = 99;

    for (std::uint64_t i = 0; i < 5000; ++i) {
        CHECK_NOTHROW(sample(grid, f, i));    // make_profile revalidates inside
        CHECK_NOTHROW(sample(markov, f, i));
    }
}

TEST_CASE("iid_grid M=2 cell frequencies match the configured weights within 3 sigma") {
    // with two states every draw is admissible, so the configured weights are
    // the exact marginal
    PolygonalFlux f = build_flux({0, 1}, {0, 1});
    RandomProfileModel model;
    model.kind = ProfileKind::iid_grid;
    model.spacing = 1.0;
    model.weights = {0.7, 0.3};
    model.window_lo = 0.0;
    model.window_hi = 4.0;
    model.seed = 31337;

    const int N = 10000;
    std::array<std::array<int, 2>, 4> counts{};
    for (int i = 0; i < N; ++i) {
        Profile p = sample(model, f, static_cast<std::uint64_t>(i));
        for (int cell = 0; cell < 4; ++cell)
            counts[static_cast<std::size_t>(cell)]
                  [static_cast<std::size_t>(eval(p, 0.5 + cell) - 1)] += 1;
    }
    for (int cell = 0; cell < 4; ++cell) {
        double phat = counts[static_cast<std::size_t>(cell)][0] / static_cast<double>(N);
        double sigma = std::sqrt(0.7 * 0.3 / N);
        CHECK(std::fabs(phat - 0.7) < 3 * sigma);
    }
}

TEST_CASE("iid_grid M=3 cell frequencies match the repaired-chain marginals within 3 sigma") {
    PolygonalFlux f = example1_flux();
    RandomProfileModel model;
    model.kind = ProfileKind::iid_grid;
    model.spacing = 1.0;
    model.weights = {1.0, 1.0, 1.0};
    model.window_lo = 0.0;
    model.window_hi = 5.0;
    model.seed = 1234;

    const int N = 10000;
    const int cells = 5;
    std::vector<std::vector<int>> counts(cells, std::vector<int>(3, 0));
    for (int i = 0; i < N; ++i) {
        Profile p = sample(model, f, static_cast<std::uint64_t>(i));
        for (int cell = 0; cell < cells; ++cell)
            counts[static_cast<std::size_t>(cell)]
                  [static_cast<std::size_t>(eval(p, 0.5 + cell) - 1)] += 1;
    }
    std::vector<std::vector<double>> expected = iid_grid_cell_marginals(model, 3, cells);
    for (int cell = 0; cell < cells; ++cell)
        for (int k = 0; k < 3; ++k) {
            double p = expected[static_cast<std::size_t>(cell)][static_cast<std::size_t>(k)];
            double phat =
                counts[static_cast<std::size_t>(cell)][static_cast<std::size_t>(k)] /
                static_cast<double>(N);
            double sigma = std::sqrt(p * (1 - p) / N);
            CHECK(std::fabs(phat - p) < 3 * sigma + 1e-12);
        }
}

TEST_CASE("empty window is rejected") {
    PolygonalFlux f = example1_flux();
    RandomProfileModel model;
    model.kind = ProfileKind::iid_grid;
    model.spacing = 1.0;
    model.weights = {1, 1, 1};
    model.window_lo = 2.0;
    model.window_hi = 2.0;
    try {
        sample(model, f, 0);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::empty_window);
    }
}
