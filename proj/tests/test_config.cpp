#include "doctest.h"
#include "polyshock/config.hpp"

using namespace polyshock;

namespace {

const char* kExample1 = R"({
  "flux": {"states": [1, 2, 3], "flux_values": [2, 3, 8]},
  "profile": {"kind": "deterministic", "breakpoints": [1, 2], "pieces": [3, 2, 1],
              "window": [0, 4]},
  "horizon": "inf",
  "times": ["1/4", "1/2"],
  "x_grid": [0, 1, 2, 3],
  "realizations": 1,
  "seed": 7
})";

}  // namespace

TEST_CASE("Example-1 config parses with exact ratio numbers") {
    RunConfig cfg = parse_config(kExample1);
    CHECK(cfg.flux.states == std::vector<double>{1, 2, 3});
    CHECK(cfg.flux.values == std::vector<double>{2, 3, 8});
    CHECK(cfg.model.fixed.pieces == std::vector<int>{3, 2, 1});
    CHECK(cfg.times == std::vector<double>{0.25, 0.5});
    CHECK(cfg.horizon == kInf);
    CHECK(cfg.seed == 7);
}

TEST_CASE("empty or malformed config is a schema error") {
    try {
        parse_config("");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::schema_error);
    }
    try {
        parse_config("{\"flux\": {}}");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::schema_error);
    }
}

TEST_CASE("wrongly typed fields are schema errors") {
    std::string bad = R"({
      "flux": {"states": [1, 2, 3], "flux_values": [2, 3, 8]},
      "profile": {"kind": "deterministic", "breakpoints": [1], "pieces": [2.5, 1]}
    })";
    try {
        parse_config(bad);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::schema_error);
    }
}

TEST_CASE("inadmissible pieces surface as a validation error naming the cause") {
    std::string bad = R"({
      "flux": {"states": [1, 2, 3], "flux_values": [2, 3, 8]},
      "profile": {"kind": "deterministic", "breakpoints": [0], "pieces": [1, 3]}
    })";
    try {
        parse_config(bad);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::validation_error);
        CHECK(std::string(e.what()).find("InadmissibleUpJump") != std::string::npos);
    }
}

TEST_CASE("non-convex flux is rejected through the config path") {
    std::string bad = R"({
      "flux": {"states": [1, 2, 3], "flux_values": [2, 3, "7/2"]},
      "profile": {"kind": "deterministic", "breakpoints": [1], "pieces": [2, 1]}
    })";
    try {
        parse_config(bad);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::validation_error);
        CHECK(std::string(e.what()).find("NonConvex") != std::string::npos);
    }
}

TEST_CASE("canonical serialization is stable") {
    RunConfig cfg = parse_config(kExample1);
    std::string s1 = serialize_config(cfg);
    std::string s2 = serialize_config(parse_config(kExample1));
    CHECK(s1 == s2);
}

TEST_CASE("x_grid range form and iid_grid schema") {
    std::string text = R"({
      "flux": {"states": [0, 1], "flux_values": [0, 1]},
      "profile": {"kind": "iid_grid", "window": [0, 2], "lambda": 4, "weights": [1, 1]},
      "x_grid": {"min": 0, "max": 1, "count": 5}
    })";
    RunConfig cfg = parse_config(text);
    CHECK(cfg.model.spacing == 0.25);  // 1/lambda
    CHECK(cfg.x_grid.size() == 5);
    CHECK(cfg.x_grid[4] == 1.0);

    std::string missing = R"({
      "flux": {"states": [0, 1], "flux_values": [0, 1]},
      "profile": {"kind": "iid_grid", "window": [0, 2], "weights": [1, 1]}
    })";
    try {
        parse_config(missing);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::schema_error);
    }
}
