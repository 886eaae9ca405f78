#include "polyshock/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace polyshock {

using nlohmann::json;

namespace {

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
    raise(Errc::schema_error, where + ": " + what);
}

// Reals may be numbers or exact ratio strings "p/q".
double parse_number(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        std::size_t slash = s.find('/');
        try {
            if (s == "inf") return kInf;
            if (s == "-inf") return -kInf;
            if (slash == std::string::npos) return std::stod(s);
            double p = std::stod(s.substr(0, slash));
            double q = std::stod(s.substr(slash + 1));
            if (q == 0.0) schema_fail(where, "zero denominator in '" + s + "'");
            return p / q;
        } catch (const std::invalid_argument&) {
            schema_fail(where, "cannot parse number '" + s + "'");
        } catch (const std::out_of_range&) {
            schema_fail(where, "number out of range '" + s + "'");
        }
    }
    schema_fail(where, "expected a number or 'p/q' string");
}

std::vector<double> parse_number_list(const json& j, const std::string& where) {
    if (!j.is_array()) schema_fail(where, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

const json& require(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) schema_fail(where, "missing field '" + key + "'");
    return j.at(key);
}

ProfileKind parse_kind(const std::string& s, const std::string& where) {
    if (s == "deterministic") return ProfileKind::deterministic;
    if (s == "iid_grid") return ProfileKind::iid_grid;
    if (s == "markov_jump") return ProfileKind::markov_jump;
    schema_fail(where, "unknown profile kind '" + s + "'");
}

}  // namespace

namespace {

RunConfig parse_config_impl(const json& root);

}  // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        raise(Errc::schema_error, e.what());
    }
    try {
        return parse_config_impl(root);
    } catch (const json::exception& e) {
        raise(Errc::schema_error, e.what());
    }
}

namespace {

RunConfig parse_config_impl(const json& root) {
    if (!root.is_object()) raise(Errc::schema_error, "top level must be an object");

    RunConfig cfg;

    const json& jf = require(root, "flux", "config");
    std::vector<double> states = parse_number_list(require(jf, "states", "flux"), "flux.states");
    std::vector<double> values =
        parse_number_list(require(jf, "flux_values", "flux"), "flux.flux_values");
    try {
        cfg.flux = build_flux(std::move(states), std::move(values));
    } catch (const Error& e) {
        raise(Errc::validation_error, std::string("flux: ") + e.what());
    }

    const json& jp = require(root, "profile", "config");
    RandomProfileModel& model = cfg.model;
    model.kind = parse_kind(require(jp, "kind", "profile").get<std::string>(), "profile.kind");
    if (jp.contains("seed")) model.seed = jp.at("seed").get<std::uint64_t>();
    if (jp.contains("window")) {
        std::vector<double> w = parse_number_list(jp.at("window"), "profile.window");
        if (w.size() != 2 || !(w[0] < w[1]))
            raise(Errc::schema_error, "profile.window must be [lo, hi] with lo < hi");
        model.window_lo = w[0];
        model.window_hi = w[1];
    }

    if (model.kind == ProfileKind::deterministic) {
        std::vector<double> bps =
            parse_number_list(require(jp, "breakpoints", "profile"), "profile.breakpoints");
        const json& jpieces = require(jp, "pieces", "profile");
        if (!jpieces.is_array())
            raise(Errc::schema_error, "profile.pieces must be an array");
        std::vector<int> pieces;
        for (const json& e : jpieces) {
            if (!e.is_number_integer())
                raise(Errc::schema_error, "profile.pieces entries must be integer state indices");
            pieces.push_back(e.get<int>());
        }
        try {
            model.fixed = make_profile(std::move(bps), std::move(pieces), cfg.flux);
        } catch (const Error& e) {
            raise(Errc::validation_error, std::string("profile: ") + e.what());
        }
        if (!jp.contains("window")) {
            double lo = model.fixed.breakpoints.empty() ? 0.0 : model.fixed.breakpoints.front();
            double hi = model.fixed.breakpoints.empty() ? 1.0 : model.fixed.breakpoints.back();
            model.window_lo = lo - 1.0;
            model.window_hi = hi + 1.0;
        }
    } else if (model.kind == ProfileKind::iid_grid) {
        if (!jp.contains("window")) raise(Errc::schema_error, "iid_grid needs profile.window");
        if (jp.contains("spacing"))
            model.spacing = parse_number(jp.at("spacing"), "profile.spacing");
        else if (jp.contains("lambda"))
            model.spacing = 1.0 / parse_number(jp.at("lambda"), "profile.lambda");
        else
            raise(Errc::schema_error, "iid_grid needs profile.spacing or profile.lambda");
        model.weights = parse_number_list(require(jp, "weights", "profile"), "profile.weights");
        if (static_cast<int>(model.weights.size()) != cfg.flux.num_states())
            raise(Errc::validation_error, "profile.weights length must equal state count");
        for (double w : model.weights)
            if (w < 0.0) raise(Errc::validation_error, "profile.weights must be nonnegative");
    } else {
        if (!jp.contains("window")) raise(Errc::schema_error, "markov_jump needs profile.window");
        model.rate = parse_number(require(jp, "lambda", "profile"), "profile.lambda");
        if (!(model.rate > 0.0)) raise(Errc::validation_error, "profile.lambda must be positive");
        const json& jt = require(jp, "transition", "profile");
        if (!jt.is_array() || static_cast<int>(jt.size()) != cfg.flux.num_states())
            raise(Errc::schema_error, "profile.transition must be an MxM array");
        for (std::size_t r = 0; r < jt.size(); ++r) {
            std::vector<double> row =
                parse_number_list(jt[r], "profile.transition[" + std::to_string(r) + "]");
            if (static_cast<int>(row.size()) != cfg.flux.num_states())
                raise(Errc::schema_error, "profile.transition rows must have M entries");
            model.transition.push_back(std::move(row));
        }
        if (jp.contains("weights"))
            model.weights = parse_number_list(jp.at("weights"), "profile.weights");
    }

    if (root.contains("horizon")) cfg.horizon = parse_number(root.at("horizon"), "horizon");
    if (!(cfg.horizon > 0.0)) raise(Errc::validation_error, "horizon must be positive");
    if (root.contains("times")) cfg.times = parse_number_list(root.at("times"), "times");
    for (double t : cfg.times)
        if (t < 0.0) raise(Errc::validation_error, "times must be nonnegative");

    if (root.contains("x_grid")) {
        const json& jg = root.at("x_grid");
        if (jg.is_array()) {
            cfg.x_grid = parse_number_list(jg, "x_grid");
        } else if (jg.is_object()) {
            double lo = parse_number(require(jg, "min", "x_grid"), "x_grid.min");
            double hi = parse_number(require(jg, "max", "x_grid"), "x_grid.max");
            int count = require(jg, "count", "x_grid").get<int>();
            if (count < 2 || !(hi > lo)) raise(Errc::schema_error, "bad x_grid range");
            for (int i = 0; i < count; ++i)
                cfg.x_grid.push_back(lo + (hi - lo) * i / (count - 1));
        } else {
            raise(Errc::schema_error, "x_grid must be an array or {min,max,count}");
        }
    }

    if (root.contains("box_width")) cfg.box_width = parse_number(root.at("box_width"), "box_width");
    if (root.contains("realizations")) cfg.realizations = root.at("realizations").get<int>();
    if (root.contains("n")) cfg.realizations = root.at("n").get<int>();
    if (cfg.realizations < 1) raise(Errc::validation_error, "realizations must be >= 1");
    if (root.contains("max_order")) cfg.max_order = root.at("max_order").get<int>();
    if (cfg.max_order < 1 || cfg.max_order > 2)
        raise(Errc::validation_error, "max_order must be 1 or 2");
    if (root.contains("seed")) cfg.seed = root.at("seed").get<std::uint64_t>();
    if (root.contains("workers")) cfg.workers = root.at("workers").get<int>();
    if (cfg.workers < 1) raise(Errc::validation_error, "workers must be >= 1");
    if (root.contains("crosscheck_points"))
        cfg.crosscheck_points = root.at("crosscheck_points").get<int>();

    // command defaults derived from the profile when absent
    if (cfg.times.empty()) cfg.times = {0.0};
    if (cfg.x_grid.empty()) {
        double lo = cfg.model.window_lo, hi = cfg.model.window_hi;
        for (int i = 0; i < 21; ++i) cfg.x_grid.push_back(lo + (hi - lo) * i / 20);
    }
    return cfg;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["flux"]["states"] = cfg.flux.states;
    j["flux"]["flux_values"] = cfg.flux.values;
    json& jp = j["profile"];
    switch (cfg.model.kind) {
        case ProfileKind::deterministic:
            jp["kind"] = "deterministic";
            jp["breakpoints"] = cfg.model.fixed.breakpoints;
            jp["pieces"] = cfg.model.fixed.pieces;
            break;
        case ProfileKind::iid_grid:
            jp["kind"] = "iid_grid";
            jp["spacing"] = cfg.model.spacing;
            jp["weights"] = cfg.model.weights;
            break;
        case ProfileKind::markov_jump:
            jp["kind"] = "markov_jump";
            jp["lambda"] = cfg.model.rate;
            jp["transition"] = cfg.model.transition;
            if (!cfg.model.weights.empty()) jp["weights"] = cfg.model.weights;
            break;
    }
    jp["window"] = {cfg.model.window_lo, cfg.model.window_hi};
    jp["seed"] = cfg.model.seed;
    j["horizon"] = cfg.horizon == kInf ? json("inf") : json(cfg.horizon);
    j["times"] = cfg.times;
    j["x_grid"] = cfg.x_grid;
    j["box_width"] = cfg.box_width;
    j["realizations"] = cfg.realizations;
    j["max_order"] = cfg.max_order;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["crosscheck_points"] = cfg.crosscheck_points;
    return j.dump(2) + "\n";
}

}  // namespace polyshock
