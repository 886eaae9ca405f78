#include "polyshock/profile.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "polyshock/rng.hpp"

namespace polyshock {

Profile make_profile(std::vector<double> breakpoints, std::vector<int> pieces,
                     const PolygonalFlux& flux) {
    if (pieces.size() != breakpoints.size() + 1)
        raise(Errc::length_mismatch, "pieces must have one more entry than breakpoints");
    for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j)
        if (!(breakpoints[j] < breakpoints[j + 1]))
            raise(Errc::non_increasing_breakpoints, "breakpoints must be strictly increasing");
    for (int s : pieces)
        if (!flux.valid_index(s))
            raise(Errc::validation_error, "piece state index out of range");
    for (std::size_t j = 0; j + 1 < pieces.size(); ++j) {
        int u = pieces[j], v = pieces[j + 1];
        if (u == v) raise(Errc::redundant_piece, "adjacent pieces must differ");
        if (!admissible_jump(u, v))
            raise(Errc::inadmissible_up_jump,
                  "upward jump skips a state at breakpoint " + format_double(breakpoints[j]));
    }
    Profile p;
    p.breakpoints = std::move(breakpoints);
    p.pieces = std::move(pieces);
    return p;
}

int eval(const Profile& p, double x) {
    // number of breakpoints <= x
    auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), x);
    return p.pieces[static_cast<std::size_t>(it - p.breakpoints.begin())];
}

int eval_left(const Profile& p, double x) {
    // number of breakpoints < x
    auto it = std::lower_bound(p.breakpoints.begin(), p.breakpoints.end(), x);
    return p.pieces[static_cast<std::size_t>(it - p.breakpoints.begin())];
}

double total_variation(const Profile& p, const PolygonalFlux& flux) {
    double tv = 0.0;
    for (std::size_t j = 0; j + 1 < p.pieces.size(); ++j)
        tv += std::fabs(flux.state(p.pieces[j + 1]) - flux.state(p.pieces[j]));
    return tv;
}

double l1_distance(const Profile& a, const Profile& b, const PolygonalFlux& flux) {
    if (a.pieces.front() != b.pieces.front() || a.pieces.back() != b.pieces.back())
        raise(Errc::validation_error, "profiles differ at infinity; L1 distance diverges");
    std::vector<double> cuts;
    cuts.reserve(a.breakpoints.size() + b.breakpoints.size());
    cuts.insert(cuts.end(), a.breakpoints.begin(), a.breakpoints.end());
    cuts.insert(cuts.end(), b.breakpoints.begin(), b.breakpoints.end());
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i], hi = cuts[i + 1];
        if (!(hi > lo)) continue;
        double mid = 0.5 * (lo + hi);
        total += std::fabs(flux.state(eval(a, mid)) - flux.state(eval(b, mid))) * (hi - lo);
    }
    return total;
}

std::string serialize_profile(const Profile& p) {
    nlohmann::json j;
    j["breakpoints"] = p.breakpoints;
    j["pieces"] = p.pieces;
    return j.dump();
}

Profile parse_profile(const std::string& text, const PolygonalFlux& flux) {
    nlohmann::json j = nlohmann::json::parse(text);
    return make_profile(j.at("breakpoints").get<std::vector<double>>(),
                        j.at("pieces").get<std::vector<int>>(), flux);
}

namespace {

// Collapse equal-valued neighboring cells into a valid Profile.
Profile from_cells(const std::vector<double>& cuts, const std::vector<int>& cells,
                   const PolygonalFlux& flux) {
    std::vector<double> bps;
    std::vector<int> pieces{cells.front()};
    for (std::size_t i = 1; i < cells.size(); ++i) {
        if (cells[i] != pieces.back()) {
            bps.push_back(cuts[i - 1]);
            pieces.push_back(cells[i]);
        }
    }
    return make_profile(std::move(bps), std::move(pieces), flux);
}

// Admissible successors of state u: all w < u, plus u+1 when it exists.
std::vector<double> restricted_row(const std::vector<double>& row, int u, int M) {
    std::vector<double> r(static_cast<std::size_t>(M), 0.0);
    for (int v = 1; v <= M; ++v) {
        if (v == u || !admissible_jump(u, v)) continue;
        r[static_cast<std::size_t>(v - 1)] = row[static_cast<std::size_t>(v - 1)];
    }
    return r;
}

}  // namespace

Profile sample(const RandomProfileModel& model, const PolygonalFlux& flux, std::uint64_t index) {
    const int M = flux.num_states();
    if (model.kind == ProfileKind::deterministic) return model.fixed;
    if (!(model.window_hi > model.window_lo)) raise(Errc::empty_window, "window is empty");

    Rng rng(stream_seed(model.seed, index));

    if (model.kind == ProfileKind::iid_grid) {
        int ncells = static_cast<int>(std::ceil((model.window_hi - model.window_lo) / model.spacing));
        if (ncells < 1) raise(Errc::empty_window, "window shorter than one cell");
        std::vector<double> cuts;
        for (int i = 1; i < ncells; ++i) cuts.push_back(model.window_lo + i * model.spacing);
        std::vector<int> cells;
        cells.reserve(static_cast<std::size_t>(ncells));
        cells.push_back(rng.pick_weighted(model.weights) + 1);
        for (int i = 1; i < ncells; ++i) {
            // draw from the configured weights, rejecting inadmissible up-jumps
            int v;
            do {
                v = rng.pick_weighted(model.weights) + 1;
            } while (v > cells.back() + 1);
            cells.push_back(v);
        }
        return from_cells(cuts, cells, flux);
    }

    // markov_jump: exponential(rate) spacings, next state from the transition
    // row restricted to admissible moves distinct from the current state.
    std::vector<double> init = model.weights.empty()
                                   ? std::vector<double>(static_cast<std::size_t>(M), 1.0)
                                   : model.weights;
    int cur = rng.pick_weighted(init) + 1;
    std::vector<double> bps;
    std::vector<int> pieces{cur};
    double x = model.window_lo;
    while (true) {
        x += rng.exponential(model.rate);
        if (x >= model.window_hi) break;
        std::vector<double> row = restricted_row(model.transition[static_cast<std::size_t>(cur - 1)], cur, M);
        double mass = 0.0;
        for (double w : row) mass += w;
        if (mass <= 0.0)
            raise(Errc::validation_error, "transition row has no admissible move from state " +
                                              std::to_string(cur));
        cur = rng.pick_weighted(row) + 1;
        bps.push_back(x);
        pieces.push_back(cur);
    }
    return make_profile(std::move(bps), std::move(pieces), flux);
}

std::vector<std::vector<double>> iid_grid_cell_marginals(const RandomProfileModel& model,
                                                         int M, int cells) {
    // Cell 1 follows the normalized weights; cell i+1 follows the weights
    // conditioned on not up-skipping cell i.
    std::vector<double> w = model.weights;
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;

    std::vector<std::vector<double>> out;
    out.push_back(w);
    for (int c = 1; c < cells; ++c) {
        const std::vector<double>& prev = out.back();
        std::vector<double> cur(static_cast<std::size_t>(M), 0.0);
        for (int p = 1; p <= M; ++p) {
            double mass = 0.0;
            for (int v = 1; v <= p + 1 && v <= M; ++v) mass += w[static_cast<std::size_t>(v - 1)];
            for (int v = 1; v <= p + 1 && v <= M; ++v)
                cur[static_cast<std::size_t>(v - 1)] +=
                    prev[static_cast<std::size_t>(p - 1)] * w[static_cast<std::size_t>(v - 1)] / mass;
        }
        out.push_back(cur);
    }
    return out;
}

}  // namespace polyshock
