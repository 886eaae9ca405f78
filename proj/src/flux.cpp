#include "polyshock/flux.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace polyshock {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::non_increasing_states: return "NonIncreasingStates";
        case Errc::non_convex: return "NonConvex";
        case Errc::equal_states: return "EqualStates";
        case Errc::inadmissible_up_jump: return "InadmissibleUpJump";
        case Errc::non_increasing_breakpoints: return "NonIncreasingBreakpoints";
        case Errc::redundant_piece: return "RedundantPiece";
        case Errc::empty_window: return "EmptyWindow";
        case Errc::nonpositive_time: return "NonpositiveTime";
        case Errc::out_of_horizon: return "OutOfHorizon";
        case Errc::inadmissible_merge_internal: return "InadmissibleMergeInternal";
        case Errc::inadmissible_species: return "InadmissibleSpecies";
        case Errc::role_violation: return "RoleViolation";
        case Errc::not_covered: return "NotCovered";
        case Errc::schema_error: return "SchemaError";
        case Errc::validation_error: return "ValidationError";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

double PolygonalFlux::lipschitz() const {
    double lip = 0.0;
    for (double c : neighbor_slopes) lip = std::max(lip, std::fabs(c));
    return lip;
}

PolygonalFlux build_flux(std::vector<double> states, std::vector<double> values) {
    if (states.size() != values.size())
        raise(Errc::length_mismatch, "states and values differ in length");
    if (states.size() < 2) raise(Errc::length_mismatch, "need at least two states");
    for (std::size_t i = 0; i + 1 < states.size(); ++i)
        if (!(states[i] < states[i + 1]))
            raise(Errc::non_increasing_states, "states must be strictly increasing");

    PolygonalFlux flux;
    flux.states = std::move(states);
    flux.values = std::move(values);
    flux.neighbor_slopes.resize(flux.states.size() - 1);
    for (std::size_t k = 0; k + 1 < flux.states.size(); ++k)
        flux.neighbor_slopes[k] =
            (flux.values[k + 1] - flux.values[k]) / (flux.states[k + 1] - flux.states[k]);
    for (std::size_t k = 0; k + 1 < flux.neighbor_slopes.size(); ++k)
        if (!(flux.neighbor_slopes[k] < flux.neighbor_slopes[k + 1]))
            raise(Errc::non_convex, "chord slopes must be strictly increasing");
    return flux;
}

double rh_speed(const PolygonalFlux& flux, int i, int j) {
    if (!flux.valid_index(i) || !flux.valid_index(j))
        raise(Errc::equal_states, "state index out of range");
    if (i == j) raise(Errc::equal_states, "no shock between equal states");
    return (flux.value(i) - flux.value(j)) / (flux.state(i) - flux.state(j));
}

SpeedTable build_speed_table(const PolygonalFlux& flux) {
    SpeedTable table;
    table.M = flux.num_states();
    table.c.assign(static_cast<std::size_t>(table.M) * table.M, 0.0);
    for (int i = 1; i <= table.M; ++i)
        for (int j = i + 1; j <= table.M; ++j) {
            double s = rh_speed(flux, i, j);
            table.c[static_cast<std::size_t>((i - 1) * table.M + (j - 1))] = s;
            table.c[static_cast<std::size_t>((j - 1) * table.M + (i - 1))] = s;
        }
    return table;
}

double LegendreTransform::value(double q) const {
    double best = q * states[0] - flux_values[0];
    for (std::size_t i = 1; i < states.size(); ++i)
        best = std::max(best, q * states[i] - flux_values[i]);
    return best;
}

std::vector<int> LegendreTransform::attaining(double q) const {
    double best = value(q);
    std::vector<int> out;
    for (std::size_t i = 0; i < states.size(); ++i)
        if (q * states[i] - flux_values[i] >= best - kTol) out.push_back(static_cast<int>(i) + 1);
    return out;
}

LegendreTransform legendre(const PolygonalFlux& flux) {
    LegendreTransform lt;
    lt.breakpoints = flux.neighbor_slopes;
    lt.states = flux.states;
    lt.flux_values = flux.values;
    lt.slope_lo = flux.states.front();
    lt.slope_hi = flux.states.back();
    lt.node_values.resize(lt.breakpoints.size());
    for (std::size_t k = 0; k < lt.breakpoints.size(); ++k)
        lt.node_values[k] = lt.value(lt.breakpoints[k]);
    return lt;
}

}  // namespace polyshock
