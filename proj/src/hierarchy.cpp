#include "polyshock/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "polyshock/rng.hpp"

namespace polyshock {

namespace {

void require_admissible_species(int u, int v, int M) {
    if (u < 1 || u > M || v < 1 || v > M || u == v || !admissible_jump(u, v))
        raise(Errc::inadmissible_species,
              "(" + std::to_string(u) + "," + std::to_string(v) + ")");
}

std::vector<int> clamp_exclude(int lo, int hi, int u, int v, int M) {
    std::vector<int> out;
    for (int w = std::max(1, lo); w <= std::min(M, hi); ++w)
        if (w != u && w != v) out.push_back(w);
    return out;
}

}  // namespace

InteractionSets interaction_sets(const PolygonalFlux& flux, int u, int v) {
    const int M = flux.num_states();
    require_admissible_species(u, v, M);
    InteractionSets s;
    s.u = u;
    s.v = v;
    if (v == u + 1) {
        s.w2 = clamp_exclude(1, u - 1, u, v, M);
        s.w3 = clamp_exclude(u + 2, M, u, v, M);
    } else {  // v < u
        s.w1 = clamp_exclude(1, u + 1, u, v, M);
        s.w2 = clamp_exclude(1, v + 1, u, v, M);
        s.w3 = clamp_exclude(u - 1, M, u, v, M);
    }
    return s;
}

InteractionSets interaction_sets_bruteforce(const PolygonalFlux& flux, int u, int v) {
    const int M = flux.num_states();
    require_admissible_species(u, v, M);
    SpeedTable c = build_speed_table(flux);
    InteractionSets s;
    s.u = u;
    s.v = v;
    for (int w = 1; w <= M; ++w) {
        if (w == u || w == v) continue;
        // creation: (u,w) + (w,v) -> (u,v), left must catch right
        if (admissible_jump(u, w) && admissible_jump(w, v) && c.speed(u, w) > c.speed(w, v))
            s.w1.push_back(w);
        // destruction from the right: (u,v) + (v,w) -> (u,w)
        if (admissible_jump(v, w) && admissible_jump(u, w) && c.speed(u, v) > c.speed(v, w))
            s.w2.push_back(w);
        // destruction from the left: (w,u) + (u,v) -> (w,v)
        if (admissible_jump(w, u) && admissible_jump(w, v) && c.speed(w, u) > c.speed(u, v))
            s.w3.push_back(w);
    }
    return s;
}

std::vector<SetDisagreement> compare_interaction_sets(const PolygonalFlux& flux) {
    const int M = flux.num_states();
    std::vector<SetDisagreement> out;
    auto diff = [&](int u, int v, char which, const std::vector<int>& a,
                    const std::vector<int>& b) {
        for (int w = 1; w <= M; ++w) {
            bool ina = std::find(a.begin(), a.end(), w) != a.end();
            bool inb = std::find(b.begin(), b.end(), w) != b.end();
            if (ina != inb) out.push_back({u, v, w, which, ina, inb});
        }
    };
    for (int u = 1; u <= M; ++u)
        for (int v = 1; v <= M; ++v) {
            if (u == v || !admissible_jump(u, v)) continue;
            InteractionSets cs = interaction_sets(flux, u, v);
            InteractionSets bf = interaction_sets_bruteforce(flux, u, v);
            diff(u, v, '1', cs.w1, bf.w1);
            diff(u, v, '2', cs.w2, bf.w2);
            diff(u, v, '3', cs.w3, bf.w3);
        }
    return out;
}

EventClassification classify_event(const PolygonalFlux& flux, const SpeedTable& speeds,
                                   int u, int w, int v) {
    const int M = flux.num_states();
    if (u < 1 || u > M || v < 1 || v > M || w < 1 || w > M)
        raise(Errc::role_violation, "state index out of range");
    if (u == v || u == w || w == v)
        raise(Errc::role_violation, "event states must be distinct");
    if (!admissible_jump(u, v))
        raise(Errc::role_violation, "created species (" + std::to_string(u) + "," +
                                        std::to_string(v) + ") is inadmissible");
    auto contains = [](const std::vector<int>& set, int x) {
        return std::find(set.begin(), set.end(), x) != set.end();
    };
    InteractionSets created = interaction_sets(flux, u, v);
    if (!contains(created.w1, w))
        raise(Errc::role_violation, "middle state outside W1 of created species");
    InteractionSets left_parent = interaction_sets(flux, u, w);
    if (!contains(left_parent.w2, v))
        raise(Errc::role_violation, "right partner outside W2 of left parent");
    InteractionSets right_parent = interaction_sets(flux, w, v);
    if (!contains(right_parent.w3, u))
        raise(Errc::role_violation, "left partner outside W3 of right parent");
    double coeff = speeds.speed(u, w) - speeds.speed(w, v);
    if (!(coeff > 0.0)) raise(Errc::role_violation, "collision coefficient not positive");
    return EventClassification{u, w, v, coeff};
}

namespace {

double bump1(double r) {
    double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - r2));
}

double bump1_deriv(double r) {
    double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    double d = 1.0 - r2;
    return bump1(r) * (-2.0 * r / (d * d));
}

}  // namespace

double BumpTestFunction::operator()(double x, double t) const {
    return bump1((x - cx) / wx) * bump1((t - ct) / wt);
}

double BumpTestFunction::dx(double x, double t) const {
    return bump1_deriv((x - cx) / wx) / wx * bump1((t - ct) / wt);
}

double BumpTestFunction::dt(double x, double t) const {
    return bump1((x - cx) / wx) * bump1_deriv((t - ct) / wt) / wt;
}

std::vector<BumpTestFunction> seeded_bumps(double x_lo, double x_hi, double t_lo, double t_hi,
                                           int count, std::uint64_t seed) {
    Rng rng(splitmix64(seed));
    std::vector<BumpTestFunction> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        BumpTestFunction b;
        b.cx = rng.uniform(x_lo, x_hi);
        b.wx = rng.uniform(0.2, 1.0) * (x_hi - x_lo);
        b.ct = rng.uniform(t_lo, t_hi);
        b.wt = rng.uniform(0.2, 1.0) * (t_hi - t_lo);
        out.push_back(b);
    }
    return out;
}

namespace {

// 10-node Gauss-Legendre on [-1, 1].
constexpr double kGLNode[10] = {
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472,
    -0.1488743389816312, 0.1488743389816312,  0.4333953941292472,  0.6794095682990244,
    0.8650633666889845,  0.9739065285171717};
constexpr double kGLWeight[10] = {
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
    0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
    0.1494513491505806, 0.0666713443086881};

// Integral of (d_t + c d_x) phi along the straight trajectory x(t), t in [t0, t1].
double stream_integral(const BumpTestFunction& phi, const Front& f, double t0, double t1) {
    // restrict to the bump's time support and to the trajectory's crossing of
    // its x support, so the panels resolve the actual feature
    t0 = std::max(t0, phi.ct - phi.wt);
    t1 = std::min(t1, phi.ct + phi.wt);
    if (f.speed != 0.0) {
        double ta = f.birth_time + (phi.cx - phi.wx - f.birth_pos) / f.speed;
        double tb = f.birth_time + (phi.cx + phi.wx - f.birth_pos) / f.speed;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
    } else if (std::fabs(f.birth_pos - phi.cx) >= phi.wx) {
        return 0.0;
    }
    if (!(t1 > t0)) return 0.0;
    const int panels = 96;
    double h = (t1 - t0) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        double a = t0 + p * h;
        double mid = a + 0.5 * h;
        for (int n = 0; n < 10; ++n) {
            double t = mid + 0.5 * h * kGLNode[n];
            double x = f.position(t);
            total += 0.5 * h * kGLWeight[n] * (phi.dt(x, t) + f.speed * phi.dx(x, t));
        }
    }
    return total;
}

}  // namespace

LedgerReport ledger_verify(const FrontSolution& sol, const std::vector<BumpTestFunction>& phis) {
    LedgerReport report;
    const int M = sol.flux.num_states();

    // classify every event; per-species creation/destruction tallies
    std::map<std::pair<int, int>, SpeciesLedger> ledger;
    auto entry = [&](int u, int v) -> SpeciesLedger& {
        auto& e = ledger[{u, v}];
        e.u = u;
        e.v = v;
        return e;
    };
    for (const Front& f : sol.fronts) {
        SpeciesLedger& e = entry(f.left, f.right);
        if (f.birth_time == 0.0) ++e.births_t0;
        if (f.death_time == kInf || f.death_time > sol.horizon) ++e.alive_end;
    }
    for (const CollisionEvent& ev : sol.events) {
        try {
            classify_event(sol.flux, sol.speeds, ev.u, ev.w, ev.v);
        } catch (const Error& err) {
            report.violations.push_back("event at t=" + format_double(ev.time) + ": " +
                                        err.what());
        }
        entry(ev.u, ev.v).created += 1;
        entry(ev.u, ev.w).destroyed += 1;
        entry(ev.w, ev.v).destroyed += 1;
    }
    for (auto& kv : ledger) {
        SpeciesLedger& e = kv.second;
        e.balance_ok = (e.births_t0 + e.created - e.destroyed == e.alive_end);
        report.species.push_back(e);
    }

    // distributional identity per (species, phi): trajectory endpoint sums
    // must equal the classified event sums, with t=0 births and horizon
    // survivors entering as boundary terms.
    for (const BumpTestFunction& phi : phis) {
        std::map<std::pair<int, int>, double> lhs, rhs;
        for (const Front& f : sol.fronts) {
            auto key = std::make_pair(f.left, f.right);
            double death_term = 0.0;
            if (f.death_time <= sol.horizon && f.death_time < kInf)
                death_term = phi(f.position(f.death_time), f.death_time);
            // survivors: phi vanishes at/beyond the support's end by construction
            double birth_term = phi(f.birth_pos, f.birth_time);
            lhs[key] += death_term - birth_term;

            double t_end = std::min(sol.horizon, phi.ct + phi.wt + 1.0);
            if (f.death_time < t_end) t_end = f.death_time;
            double stream = stream_integral(phi, f, f.birth_time, t_end);
            double endpoint = (f.death_time <= t_end ? death_term : 0.0) - birth_term;
            // free streaming: the line integral telescopes to the endpoints
            report.max_stream_residual =
                std::max(report.max_stream_residual, std::fabs(stream - endpoint));
        }
        for (const CollisionEvent& ev : sol.events) {
            double val = phi(ev.pos, ev.time);
            rhs[{ev.u, ev.v}] -= val;   // creation of (u,v)
            rhs[{ev.u, ev.w}] += val;   // destruction of (u,w)
            rhs[{ev.w, ev.v}] += val;   // destruction of (w,v)
        }
        // t=0 birth boundary terms are already inside lhs via phi(birth).
        for (int u = 1; u <= M; ++u)
            for (int v = 1; v <= M; ++v) {
                if (u == v) continue;
                auto key = std::make_pair(u, v);
                double l = lhs.count(key) ? lhs[key] : 0.0;
                double r = rhs.count(key) ? rhs[key] : 0.0;
                // Interior births/deaths cancel against the classified event
                // sums; t=0 births enter as the initial-data boundary term.
                double t0_births = 0.0;
                for (const Front& f : sol.fronts)
                    if (f.left == u && f.right == v && f.birth_time == 0.0)
                        t0_births += phi(f.birth_pos, 0.0);
                double residual = l - r + t0_births;
                report.max_balance_residual =
                    std::max(report.max_balance_residual, std::fabs(residual));
            }
    }

    bool balances = true;
    for (const SpeciesLedger& e : report.species) balances = balances && e.balance_ok;
    report.all_ok = balances && report.violations.empty() &&
                    report.max_balance_residual < 1e-9 && report.max_stream_residual < 1e-9;
    return report;
}

int tail_indicator(const FrontSolution& sol, double x, double t, int k) {
    return sol.query(x, t) > k ? 1 : 0;
}

namespace {

int profile_tail(const Profile& p, double x, int k) { return eval(p, x) > k ? 1 : 0; }

}  // namespace

TransportCheck verify_transport(const FrontSolution& sol, const std::vector<double>& times,
                                const std::vector<double>& xs) {
    const int M = sol.flux.num_states();
    TransportCheck check;
    check.speeds = sol.flux.neighbor_slopes;
    check.first_collision = sol.first_event_time();
    check.times = times;
    check.xs = xs;

    for (double t : times) {
        std::vector<std::vector<double>> per_x;
        for (double x : xs) {
            std::vector<double> per_k;
            for (int k = 1; k < M; ++k) {
                double lhs = t == 0.0 ? profile_tail(sol.initial, x, k)
                                      : tail_indicator(sol, x, t, k);
                double rhs = profile_tail(sol.initial, x - sol.flux.slope(k) * t, k);
                double r = lhs - rhs;
                per_k.push_back(r);
                check.max_abs_residual = std::max(check.max_abs_residual, std::fabs(r));
                if (t < check.first_collision)
                    check.max_abs_residual_precollision =
                        std::max(check.max_abs_residual_precollision, std::fabs(r));
            }
            per_x.push_back(std::move(per_k));
        }
        check.residuals.push_back(std::move(per_x));

        // overlap detection: transported tails G_k(x) = g_k(x - c_k t) must be
        // nonincreasing in k; violations are intervals bounded by transported
        // breakpoints.
        for (int k = 1; k + 1 < M; ++k) {
            std::vector<double> cuts;
            for (double b : sol.initial.breakpoints) {
                cuts.push_back(b + sol.flux.slope(k) * t);
                cuts.push_back(b + sol.flux.slope(k + 1) * t);
            }
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            if (cuts.empty()) continue;
            // evaluate on each open interval of the transported partition
            std::vector<std::pair<double, double>> bad;  // [lo, hi)
            auto violated = [&](double x) {
                int gk = profile_tail(sol.initial, x - sol.flux.slope(k) * t, k);
                int gk1 = profile_tail(sol.initial, x - sol.flux.slope(k + 1) * t, k + 1);
                return gk1 > gk;
            };
            for (std::size_t i = 0; i + 1 <= cuts.size(); ++i) {
                double lo = cuts[i];
                double hi = (i + 1 < cuts.size()) ? cuts[i + 1] : lo;
                if (!(hi > lo)) continue;
                if (violated(0.5 * (lo + hi))) {
                    if (!bad.empty() && bad.back().second == lo)
                        bad.back().second = hi;
                    else
                        bad.emplace_back(lo, hi);
                }
            }
            for (auto [lo, hi] : bad) check.overlaps.push_back({t, k, lo, hi});
        }
    }
    return check;
}

}  // namespace polyshock
