#include "polyshock/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace polyshock {

namespace {

std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
    // upper triangle i < j
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::size_t num_pairs(std::size_t n) { return n * (n - 1) / 2; }

int find_index(const std::vector<double>& xs, double x, const char* what) {
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::fabs(xs[i] - x) <= kTol) return static_cast<int>(i);
    raise(Errc::not_covered, std::string(what) + " " + format_double(x) + " not in estimate");
}

void merge_counts(std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    if (a.size() != b.size()) raise(Errc::length_mismatch, "estimate shapes differ");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

}  // namespace

std::uint64_t& PointEstimate::count1(int ti, int xi, int k) {
    return c1[(static_cast<std::size_t>(ti) * grid.size() + static_cast<std::size_t>(xi)) *
                  static_cast<std::size_t>(M) +
              static_cast<std::size_t>(k - 1)];
}
std::uint64_t PointEstimate::count1(int ti, int xi, int k) const {
    return const_cast<PointEstimate*>(this)->count1(ti, xi, k);
}
std::uint64_t& PointEstimate::count2(int ti, int xi, int xj, int ki, int kj) {
    std::size_t p = pair_index(grid.size(), static_cast<std::size_t>(xi),
                               static_cast<std::size_t>(xj));
    std::size_t mm = static_cast<std::size_t>(M) * static_cast<std::size_t>(M);
    return c2[(static_cast<std::size_t>(ti) * num_pairs(grid.size()) + p) * mm +
              static_cast<std::size_t>(ki - 1) * static_cast<std::size_t>(M) +
              static_cast<std::size_t>(kj - 1)];
}
std::uint64_t PointEstimate::count2(int ti, int xi, int xj, int ki, int kj) const {
    return const_cast<PointEstimate*>(this)->count2(ti, xi, xj, ki, kj);
}

void PointEstimate::merge(const PointEstimate& other) {
    merge_counts(c1, other.c1);
    merge_counts(c2, other.c2);
    N += other.N;
}

void ShockEstimate::merge(const ShockEstimate& other) {
    merge_counts(front_counts, other.front_counts);
    merge_counts(pair_counts, other.pair_counts);
    merge_counts(outcome1, other.outcome1);
    merge_counts(outcome2, other.outcome2);
    merge_counts(coincident, other.coincident);
    N += other.N;
}

void EnsembleResult::merge(const EnsembleResult& other) {
    points.merge(other.points);
    shocks.merge(other.shocks);
    events.insert(events.end(), other.events.begin(), other.events.end());
}

namespace {

PointEstimate empty_points(const EnsembleSpec& spec, int M) {
    PointEstimate pe;
    pe.M = M;
    pe.max_order = spec.max_order;
    pe.times = spec.times;
    pe.grid = spec.x_grid;
    pe.c1.assign(spec.times.size() * spec.x_grid.size() * static_cast<std::size_t>(M), 0);
    if (spec.max_order >= 2)
        pe.c2.assign(spec.times.size() * num_pairs(spec.x_grid.size()) *
                         static_cast<std::size_t>(M) * static_cast<std::size_t>(M),
                     0);
    return pe;
}

ShockEstimate empty_shocks(const EnsembleSpec& spec, int M, double width) {
    ShockEstimate se;
    se.M = M;
    se.times = spec.times;
    se.grid = spec.x_grid;
    se.width = width;
    std::size_t S = static_cast<std::size_t>(se.num_species());
    std::size_t O = static_cast<std::size_t>(se.num_outcomes());
    std::size_t B = spec.x_grid.size();
    se.front_counts.assign(spec.times.size() * B * S, 0);
    se.outcome1.assign(spec.times.size() * B * O, 0);
    if (spec.max_order >= 2) {
        se.pair_counts.assign(spec.times.size() * num_pairs(B) * S * S, 0);
        se.outcome2.assign(spec.times.size() * num_pairs(B) * O * O, 0);
    }
    se.coincident.assign(spec.times.size() * 3 * S * S, 0);
    return se;
}

void accumulate_realization(const EnsembleSpec& spec, const PolygonalFlux& flux,
                            std::uint64_t index, EnsembleResult& out) {
    Profile data = sample(spec.model, flux, index);
    FrontSolution sol = solve(flux, data);
    out.points.N += 1;
    out.shocks.N += 1;

    const std::size_t G = spec.x_grid.size();
    const std::size_t S = static_cast<std::size_t>(out.shocks.num_species());
    const std::size_t O = static_cast<std::size_t>(out.shocks.num_outcomes());
    const double width = out.shocks.width;

    for (std::size_t ti = 0; ti < spec.times.size(); ++ti) {
        double t = spec.times[ti];
        Profile cut = sol.slice(t);

        // point values
        std::vector<int> states(G);
        for (std::size_t xi = 0; xi < G; ++xi) {
            states[xi] = eval(cut, spec.x_grid[xi]);
            out.points.count1(static_cast<int>(ti), static_cast<int>(xi), states[xi]) += 1;
        }
        if (spec.max_order >= 2)
            for (std::size_t xi = 0; xi < G; ++xi)
                for (std::size_t xj = xi + 1; xj < G; ++xj)
                    out.points.count2(static_cast<int>(ti), static_cast<int>(xi),
                                      static_cast<int>(xj), states[xi], states[xj]) += 1;

        // shock boxes: species of live fronts by position
        std::vector<int> ids = sol.alive_ids(t);
        std::vector<double> pos;
        std::vector<int> sp;
        for (int id : ids) {
            const Front& f = sol.fronts[static_cast<std::size_t>(id)];
            pos.push_back(f.position(t));
            sp.push_back(out.shocks.species_id(f.left, f.right));
        }
        auto fronts_in = [&](double lo, double hi, std::vector<int>& found) {
            found.clear();
            for (std::size_t m = 0; m < pos.size(); ++m)
                if (pos[m] >= lo && pos[m] < hi) found.push_back(sp[m]);
        };

        std::vector<int> box_outcome(G);
        std::vector<int> found;
        for (std::size_t b = 0; b < G; ++b) {
            double lo = spec.x_grid[b];
            fronts_in(lo, lo + width, found);
            for (int s : found)
                out.shocks.front_counts[(ti * G + b) * S + static_cast<std::size_t>(s)] += 1;
            int outcome = found.empty() ? 0
                          : found.size() == 1 ? 1 + found[0]
                                              : static_cast<int>(O) - 1;
            box_outcome[b] = outcome;
            out.shocks.outcome1[(ti * G + b) * O + static_cast<std::size_t>(outcome)] += 1;

            // coincidence masses at three shrinking widths
            for (int wi = 0; wi < 3; ++wi) {
                double w = width / static_cast<double>(1 << wi);
                fronts_in(lo, lo + w, found);
                for (std::size_t a = 0; a < found.size(); ++a)
                    for (std::size_t c = 0; c < found.size(); ++c) {
                        if (a == c) continue;
                        out.shocks.coincident[((ti * 3 + static_cast<std::size_t>(wi)) * S +
                                               static_cast<std::size_t>(found[a])) *
                                                  S +
                                              static_cast<std::size_t>(found[c])] += 1;
                    }
            }
        }
        if (spec.max_order >= 2) {
            std::vector<std::vector<int>> per_box(G);
            for (std::size_t b = 0; b < G; ++b)
                fronts_in(spec.x_grid[b], spec.x_grid[b] + width, per_box[b]);
            for (std::size_t bi = 0; bi < G; ++bi)
                for (std::size_t bj = bi + 1; bj < G; ++bj) {
                    std::size_t p = pair_index(G, bi, bj);
                    out.shocks.outcome2[((ti * num_pairs(G) + p) * O +
                                         static_cast<std::size_t>(box_outcome[bi])) *
                                            O +
                                        static_cast<std::size_t>(box_outcome[bj])] += 1;
                    for (int s1 : per_box[bi])
                        for (int s2 : per_box[bj])
                            out.shocks.pair_counts[((ti * num_pairs(G) + p) * S +
                                                    static_cast<std::size_t>(s1)) *
                                                       S +
                                                   static_cast<std::size_t>(s2)] += 1;
                }
        }
    }

    for (const CollisionEvent& ev : sol.events) out.events.push_back({index, ev});
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleSpec& spec, const PolygonalFlux& flux, int workers,
                            std::uint64_t first_index) {
    if (spec.realizations < 1) raise(Errc::validation_error, "need at least one realization");
    if (spec.max_order < 1 || spec.max_order > 2)
        raise(Errc::validation_error, "max_order must be 1 or 2");
    const int M = flux.num_states();
    double width = spec.box_width;
    if (width <= 0.0)
        width = spec.x_grid.size() >= 2 ? spec.x_grid[1] - spec.x_grid[0] : 1.0;

    workers = std::max(1, std::min<int>(workers, spec.realizations));
    std::vector<EnsembleResult> partials(static_cast<std::size_t>(workers));
    for (auto& p : partials) {
        p.points = empty_points(spec, M);
        p.shocks = empty_shocks(spec, M, width);
    }

    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    auto work = [&](int w) {
        std::uint64_t lo = first_index + static_cast<std::uint64_t>(w) * spec.realizations / workers;
        std::uint64_t hi =
            first_index + static_cast<std::uint64_t>(w + 1) * spec.realizations / workers;
        for (std::uint64_t i = lo; i < hi; ++i) {
            try {
                accumulate_realization(spec, flux, i, partials[static_cast<std::size_t>(w)]);
            } catch (const Error& e) {
                errors[static_cast<std::size_t>(w)] = std::make_exception_ptr(
                    Error(e.code(), std::string(e.what()) + " (realization " +
                                        std::to_string(i) + ")"));
                return;
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
                return;
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
        for (auto& th : threads) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    EnsembleResult total = std::move(partials[0]);
    for (int w = 1; w < workers; ++w) total.merge(partials[static_cast<std::size_t>(w)]);
    return total;
}

double estimate_F(const PointEstimate& pe, double t, std::span<const double> xs,
                  std::span<const int> ks) {
    if (xs.size() != ks.size() || xs.empty() || xs.size() > 2)
        raise(Errc::validation_error, "estimate_F takes one or two positions");
    int ti = find_index(pe.times, t, "time");
    if (xs.size() == 1) {
        int xi = find_index(pe.grid, xs[0], "position");
        std::uint64_t n = 0;
        for (int l = ks[0] + 1; l <= pe.M; ++l)
            n += pe.count1(ti, xi, l);
        return static_cast<double>(n) / static_cast<double>(pe.N);
    }
    if (pe.max_order < 2) raise(Errc::not_covered, "pair statistics were not collected");
    int xi = find_index(pe.grid, xs[0], "position");
    int xj = find_index(pe.grid, xs[1], "position");
    bool swap = xi > xj;
    if (swap) std::swap(xi, xj);
    int ki = swap ? ks[1] : ks[0];
    int kj = swap ? ks[0] : ks[1];
    if (xi == xj) raise(Errc::validation_error, "pair positions must be distinct");
    std::uint64_t n = 0;
    for (int l1 = ki + 1; l1 <= pe.M; ++l1)
        for (int l2 = kj + 1; l2 <= pe.M; ++l2) n += pe.count2(ti, xi, xj, l1, l2);
    return static_cast<double>(n) / static_cast<double>(pe.N);
}

double estimate_shock_density(const ShockEstimate& se, int u, int v, double t, double box_lo,
                              double box_hi) {
    if (u < 1 || u > se.M || v < 1 || v > se.M || u == v)
        raise(Errc::validation_error, "bad species");
    int ti = find_index(se.times, t, "time");
    int b = find_index(se.grid, box_lo, "box");
    if (std::fabs(box_hi - (box_lo + se.width)) > kTol)
        raise(Errc::not_covered, "box width differs from the stored width");
    std::size_t S = static_cast<std::size_t>(se.num_species());
    std::uint64_t n = se.front_counts[(static_cast<std::size_t>(ti) * se.grid.size() +
                                       static_cast<std::size_t>(b)) *
                                          S +
                                      static_cast<std::size_t>(se.species_id(u, v))];
    return static_cast<double>(n) / static_cast<double>(se.N);
}

CompatibilityReport check_compatibility(const ShockEstimate& se) {
    CompatibilityReport report;
    const std::size_t G = se.grid.size();
    const std::size_t O = static_cast<std::size_t>(se.num_outcomes());
    const std::size_t S = static_cast<std::size_t>(se.num_species());

    // (a) summing box-pair outcome counts over either slot must reproduce the
    // single-box outcome counts, realization by realization.
    std::uint64_t max_gap = 0;
    if (!se.outcome2.empty()) {
        for (std::size_t ti = 0; ti < se.times.size(); ++ti)
            for (std::size_t bi = 0; bi < G; ++bi)
                for (std::size_t bj = bi + 1; bj < G; ++bj) {
                    std::size_t p = pair_index(G, bi, bj);
                    for (std::size_t o1 = 0; o1 < O; ++o1) {
                        std::uint64_t sum = 0;
                        for (std::size_t o2 = 0; o2 < O; ++o2)
                            sum += se.outcome2[((ti * num_pairs(G) + p) * O + o1) * O + o2];
                        std::uint64_t single = se.outcome1[(ti * G + bi) * O + o1];
                        max_gap = std::max(max_gap,
                                           sum > single ? sum - single : single - sum);
                    }
                    for (std::size_t o2 = 0; o2 < O; ++o2) {
                        std::uint64_t sum = 0;
                        for (std::size_t o1 = 0; o1 < O; ++o1)
                            sum += se.outcome2[((ti * num_pairs(G) + p) * O + o1) * O + o2];
                        std::uint64_t single = se.outcome1[(ti * G + bj) * O + o2];
                        max_gap = std::max(max_gap,
                                           sum > single ? sum - single : single - sum);
                    }
                }
    }
    report.max_marginal_gap = max_gap;
    report.marginals_exact = (max_gap == 0);

    // (b) unequal-species mass in a shrinking coincident box
    for (int wi = 0; wi < 3; ++wi) {
        std::uint64_t n = 0;
        for (std::size_t ti = 0; ti < se.times.size(); ++ti)
            for (std::size_t s1 = 0; s1 < S; ++s1)
                for (std::size_t s2 = 0; s2 < S; ++s2) {
                    if (s1 == s2) continue;
                    n += se.coincident[((ti * 3 + static_cast<std::size_t>(wi)) * S + s1) * S +
                                       s2];
                }
        report.coincidence_mass.push_back(static_cast<double>(n) /
                                          static_cast<double>(se.N));
    }
    report.coincidence_monotone = report.coincidence_mass[0] >= report.coincidence_mass[1] &&
                                  report.coincidence_mass[1] >= report.coincidence_mass[2];
    return report;
}

}  // namespace polyshock
