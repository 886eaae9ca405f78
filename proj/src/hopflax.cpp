#include "polyshock/hopflax.hpp"

#include <algorithm>
#include <cmath>

namespace polyshock {

VariationalProblem::VariationalProblem(PolygonalFlux flux, Profile data, double window_lo,
                                       double window_hi)
    : flux_(std::move(flux)), data_(std::move(data)), window_lo_(window_lo),
      window_hi_(window_hi) {
    lt_ = legendre(flux_);
    // G anchored at G(0) = 0: prefix values at the breakpoints.
    g_at_bp_.resize(data_.breakpoints.size());
    if (!data_.breakpoints.empty()) {
        double x1 = data_.breakpoints.front();
        g_at_bp_[0] = flux_.state(data_.pieces.front()) * x1;
        for (std::size_t j = 1; j < data_.breakpoints.size(); ++j)
            g_at_bp_[j] = g_at_bp_[j - 1] + flux_.state(data_.pieces[j]) *
                                                (data_.breakpoints[j] - data_.breakpoints[j - 1]);
    }
}

double VariationalProblem::integrated_data(double p) const {
    if (data_.breakpoints.empty()) return flux_.state(data_.pieces.front()) * p;
    auto it = std::upper_bound(data_.breakpoints.begin(), data_.breakpoints.end(), p);
    std::size_t idx = static_cast<std::size_t>(it - data_.breakpoints.begin());
    if (idx == 0)
        return g_at_bp_[0] + flux_.state(data_.pieces.front()) * (p - data_.breakpoints.front());
    return g_at_bp_[idx - 1] +
           flux_.state(data_.pieces[idx]) * (p - data_.breakpoints[idx - 1]);
}

double VariationalProblem::functional(double p, double x, double t) const {
    if (!(t > 0.0)) raise(Errc::nonpositive_time, "Hopf-Lax functional needs t > 0");
    return integrated_data(p) + t * lt_.value((x - p) / t);
}

VariationalProblem::Argmin VariationalProblem::minimize(double x, double t) const {
    if (!(t > 0.0)) raise(Errc::nonpositive_time, "Hopf-Lax query needs t > 0");
    const int M = flux_.num_states();

    std::vector<Candidate> cands;
    cands.reserve(data_.breakpoints.size() + flux_.neighbor_slopes.size() + 4);
    for (double b : data_.breakpoints) cands.push_back({b, -1, false});
    for (int k = 1; k < M; ++k) cands.push_back({x - flux_.slope(k) * t, k, false});
    cands.push_back({window_lo_, -1, false});
    cands.push_back({window_hi_, -1, false});
    double lo = cands[0].p, hi = cands[0].p;
    for (const Candidate& c : cands) { lo = std::min(lo, c.p); hi = std::max(hi, c.p); }
    cands.push_back({lo - 1.0, -1, true});
    cands.push_back({hi + 1.0, -1, true});

    double vmin = kInf;
    for (const Candidate& c : cands) vmin = std::min(vmin, functional(c.p, x, t));

    // Largest attaining candidate decides the state; the largest attaining
    // non-sentinel is the reported minimizer.
    const Candidate* best = nullptr;
    const Candidate* best_finite = nullptr;
    for (const Candidate& c : cands) {
        if (functional(c.p, x, t) > vmin + kTol) continue;
        if (!best || c.p > best->p) best = &c;
        if (!c.sentinel && (!best_finite || c.p > best_finite->p)) best_finite = &c;
    }
    if (!best_finite) best_finite = best;

    double s;
    bool exact_kink = false;
    int kink = -1;
    if (best->kink >= 0) {
        s = flux_.slope(best->kink);
        exact_kink = true;
        kink = best->kink;
    } else {
        s = (x - best->p) / t;
        for (int k = 1; k < M; ++k)
            if (std::fabs(s - flux_.slope(k)) <= kTol) { exact_kink = true; kink = k; break; }
    }

    int state;
    if (exact_kink) {
        state = kink + 1;  // right-continuous branch of the inverse slope map
    } else {
        state = M;
        for (int k = 1; k < M; ++k)
            if (s < flux_.slope(k)) { state = k; break; }
    }
    return Argmin{best_finite->p, vmin, state};
}

double VariationalProblem::inverse_lagrangian(double x, double t) const {
    return minimize(x, t).a;
}

int VariationalProblem::query(double x, double t) const { return minimize(x, t).state; }

}  // namespace polyshock
