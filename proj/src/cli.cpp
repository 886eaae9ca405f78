#include "polyshock/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "polyshock/hierarchy.hpp"
#include "polyshock/hopflax.hpp"
#include "polyshock/rng.hpp"
#include "polyshock/stats.hpp"

namespace polyshock {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_error, "cannot open " + path.string() + " for writing");
    out << content;
    if (!out) raise(Errc::io_error, "write failed for " + path.string());
}

std::string event_json(const CollisionEvent& ev) {
    std::string s = "{\"t\":" + format_double(ev.time) + ",\"x\":" + format_double(ev.pos) +
                    ",\"left\":[" + std::to_string(ev.u) + "," + std::to_string(ev.w) +
                    "],\"right\":[" + std::to_string(ev.w) + "," + std::to_string(ev.v) +
                    "],\"created\":[" + std::to_string(ev.u) + "," + std::to_string(ev.v) + "]";
    if (ev.triple) s += ",\"triple\":true";
    return s + "}";
}

std::string trajectories_csv(const FrontSolution& sol) {
    std::string s = "front_id,u,v,t_birth,x_birth,speed,t_death\n";
    for (const Front& f : sol.fronts) {
        s += std::to_string(f.id) + "," + std::to_string(f.left) + "," +
             std::to_string(f.right) + "," + format_double(f.birth_time) + "," +
             format_double(f.birth_pos) + "," + format_double(f.speed) + "," +
             format_double(f.death_time) + "\n";
    }
    return s;
}

std::string events_jsonl(const FrontSolution& sol) {
    std::string s;
    for (const CollisionEvent& ev : sol.events) s += event_json(ev) + "\n";
    return s;
}

FrontSolution solve_realization(const RunConfig& cfg, std::uint64_t index) {
    Profile data = sample(cfg.model, cfg.flux, index);
    return solve(cfg.flux, data, cfg.horizon);
}

VariationalProblem variational_from(const RunConfig& cfg, const Profile& data) {
    double lo = cfg.model.window_lo, hi = cfg.model.window_hi;
    if (!data.breakpoints.empty()) {
        lo = std::min(lo, data.breakpoints.front() - 1.0);
        hi = std::max(hi, data.breakpoints.back() + 1.0);
    }
    return VariationalProblem(cfg.flux, data, lo, hi);
}

int cmd_solve(const RunConfig& cfg, const CliOptions& opt) {
    FrontSolution sol = solve_realization(cfg, 0);
    write_file(fs::path(opt.out_dir) / "trajectories.csv", trajectories_csv(sol));
    write_file(fs::path(opt.out_dir) / "events.jsonl", events_jsonl(sol));
    std::cout << "solve: " << sol.fronts.size() << " fronts, " << sol.events.size()
              << " events\n";
    return 0;
}

int cmd_oracle(const RunConfig& cfg, const CliOptions& opt) {
    Profile data = sample(cfg.model, cfg.flux, 0);
    VariationalProblem vp = variational_from(cfg, data);

    std::vector<std::pair<double, double>> points;
    if (!opt.points_path.empty()) {
        std::ifstream in(opt.points_path);
        if (!in) raise(Errc::io_error, "cannot open points file " + opt.points_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == 'x') continue;  // header or blank
            std::istringstream ss(line);
            double x, t;
            char comma;
            if (ss >> x >> comma >> t) points.emplace_back(x, t);
        }
    } else {
        for (double t : cfg.times)
            for (double x : cfg.x_grid)
                if (t > 0.0) points.emplace_back(x, t);
    }

    std::string s = "x,t,state\n";
    for (auto [x, t] : points)
        s += format_double(x) + "," + format_double(t) + "," + std::to_string(vp.query(x, t)) +
             "\n";
    write_file(fs::path(opt.out_dir) / "oracle.csv", s);
    std::cout << "oracle: " << points.size() << " queries\n";
    return 0;
}

int cmd_crosscheck(const RunConfig& cfg, const CliOptions& opt) {
    Profile data = sample(cfg.model, cfg.flux, 0);
    FrontSolution sol = solve(cfg.flux, data);
    VariationalProblem vp = variational_from(cfg, data);

    double t_max = 1.0;
    for (double t : cfg.times) t_max = std::max(t_max, t);
    Rng rng(splitmix64(cfg.seed));
    int mismatches = 0;
    std::string s = "x,t,fronttrack,hopflax,match\n";
    int produced = 0;
    while (produced < cfg.crosscheck_points) {
        double x = rng.uniform(cfg.model.window_lo - 1.0, cfg.model.window_hi + 1.0);
        double t = rng.uniform(1e-3, t_max);
        bool near_front = false;
        for (int id : sol.alive_ids(t)) {
            if (std::fabs(sol.fronts[static_cast<std::size_t>(id)].position(t) - x) < 1e-9) {
                near_front = true;
                break;
            }
        }
        if (near_front) continue;
        int a = sol.query(x, t);
        int b = vp.query(x, t);
        if (a != b) ++mismatches;
        s += format_double(x) + "," + format_double(t) + "," + std::to_string(a) + "," +
             std::to_string(b) + "," + (a == b ? "1" : "0") + "\n";
        ++produced;
    }
    write_file(fs::path(opt.out_dir) / "crosscheck.csv", s);
    write_file(fs::path(opt.out_dir) / "crosscheck_summary.json",
               "{\"points\":" + std::to_string(produced) +
                   ",\"mismatches\":" + std::to_string(mismatches) + "}\n");
    std::cout << "crosscheck: " << mismatches << " mismatches over " << produced
              << " points\n";
    return mismatches == 0 ? 0 : 1;
}

EnsembleSpec spec_from(const RunConfig& cfg) {
    EnsembleSpec spec;
    spec.model = cfg.model;
    spec.realizations = cfg.realizations;
    spec.times = cfg.times;
    spec.x_grid = cfg.x_grid;
    spec.max_order = cfg.max_order;
    spec.box_width = cfg.box_width;
    return spec;
}

int cmd_ensemble(const RunConfig& cfg, const CliOptions& opt) {
    EnsembleResult res = run_ensemble(spec_from(cfg), cfg.flux, cfg.workers);
    const PointEstimate& pe = res.points;
    const ShockEstimate& se = res.shocks;

    std::string s1 = "t,x,state,count,N\n";
    for (std::size_t ti = 0; ti < pe.times.size(); ++ti)
        for (std::size_t xi = 0; xi < pe.grid.size(); ++xi)
            for (int k = 1; k <= pe.M; ++k)
                s1 += format_double(pe.times[ti]) + "," + format_double(pe.grid[xi]) + "," +
                      std::to_string(k) + "," +
                      std::to_string(pe.count1(static_cast<int>(ti), static_cast<int>(xi), k)) +
                      "," + std::to_string(pe.N) + "\n";
    write_file(fs::path(opt.out_dir) / "points1.csv", s1);

    if (pe.max_order >= 2) {
        std::string s2 = "t,x,y,state1,state2,count,N\n";
        for (std::size_t ti = 0; ti < pe.times.size(); ++ti)
            for (std::size_t xi = 0; xi < pe.grid.size(); ++xi)
                for (std::size_t xj = xi + 1; xj < pe.grid.size(); ++xj)
                    for (int k1 = 1; k1 <= pe.M; ++k1)
                        for (int k2 = 1; k2 <= pe.M; ++k2) {
                            std::uint64_t n =
                                pe.count2(static_cast<int>(ti), static_cast<int>(xi),
                                          static_cast<int>(xj), k1, k2);
                            if (n == 0) continue;
                            s2 += format_double(pe.times[ti]) + "," +
                                  format_double(pe.grid[xi]) + "," +
                                  format_double(pe.grid[xj]) + "," + std::to_string(k1) + "," +
                                  std::to_string(k2) + "," + std::to_string(n) + "," +
                                  std::to_string(pe.N) + "\n";
                        }
        write_file(fs::path(opt.out_dir) / "points2.csv", s2);
    }

    std::string sh = "t,box_lo,box_hi,u,v,count,N\n";
    for (std::size_t ti = 0; ti < se.times.size(); ++ti)
        for (std::size_t b = 0; b < se.grid.size(); ++b)
            for (int u = 1; u <= se.M; ++u)
                for (int v = 1; v <= se.M; ++v) {
                    if (u == v) continue;
                    std::uint64_t n =
                        se.front_counts[(ti * se.grid.size() + b) *
                                            static_cast<std::size_t>(se.num_species()) +
                                        static_cast<std::size_t>(se.species_id(u, v))];
                    if (n == 0) continue;
                    sh += format_double(se.times[ti]) + "," + format_double(se.grid[b]) + "," +
                          format_double(se.grid[b] + se.width) + "," + std::to_string(u) + "," +
                          std::to_string(v) + "," + std::to_string(n) + "," +
                          std::to_string(se.N) + "\n";
                }
    write_file(fs::path(opt.out_dir) / "shocks1.csv", sh);

    std::size_t S = static_cast<std::size_t>(se.num_species());
    if (!se.pair_counts.empty()) {
        std::string p2 = "t,box1_lo,box2_lo,u1,v1,u2,v2,count,N\n";
        std::size_t G = se.grid.size();
        std::size_t P = G * (G - 1) / 2;
        for (std::size_t ti = 0; ti < se.times.size(); ++ti) {
            std::size_t p = 0;
            for (std::size_t bi = 0; bi < G; ++bi)
                for (std::size_t bj = bi + 1; bj < G; ++bj, ++p)
                    for (std::size_t a = 0; a < S; ++a)
                        for (std::size_t b = 0; b < S; ++b) {
                            std::uint64_t n = se.pair_counts[((ti * P + p) * S + a) * S + b];
                            if (n == 0) continue;
                            p2 += format_double(se.times[ti]) + "," +
                                  format_double(se.grid[bi]) + "," +
                                  format_double(se.grid[bj]) + "," +
                                  std::to_string(static_cast<int>(a) / se.M + 1) + "," +
                                  std::to_string(static_cast<int>(a) % se.M + 1) + "," +
                                  std::to_string(static_cast<int>(b) / se.M + 1) + "," +
                                  std::to_string(static_cast<int>(b) % se.M + 1) + "," +
                                  std::to_string(n) + "," + std::to_string(se.N) + "\n";
                        }
        }
        write_file(fs::path(opt.out_dir) / "pairs2.csv", p2);
    }

    std::string co = "t,width,u1,v1,u2,v2,count,N\n";
    for (std::size_t ti = 0; ti < se.times.size(); ++ti)
        for (int wi = 0; wi < 3; ++wi)
            for (std::size_t a = 0; a < S; ++a)
                for (std::size_t b = 0; b < S; ++b) {
                    std::uint64_t n =
                        se.coincident[((ti * 3 + static_cast<std::size_t>(wi)) * S + a) * S + b];
                    if (n == 0) continue;
                    int u1 = static_cast<int>(a) / se.M + 1, v1 = static_cast<int>(a) % se.M + 1;
                    int u2 = static_cast<int>(b) / se.M + 1, v2 = static_cast<int>(b) % se.M + 1;
                    co += format_double(se.times[ti]) + "," +
                          format_double(se.width / (1 << wi)) + "," + std::to_string(u1) + "," +
                          std::to_string(v1) + "," + std::to_string(u2) + "," +
                          std::to_string(v2) + "," + std::to_string(n) + "," +
                          std::to_string(se.N) + "\n";
                }
    write_file(fs::path(opt.out_dir) / "coincidence.csv", co);

    std::string ev;
    for (const EventRecord& r : res.events)
        ev += "{\"realization\":" + std::to_string(r.realization) + "," +
              event_json(r.event).substr(1) + "\n";
    write_file(fs::path(opt.out_dir) / "events.jsonl", ev);

    std::cout << "ensemble: N=" << pe.N << ", " << res.events.size() << " events archived\n";
    return 0;
}

int cmd_verify_h1(const RunConfig& cfg, const CliOptions& opt) {
    FrontSolution sol = solve_realization(cfg, 0);
    TransportCheck check = verify_transport(sol, cfg.times, cfg.x_grid);

    std::string s = "t,x,k,residual\n";
    for (std::size_t ti = 0; ti < check.times.size(); ++ti)
        for (std::size_t xi = 0; xi < check.xs.size(); ++xi)
            for (std::size_t k = 0; k < check.residuals[ti][xi].size(); ++k)
                s += format_double(check.times[ti]) + "," + format_double(check.xs[xi]) + "," +
                     std::to_string(k + 1) + "," +
                     format_double(check.residuals[ti][xi][k]) + "\n";
    write_file(fs::path(opt.out_dir) / "transport_residuals.csv", s);

    std::string ov = "t,k,x_lo,x_hi\n";
    for (const OverlapInterval& o : check.overlaps)
        ov += format_double(o.t) + "," + std::to_string(o.k) + "," + format_double(o.x_lo) +
              "," + format_double(o.x_hi) + "\n";
    write_file(fs::path(opt.out_dir) / "overlap.csv", ov);

    bool pre_ok = check.max_abs_residual_precollision == 0.0;
    bool breakdown = !check.overlaps.empty();
    bool pass = pre_ok && (opt.expect_breakdown ? breakdown : !breakdown);
    std::cout << "verify-h1: first collision t=" << format_double(check.first_collision)
              << ", pre-collision residual " << format_double(check.max_abs_residual_precollision)
              << ", " << check.overlaps.size() << " overlap interval(s) -> "
              << (pass ? "PASS" : "FAIL") << "\n";
    for (const OverlapInterval& o : check.overlaps)
        std::cout << "  overlap t=" << format_double(o.t) << " tails (" << o.k << ","
                  << o.k + 1 << ") on (" << format_double(o.x_lo) << ", "
                  << format_double(o.x_hi) << ")\n";
    return pass ? 0 : 1;
}

int cmd_verify_h2(const RunConfig& cfg, const CliOptions& opt) {
    int violations = 0;
    double max_balance = 0.0, max_stream = 0.0;
    bool balances = true;
    int realizations = cfg.model.kind == ProfileKind::deterministic ? 1 : cfg.realizations;

    std::vector<SetDisagreement> set_diff = compare_interaction_sets(cfg.flux);

    std::string per_species;
    std::string species_json;
    for (int i = 0; i < realizations; ++i) {
        FrontSolution sol = solve_realization(cfg, static_cast<std::uint64_t>(i));
        double t_hi = sol.events.empty() ? 1.0 : sol.events.back().time * 1.5;
        // bump supports must stay inside the solution horizon
        if (cfg.horizon != kInf) t_hi = std::min(t_hi, 0.5 * cfg.horizon);
        std::vector<BumpTestFunction> phis =
            seeded_bumps(cfg.model.window_lo - 1.0, cfg.model.window_hi + 1.0, 0.0, t_hi, 10,
                         cfg.seed + static_cast<std::uint64_t>(i));
        LedgerReport rep = ledger_verify(sol, phis);
        violations += static_cast<int>(rep.violations.size());
        max_balance = std::max(max_balance, rep.max_balance_residual);
        max_stream = std::max(max_stream, rep.max_stream_residual);
        for (const SpeciesLedger& e : rep.species) {
            balances = balances && e.balance_ok;
            if (i == 0) {
                per_species += "  species (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                               "): t0=" + std::to_string(e.births_t0) +
                               " created=" + std::to_string(e.created) +
                               " destroyed=" + std::to_string(e.destroyed) +
                               " alive=" + std::to_string(e.alive_end) +
                               (e.balance_ok ? " balanced" : " UNBALANCED") + "\n";
                if (!species_json.empty()) species_json += ",";
                species_json += "{\"u\":" + std::to_string(e.u) + ",\"v\":" +
                                std::to_string(e.v) + ",\"t0\":" + std::to_string(e.births_t0) +
                                ",\"created\":" + std::to_string(e.created) +
                                ",\"destroyed\":" + std::to_string(e.destroyed) +
                                ",\"alive\":" + std::to_string(e.alive_end) + ",\"balanced\":" +
                                (e.balance_ok ? "true" : "false") + "}";
            }
        }
    }

    bool pass = violations == 0 && balances && max_balance < 1e-9 && max_stream < 1e-9;
    std::string rep = "{\"realizations\":" + std::to_string(realizations) +
                      ",\"role_violations\":" + std::to_string(violations) +
                      ",\"ledger_balanced\":" + (balances ? "true" : "false") +
                      ",\"max_balance_residual\":" + format_double(max_balance) +
                      ",\"max_stream_residual\":" + format_double(max_stream) +
                      ",\"interaction_set_disagreements\":" + std::to_string(set_diff.size()) +
                      ",\"species\":[" + species_json + "]" +
                      ",\"pass\":" + (pass ? "true" : "false") + "}\n";
    write_file(fs::path(opt.out_dir) / "ledger.json", rep);

    std::cout << "verify-h2: " << realizations << " realization(s), " << violations
              << " role violations, max residual " << format_double(max_balance) << " -> "
              << (pass ? "PASS" : "FAIL") << "\n"
              << per_species;
    if (!set_diff.empty()) {
        std::cout << "note: growth-set case split disagrees with the brute-force "
                     "admissibility+catch-up enumeration at "
                  << set_diff.size()
                  << " entries (middles whose right pairing would up-skip a state); the "
                     "one-point case split is used, not the raw growth indicator:\n";
        for (const SetDisagreement& d : set_diff)
            std::cout << "  W" << d.which << "(" << d.u << "," << d.v << ") w=" << d.w
                      << " case_split=" << d.in_case_split << " brute=" << d.in_brute << "\n";
    }
    return pass ? 0 : 1;
}

int cmd_report(const RunConfig& cfg, const CliOptions& opt) {
    FrontSolution sol = solve_realization(cfg, 0);
    double t_end = cfg.horizon;
    if (t_end == kInf) {
        t_end = 1.0;
        for (const CollisionEvent& ev : sol.events) t_end = std::max(t_end, ev.time * 2.0);
        for (double t : cfg.times) t_end = std::max(t_end, t);
    }

    std::string pl = "front_id,u,v,t0,x0,t1,x1,speed\n";
    for (const Front& f : sol.fronts) {
        double t1 = std::min(f.death_time, t_end);
        pl += std::to_string(f.id) + "," + std::to_string(f.left) + "," +
              std::to_string(f.right) + "," + format_double(f.birth_time) + "," +
              format_double(f.birth_pos) + "," + format_double(t1) + "," +
              format_double(f.position(t1)) + "," + format_double(f.speed) + "\n";
    }
    write_file(fs::path(opt.out_dir) / "polylines.csv", pl);

    std::vector<double> times;
    for (double t : cfg.times)
        if (t > 0.0) times.push_back(t);
    TransportCheck check = verify_transport(sol, times, cfg.x_grid);
    std::string cdf = "t,x,k,F_solver,F_transported\n";
    for (std::size_t ti = 0; ti < times.size(); ++ti)
        for (std::size_t xi = 0; xi < cfg.x_grid.size(); ++xi)
            for (int k = 1; k < cfg.flux.num_states(); ++k) {
                int f_sol = tail_indicator(sol, cfg.x_grid[xi], times[ti], k);
                double f_tr =
                    f_sol - check.residuals[ti][xi][static_cast<std::size_t>(k - 1)];
                cdf += format_double(times[ti]) + "," + format_double(cfg.x_grid[xi]) + "," +
                       std::to_string(k) + "," + std::to_string(f_sol) + "," +
                       format_double(f_tr) + "\n";
            }
    write_file(fs::path(opt.out_dir) / "cdf_surfaces.csv", cdf);

    std::string ov = "t,k,x_lo,x_hi\n";
    for (const OverlapInterval& o : check.overlaps)
        ov += format_double(o.t) + "," + std::to_string(o.k) + "," + format_double(o.x_lo) +
              "," + format_double(o.x_hi) + "\n";
    write_file(fs::path(opt.out_dir) / "overlap.csv", ov);

    std::cout << "report: " << sol.fronts.size() << " polylines, " << check.overlaps.size()
              << " overlap interval(s)\n";
    return 0;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& cfg, const CliOptions& opt) {
    fs::create_directories(opt.out_dir);
    if (command == "solve") return cmd_solve(cfg, opt);
    if (command == "oracle") return cmd_oracle(cfg, opt);
    if (command == "crosscheck") return cmd_crosscheck(cfg, opt);
    if (command == "ensemble") return cmd_ensemble(cfg, opt);
    if (command == "verify-h1") return cmd_verify_h1(cfg, opt);
    if (command == "verify-h2") return cmd_verify_h2(cfg, opt);
    if (command == "report") return cmd_report(cfg, opt);
    raise(Errc::validation_error, "unknown command '" + command + "'");
}

}  // namespace polyshock
