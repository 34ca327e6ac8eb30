#include "vperc/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "vperc/estimators.hpp"
#include "vperc/experiments.hpp"
#include "vperc/oracles.hpp"
#include "vperc/parallel.hpp"
#include "vperc/predicates.hpp"

namespace vperc::accept {

namespace {

constexpr std::uint64_t kSuiteSeed = 20240917;

std::string fmt(double v) { return format_double(v); }

struct Logger {
    std::ostream& out;
    std::vector<CriterionResult>& results;

    void report(const std::string& id, const std::string& name, bool hard, Verdict v,
                const std::string& detail) {
        results.push_back({id, name, hard, v, detail});
        const char* tag = v == Verdict::Pass ? "PASS" : (v == Verdict::Warn ? "WARN" : "FAIL");
        out << "[" << tag << "] " << id << " " << name << (hard ? " [hard] " : " [soft] ")
            << detail << "\n";
        out.flush();
    }
};

Verdict banded(double value, double target, double tol) {
    const double d = std::fabs(value - target);
    if (d <= tol) return Verdict::Pass;
    if (d <= 2 * tol) return Verdict::Warn;
    return Verdict::Fail;
}

// ---- criterion 1: geometry correctness ------------------------------------

void criterion_geometry(Logger& log, bool full) {
    const int sets = full ? 100 : 20;
    const int npts = 50;
    int bad_circle = 0, bad_euler = 0, bad_adj = 0;
    for (int s = 0; s < sets; ++s) {
        Rng rng(SeedPath::root(kSuiteSeed).child("c1").child(s));
        const Window window{0, 0, 20, 20};
        PointSet ps;
        ps.window = window;
        ps.intensity = npts / window.area();
        for (int i = 0; i < npts; ++i)
            ps.points.push_back({rng.uniform(0, 20), rng.uniform(0, 20)});

        const Triangulation tri = triangulate(ps.points, window);
        long long n_edges = 0, n_tris = 0;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        for (const auto& t : tri.tris) {
            if (!tri.is_real(t)) continue;
            ++n_tris;
            for (int k = 0; k < 3; ++k) {
                const Vec2 a = tri.pts[t.v[0]], b = tri.pts[t.v[1]], c = tri.pts[t.v[2]];
                (void)k;
                for (std::uint32_t q = 0; q < tri.n_real; ++q) {
                    if (q == t.v[0] || q == t.v[1] || q == t.v[2]) continue;
                    const Vec2 d = tri.pts[q];
                    if (in_circle(a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y) > 0) ++bad_circle;
                }
                break;  // circle test once per triangle
            }
            for (int k = 0; k < 3; ++k) {
                const std::uint32_t u = t.v[k], v = t.v[(k + 1) % 3];
                edges.emplace_back(std::min(u, v), std::max(u, v));
            }
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        n_edges = static_cast<long long>(edges.size());
        if (npts - n_edges + (n_tris + 1) != 2) ++bad_euler;

        const VoronoiComplex cx = build_complex(ps);
        for (std::uint32_t i = 0; i < cx.cell_count() && !bad_adj; ++i) {
            for (const std::uint32_t j : cx.neighbors(i)) {
                if (j == i) ++bad_adj;
                const auto nb = cx.neighbors(j);
                if (std::find(nb.begin(), nb.end(), i) == nb.end()) ++bad_adj;
            }
        }
    }
    const bool ok = bad_circle == 0 && bad_euler == 0 && bad_adj == 0;
    log.report("C01", "geometry: empty circumcircle + Euler relation", true,
               ok ? Verdict::Pass : Verdict::Fail,
               "sets=" + std::to_string(sets) + " circle_violations=" +
                   std::to_string(bad_circle) + " euler_violations=" + std::to_string(bad_euler) +
                   " adjacency_violations=" + std::to_string(bad_adj));
}

// ---- criterion 2: arm detector vs disjoint-path oracle ---------------------

void criterion_arm_oracle(Logger& log, bool full, int workers) {
    const int target = full ? 520 : 120;
    std::vector<std::uint8_t> agree(target, 0);
    std::vector<std::uint8_t> done(target, 0);
    run_indexed(target, workers, [&](long long inst) {
        const SeedPath base = SeedPath::root(kSuiteSeed).child("c2").child(inst);
        Rng prng(base.child("params"));
        const RegionKind kinds[4] = {RegionKind::Annulus, RegionKind::HalfAnnulus,
                                     RegionKind::QuarterAnnulus,
                                     RegionKind::QuarterComplementAnnulus};
        const RegionKind kind = kinds[inst % 4];
        const int j = 1 + static_cast<int>(inst / 4) % 4;
        for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
            const double r = prng.uniform(0.8, 2.0);
            const double R = r + prng.uniform(1.2, 2.6);
            const double intensity = prng.uniform(0.3, 1.1);
            const int orientation = static_cast<int>(prng.next_u64() % 4);
            const RegionSpec region = RegionSpec::annulus({0, 0}, r, R, kind, orientation);
            try {
                const PointSet ps = sample_poisson(window_for_region(region), intensity,
                                                   base.child("pts").child(attempt));
                const VoronoiComplex cx = build_complex(ps);
                RegionGraph rg;
                build_region_graph(cx, region, rg);
                if (rg.size() < 3 || rg.size() > 25) continue;
                const double p_values[3] = {0.25, 0.5, 0.75};
                const Coloring col = color(cx, p_values[(inst / 16) % 3],
                                           base.child("col").child(attempt));
                Decomposer dec;
                const bool fast_ans = detect_arms(rg, col.signs, j, dec);
                const bool oracle_ans = oracle::arms_disjoint_paths(rg, col.signs, j);
                agree[inst] = fast_ans == oracle_ans;
                done[inst] = 1;
                return;
            } catch (const DegenerateGeometryError&) {
                continue;
            }
        }
    });
    int n = 0, ok = 0;
    for (int i = 0; i < target; ++i) {
        if (!done[i]) continue;
        ++n;
        ok += agree[i];
    }
    const bool pass = n >= (full ? 500 : 100) && ok == n;
    log.report("C02", "arm detector agrees with disjoint-path oracle", true,
               pass ? Verdict::Pass : Verdict::Fail,
               "instances=" + std::to_string(n) + " agree=" + std::to_string(ok));
}

// ---- criterion 3: pivotal vs exhaustive enumeration ------------------------

void criterion_pivotal_oracle(Logger& log, bool full, int workers) {
    const int target = full ? 210 : 60;
    std::vector<std::uint8_t> agree(target, 0);
    std::vector<std::uint8_t> done(target, 0);
    run_indexed(target, workers, [&](long long inst) {
        const SeedPath base = SeedPath::root(kSuiteSeed).child("c3").child(inst);
        Rng prng(base.child("params"));
        const Window window{-12, -12, 12, 12};
        for (std::uint64_t attempt = 0; attempt < 96; ++attempt) {
            const double intensity = prng.uniform(0.012, 0.022);
            try {
                const PointSet ps =
                    sample_poisson(window, intensity, base.child("pts").child(attempt));
                if (ps.points.size() < 4 || ps.points.size() > 12) continue;
                const VoronoiComplex cx = build_complex(ps);
                EventSpec inner = (inst % 3 == 0)
                                      ? EventSpec::arms(RegionSpec::annulus({0, 0}, 0.6, 1.9),
                                                        1 + static_cast<int>(inst / 3) % 2)
                                      : EventSpec::cross(RegionSpec::rectangle(
                                            {0, 0}, prng.uniform(1.0, 1.8), prng.uniform(1.0, 1.8)));
                const double cxr = prng.uniform(-1.5, 0.5);
                const double cyr = prng.uniform(-1.5, 0.5);
                const Box square{cxr, cyr, cxr + prng.uniform(0.8, 2.0),
                                 cyr + prng.uniform(0.8, 2.0)};
                const std::vector<std::uint32_t> cells = cells_with_nuclei_in(cx, square);
                const Coloring col = color(cx, 0.5, base.child("col").child(attempt));
                const bool fast_ans = is_quenched_pivotal(cx, col, cells, inner);
                const bool oracle_ans = oracle::pivotal_exhaustive(cx, col, cells, inner);
                agree[inst] = fast_ans == oracle_ans;
                done[inst] = 1;
                return;
            } catch (const DegenerateGeometryError&) {
                continue;
            }
        }
    });
    int n = 0, ok = 0;
    for (int i = 0; i < target; ++i) {
        if (!done[i]) continue;
        ++n;
        ok += agree[i];
    }
    const bool pass = n >= (full ? 200 : 50) && ok == n;
    log.report("C03", "pivotal detector agrees with exhaustive oracle", true,
               pass ? Verdict::Pass : Verdict::Fail,
               "instances=" + std::to_string(n) + " agree=" + std::to_string(ok));
}

// ---- criterion 4: crossing symmetry ----------------------------------------

void criterion_cross_symmetry(Logger& log, bool full, int workers) {
    const std::vector<double> radii = full ? std::vector<double>{16, 32, 64}
                                           : std::vector<double>{8, 16};
    const long long reps = full ? 10000 : 2000;
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double R = radii[i];
        McParams params;
        params.replicates = reps;
        params.workers = workers;
        params.stream = SeedPath::root(kSuiteSeed).child("c4-square").child(i);
        const AnnealedResult sq =
            estimate_annealed(EventSpec::cross(RegionSpec::rectangle({0, 0}, R, R)), params);
        const double dev = std::fabs(sq.estimate.value - 0.5);
        const bool sq_ok = dev <= 3.0 * sq.estimate.std_error;

        params.stream = SeedPath::root(kSuiteSeed).child("c4-long").child(i);
        const AnnealedResult lg = estimate_annealed(
            EventSpec::cross(RegionSpec::rectangle({0, 0}, 2 * R, R)), params);
        const bool lg_ok = lg.estimate.value > 0.05 && lg.estimate.value < 0.95;

        ok = ok && sq_ok && lg_ok;
        detail += "R=" + fmt(R) + ": P[Cross(R,R)]=" + fmt(sq.estimate.value) +
                  " (|dev|=" + fmt(dev) + "<=3se=" + fmt(3 * sq.estimate.std_error) + ")" +
                  " P[Cross(2R,R)]=" + fmt(lg.estimate.value) + "; ";
    }
    log.report("C04", "critical crossing symmetry and RSW window", true,
               ok ? Verdict::Pass : Verdict::Fail, detail);
}

// ---- criterion 5: universal arm exponents ----------------------------------

void criterion_exponents(Logger& log, bool full, int workers) {
    struct Family {
        const char* name;
        RegionKind kind;
        int j;
        double target, tol;
        std::vector<double> scales;
    };
    const double r = full ? 4.0 : 2.0;
    const long long reps = full ? 100000 : 4000;
    std::vector<Family> families;
    if (full) {
        families.push_back({"alpha2+ (half-plane 2-arm)", RegionKind::HalfAnnulus, 2, 1.0, 0.3,
                            {16, 32, 64, 128}});
        families.push_back({"alpha3+ (half-plane 3-arm)", RegionKind::HalfAnnulus, 3, 2.0, 0.4,
                            {16, 32, 64, 128}});
        // alpha5 at R=128 would need ~10x the budget, so that scale is dropped.
        families.push_back({"alpha5 (plane 5-arm)", RegionKind::Annulus, 5, 2.0, 0.4,
                            {16, 32, 64}});
    } else {
        families.push_back({"alpha2+ (half-plane 2-arm)", RegionKind::HalfAnnulus, 2, 1.0, 0.6,
                            {8, 16, 32}});
        families.push_back({"alpha3+ (half-plane 3-arm)", RegionKind::HalfAnnulus, 3, 2.0, 0.8,
                            {8, 16, 32}});
        families.push_back({"alpha5 (plane 5-arm)", RegionKind::Annulus, 5, 2.0, 0.8,
                            {8, 16, 32}});
    }
    for (std::size_t f = 0; f < families.size(); ++f) {
        const Family& fam = families[f];
        const long long fam_reps = (!full && fam.j == 5) ? 5 * reps : reps;
        McParams params;
        params.replicates = fam_reps;
        params.workers = workers;
        params.stream = SeedPath::root(kSuiteSeed).child("c5").child(f);
        const EventSpec family =
            EventSpec::arms(RegionSpec::annulus({0, 0}, r, fam.scales.back(), fam.kind), fam.j);
        std::string id = "C05" + std::string(1, static_cast<char>('a' + f));
        try {
            const ExponentFit fit = fit_exponent(family, fam.scales, params);
            const Verdict v = banded(fit.slope, fam.target, fam.tol);
            log.report(id, std::string("universal exponent: ") + fam.name, false, v,
                       "slope=" + fmt(fit.slope) + " target=" + fmt(fam.target) + "+-" +
                           fmt(fam.tol) + " (fit se=" + fmt(fit.slope_std_error) +
                           ", reps/scale=" + std::to_string(fam_reps) + ")");
        } catch (const InsufficientSamplesError& e) {
            log.report(id, std::string("universal exponent: ") + fam.name, false, Verdict::Fail,
                       std::string("insufficient samples: ") + e.what());
        }
    }
}

// ---- criterion 6: Efron-Stein inequality -----------------------------------

void criterion_efron_stein(Logger& log, bool full, int workers) {
    struct Case {
        const char* name;
        EventSpec inner;
    };
    std::vector<Case> cases;
    if (full) {
        cases.push_back({"Cross(8,8)", EventSpec::cross(RegionSpec::rectangle({0, 0}, 8, 8))});
        cases.push_back({"A1(2,8)", EventSpec::arms(RegionSpec::annulus({0, 0}, 2, 8), 1)});
    } else {
        cases.push_back({"Cross(5,5)", EventSpec::cross(RegionSpec::rectangle({0, 0}, 5, 5))});
        cases.push_back({"A1(1.5,5)", EventSpec::arms(RegionSpec::annulus({0, 0}, 1.5, 5), 1)});
    }
    const long long KM = full ? 200 : 60;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        EfronSteinParams params;
        params.rho = 2.0;
        params.environments = KM;
        params.colorings = KM;
        params.workers = workers;
        params.stream = SeedPath::root(kSuiteSeed).child("c6").child(i);
        const EfronSteinResult res = efron_stein_sides(cases[i].inner, params);
        const double sigma =
            std::sqrt(res.lhs.std_error * res.lhs.std_error +
                      res.rhs.std_error * res.rhs.std_error);
        const bool ok = res.lhs.value <= res.rhs.value + 3.0 * sigma;
        log.report("C06" + std::string(1, static_cast<char>('a' + i)),
                   std::string("Efron-Stein bound, inner=") + cases[i].name, true,
                   ok ? Verdict::Pass : Verdict::Fail,
                   "lhs=" + fmt(res.lhs.value) + " rhs=" + fmt(res.rhs.value) +
                       " 3sigma=" + fmt(3 * sigma) + " squares=" +
                       std::to_string(res.grid_squares));
    }
}

// ---- criterion 7: Jensen gap and second-moment ratio -----------------------

void criterion_moment_ratio(Logger& log, bool full, int workers) {
    const std::vector<int> js = {1, 4};
    const double r = full ? 4 : 2;
    const double R = full ? 64 : 16;
    const long long KM = full ? 300 : 80;
    for (std::size_t i = 0; i < js.size(); ++i) {
        McParams params;
        params.environments = KM;
        params.colorings = KM;
        params.workers = workers;
        params.stream = SeedPath::root(kSuiteSeed).child("c7").child(i);
        const EventSpec spec = EventSpec::arms(RegionSpec::annulus({0, 0}, r, R), js[i]);
        const QuenchedMoments m = estimate_quenched_moments(spec, params);
        const bool jensen_ok = m.variance.value >= -3.0 * m.variance.std_error;
        log.report("C07a-j" + std::to_string(js[i]), "Jensen direction (alpha~^2 >= alpha^2)",
                   true, jensen_ok ? Verdict::Pass : Verdict::Fail,
                   "variance=" + fmt(m.variance.value) + " se=" + fmt(m.variance.std_error));
        const double ratio = m.annealed_sq.value > 0
                                 ? m.second_moment.value / m.annealed_sq.value
                                 : std::numeric_limits<double>::infinity();
        const Verdict v =
            ratio <= 5.0 ? Verdict::Pass : (ratio <= 10.0 ? Verdict::Warn : Verdict::Fail);
        log.report("C07b-j" + std::to_string(js[i]), "second-moment ratio alpha~^2/alpha^2 <= 5",
                   false, v, "ratio=" + fmt(ratio) + " at (r,R)=(" + fmt(r) + "," + fmt(R) + ")");
    }
}

// ---- criterion 8: quantitative variance bound ------------------------------

void criterion_variance_bound(Logger& log, bool full, int workers) {
    const std::vector<double> radii = full ? std::vector<double>{16, 32, 64}
                                           : std::vector<double>{8, 16};
    const long long KM = full ? 200 : 60;
    const long long arm_reps = full ? 20000 : 4000;

    std::vector<double> variance(radii.size()), var_se(radii.size()), alpha4(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double R = radii[i];
        McParams qparams;
        qparams.environments = KM;
        qparams.colorings = KM;
        qparams.workers = workers;
        qparams.stream = SeedPath::root(kSuiteSeed).child("c8-var").child(i);
        const QuenchedMoments m = estimate_quenched_moments(
            EventSpec::cross(RegionSpec::rectangle({0, 0}, R, R)), qparams);
        variance[i] = m.variance.value;
        var_se[i] = m.variance.std_error;

        McParams aparams;
        aparams.replicates = arm_reps;
        aparams.workers = workers;
        aparams.stream = SeedPath::root(kSuiteSeed).child("c8-arm").child(i);
        const AnnealedResult a =
            estimate_annealed(EventSpec::arms(RegionSpec::annulus({0, 0}, 1, R), 4), aparams);
        alpha4[i] = a.estimate.value;
    }
    // The quenched variance at the fit scale concentrates below measurement
    // noise, so the fitted constant uses the upper confidence value of the fit;
    // a point fit of a statistically-zero quantity can land at C <= 0.
    const double C = (variance[0] + 3.0 * var_se[0]) /
                     (radii[0] * radii[0] * alpha4[0] * alpha4[0]);
    bool warn = false, fail = false;
    std::string detail = "C(fit at R=" + fmt(radii[0]) + ", upper 3-sigma)=" + fmt(C) + "; ";
    for (std::size_t i = 1; i < radii.size(); ++i) {
        const double bound = 3.0 * C * radii[i] * radii[i] * alpha4[i] * alpha4[i];
        detail += "R=" + fmt(radii[i]) + ": var=" + fmt(variance[i]) + " bound=" + fmt(bound) +
                  "; ";
        if (variance[i] > bound) warn = true;
        if (variance[i] > 2 * bound) fail = true;
    }
    log.report("C08", "variance bound Var(P^eta[Cross]) <= 3C R^2 alpha4(R)^2", false,
               fail ? Verdict::Fail : (warn ? Verdict::Warn : Verdict::Pass), detail);
}

// ---- criterion 9: quasi-multiplicativity -----------------------------------

void criterion_quasi_mult(Logger& log, bool full, int workers) {
    const std::vector<int> js = {1, 2, 4};
    const double r1 = full ? 4 : 2, r2 = full ? 16 : 6, r3 = full ? 64 : 18;
    const long long reps = full ? 10000 : 3000;
    for (std::size_t i = 0; i < js.size(); ++i) {
        const int j = js[i];
        auto run = [&](double a, double b, int slot) {
            McParams params;
            params.replicates = reps;
            params.workers = workers;
            params.stream = SeedPath::root(kSuiteSeed).child("c9").child(i * 8 + slot);
            return estimate_annealed(EventSpec::arms(RegionSpec::annulus({0, 0}, a, b), j),
                                     params)
                .estimate.value;
        };
        const double a13 = run(r1, r3, 0);
        const double a12 = run(r1, r2, 1);
        const double a23 = run(r2, r3, 2);
        const double ratio = a13 / (a12 * a23);
        const Verdict v = (ratio >= 1.0 / 20 && ratio <= 20) ? Verdict::Pass
                          : (ratio >= 1.0 / 40 && ratio <= 40) ? Verdict::Warn
                                                               : Verdict::Fail;
        log.report("C09-j" + std::to_string(j), "quasi-multiplicativity ratio in [1/20, 20]",
                   false, v,
                   "alpha(" + fmt(r1) + "," + fmt(r3) + ")=" + fmt(a13) + " product=" +
                       fmt(a12 * a23) + " ratio=" + fmt(ratio));
    }
}

// ---- criterion 10: dense lemma ----------------------------------------------

void criterion_dense(Logger& log, bool full, int workers) {
    const double R = full ? 40 : 20;
    const double delta = 0.2;
    const long long envs = full ? 10000 : 500;
    McParams params;
    params.replicates = envs;
    params.workers = workers;
    params.stream = SeedPath::root(kSuiteSeed).child("c10");
    const AnnealedResult res = estimate_annealed(
        EventSpec::dense(RegionSpec::rectangle({0, 0}, R, R), delta), params);
    const double not_dense = 1.0 - res.estimate.value;
    const double bound = 10.0 / (delta * delta) * std::exp(-(delta * R) * (delta * R) / 2.0);
    const Verdict v = not_dense <= bound ? Verdict::Pass
                      : (not_dense <= 2 * bound ? Verdict::Warn : Verdict::Fail);
    log.report("C10", "dense-event probability bound", false, v,
               "P[not Dense_" + fmt(delta) + "(B_" + fmt(R) + ")]=" + fmt(not_dense) +
                   " bound=" + fmt(bound) + " envs=" + std::to_string(envs));
}

// ---- criterion 11: theta scan -----------------------------------------------

void criterion_theta(Logger& log, bool full, int workers) {
    const double R = full ? 64 : 16;
    const long long reps = full ? 4000 : 1500;
    const std::vector<double> ps = full ? std::vector<double>{0.52, 0.54, 0.56, 0.58, 0.60}
                                        : std::vector<double>{0.54, 0.60};
    std::vector<Estimate> thetas(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        McParams params;
        params.replicates = reps;
        params.workers = workers;
        params.stream = SeedPath::root(kSuiteSeed).child("c11").child(i);
        thetas[i] = estimate_theta(ps[i], R, params).estimate;
    }
    bool positive = true, nondecreasing = true, fail = false;
    std::string detail;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        positive = positive && thetas[i].value > 0;
        detail += "theta(" + fmt(ps[i]) + ")=" + fmt(thetas[i].value) + " ";
        if (i) {
            const double sigma = std::sqrt(thetas[i].std_error * thetas[i].std_error +
                                           thetas[i - 1].std_error * thetas[i - 1].std_error);
            if (thetas[i].value < thetas[i - 1].value - 3 * sigma) nondecreasing = false;
            if (thetas[i].value < thetas[i - 1].value - 6 * sigma) fail = true;
        }
    }
    const Verdict v = fail || !positive ? Verdict::Fail
                      : (nondecreasing ? Verdict::Pass : Verdict::Warn);
    log.report("C11", "theta scan: positive and nondecreasing in p", false, v, detail);
}

// ---- criterion 12: determinism and worker invariance -----------------------

void criterion_determinism(Logger& log, bool) {
    nlohmann::json config = {
        {"experiment", "arm-prob"},
        {"master_seed", 424242},
        {"intensity", 1.0},
        {"p", 0.5},
        {"geometry", {{"variant", "plane"}, {"r", 2.0}, {"R", 8.0}, {"j", 2}}},
        {"budget", {{"replicates", 400}}},
        {"workers", 1}};
    const ResultRecord a = run_experiment(parse_config(config));
    const ResultRecord b = run_experiment(parse_config(config));
    config["workers"] = 8;
    const ResultRecord c = run_experiment(parse_config(config));
    const bool rerun_ok = a.to_csv() == b.to_csv();
    const bool workers_ok = a.to_csv() == c.to_csv();
    log.report("C12", "determinism and worker invariance", true,
               rerun_ok && workers_ok ? Verdict::Pass : Verdict::Fail,
               std::string("rerun_identical=") + (rerun_ok ? "yes" : "no") +
                   " workers_1_vs_8_identical=" + (workers_ok ? "yes" : "no"));
}

}  // namespace

bool SuiteResult::ok() const {
    for (const auto& c : criteria) {
        if (c.hard && c.verdict != Verdict::Pass) return false;
        if (!c.hard && c.verdict == Verdict::Fail) return false;
    }
    return true;
}

SuiteResult run_suite(bool full, int workers, std::ostream& log_stream) {
    SuiteResult suite;
    Logger log{log_stream, suite.criteria};
    const auto t0 = std::chrono::steady_clock::now();
    log_stream << "suite=" << (full ? "full" : "fast") << " workers=" << workers << "\n";

    criterion_geometry(log, full);
    criterion_arm_oracle(log, full, workers);
    criterion_pivotal_oracle(log, full, workers);
    criterion_cross_symmetry(log, full, workers);
    criterion_exponents(log, full, workers);
    criterion_efron_stein(log, full, workers);
    criterion_moment_ratio(log, full, workers);
    criterion_variance_bound(log, full, workers);
    criterion_quasi_mult(log, full, workers);
    criterion_dense(log, full, workers);
    criterion_theta(log, full, workers);
    criterion_determinism(log, full);

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log_stream << "suite " << (suite.ok() ? "PASSED" : "FAILED") << " in " << fmt(secs)
               << " s\n";
    return suite;
}

}  // namespace vperc::accept
