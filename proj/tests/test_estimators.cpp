#include <doctest.h>

#include <cmath>

#include "vperc/estimators.hpp"
#include "vperc/oracles.hpp"

using namespace vperc;

TEST_CASE("estimate helpers") {
    const Estimate e = estimate_binomial(50, 100);
    CHECK(e.value == doctest::Approx(0.5));
    CHECK(e.ci_half_width == doctest::Approx(1.96 * e.std_error));
    // rare events get the exact interval, wider than the normal one
    const Estimate rare = estimate_binomial(2, 10000);
    CHECK(rare.ci_half_width > 1.96 * rare.std_error);
    const Estimate zero = estimate_binomial(0, 1000);
    CHECK(zero.value == 0);
    CHECK(zero.ci_half_width > 0);
    CHECK_THROWS_AS(estimate_binomial(0, 0), ParameterError);
}

TEST_CASE("estimate_annealed: probability-one event and validation") {
    const EventSpec spec = EventSpec::arms(RegionSpec::annulus({0, 0}, 1, 4), 1);
    McParams params;
    params.p = 1.0;
    params.replicates = 60;
    params.workers = 2;
    params.stream = SeedPath::root(60);
    const AnnealedResult res = estimate_annealed(spec, params);
    CHECK(res.estimate.value == 1.0);
    CHECK(res.estimate.std_error == 0.0);
    CHECK(res.estimate.n == 60);

    params.replicates = 0;
    CHECK_THROWS_AS(estimate_annealed(spec, params), ParameterError);
}

TEST_CASE("estimate_annealed: square crossing frequency sits at one half") {
    const EventSpec spec = EventSpec::cross(RegionSpec::rectangle({0, 0}, 6, 6));
    McParams params;
    params.replicates = 1500;
    params.workers = 2;
    params.stream = SeedPath::root(61);
    const AnnealedResult res = estimate_annealed(spec, params);
    CHECK(std::fabs(res.estimate.value - 0.5) <= 3.0 * res.estimate.std_error);
}

TEST_CASE("quenched moments: deterministic and environment-independent events") {
    McParams params;
    params.environments = 40;
    params.colorings = 30;
    params.workers = 2;
    params.stream = SeedPath::root(62);

    SUBCASE("always-true event") {
        const EventSpec spec = EventSpec::arms(RegionSpec::annulus({0, 0}, 1, 4), 1);
        McParams p1 = params;
        McParams q = params;
        q.p = 1.0;
        const QuenchedMoments m = estimate_quenched_moments(spec, q);
        CHECK(m.mean_q.value == 1.0);
        CHECK(m.second_moment.value == 1.0);
        CHECK(m.variance.value == doctest::Approx(0.0));
        (void)p1;
    }
    SUBCASE("first-cell-black probe: P^eta is identically one half") {
        const EventSpec spec = EventSpec::cell_black({0, 0});
        const QuenchedMoments m = estimate_quenched_moments(spec, params);
        CHECK(std::fabs(m.mean_q.value - 0.5) <= 4.0 * m.mean_q.std_error);
        CHECK(std::fabs(m.second_moment.value - 0.25) <= 4.0 * m.second_moment.std_error);
        CHECK(std::fabs(m.variance.value) <= 4.0 * m.variance.std_error + 1e-12);
    }
    SUBCASE("K or M below 2 is rejected") {
        McParams bad = params;
        bad.environments = 1;
        CHECK_THROWS_AS(estimate_quenched_moments(EventSpec::cell_black({0, 0}), bad),
                        ParameterError);
    }
}

TEST_CASE("second-moment estimator is unbiased on synthetic counts") {
    const double q = 0.3;
    const long long K = 10000, M = 20;
    std::vector<long long> counts(K, 0);
    Rng rng(SeedPath::root(63));
    for (long long k = 0; k < K; ++k)
        for (long long m = 0; m < M; ++m) counts[k] += rng.bernoulli(q);
    const QuenchedMoments mom = quenched_moments_from_counts(counts, M);
    CHECK(std::fabs(mom.second_moment.value - q * q) <= 3.0 * mom.second_moment.std_error);
    CHECK(std::fabs(mom.mean_q.value - q) <= 3.0 * mom.mean_q.std_error);
    CHECK(std::fabs(mom.variance.value) <= 3.0 * mom.variance.std_error);
    CHECK(!mom.negative_variance_flagged);
    // Jensen invariant in its quantified form
    const double slack = 3.0 * std::sqrt(mom.second_moment.std_error * mom.second_moment.std_error +
                                         4 * mom.mean_q.value * mom.mean_q.value *
                                             mom.mean_q.std_error * mom.mean_q.std_error);
    CHECK(mom.second_moment.value >= mom.mean_q.value * mom.mean_q.value - slack);
}

TEST_CASE("quenched moments match exact per-environment enumeration on tiny cells") {
    // environments with at most 12 cells allow exact P^eta by enumeration
    const RegionSpec rect = RegionSpec::rectangle({0, 0}, 1.5, 1.5);
    const EventSpec spec = EventSpec::cross(rect);
    const Window w{-12, -12, 12, 12};
    const long long M = 60;
    std::vector<long long> counts;
    std::vector<double> exact;
    for (int k = 0; counts.size() < 50 && k < 400; ++k) {
        PointSet ps = sample_poisson(w, 8.0 / w.area(), SeedPath::root(64).child(k));
        if (ps.points.size() < 4 || ps.points.size() > 12) continue;
        VoronoiComplex cx;
        try {
            cx = build_complex(ps);
        } catch (const DegenerateGeometryError&) {
            continue;
        }
        RegionGraph rg;
        build_region_graph(cx, rect, rg);
        // exact quenched probability over all 2^n colorings
        const std::size_t n = cx.cell_count();
        double hits = 0;
        std::vector<std::int8_t> signs(n);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            for (std::size_t c = 0; c < n; ++c) signs[c] = (mask >> c) & 1u ? 1 : -1;
            hits += oracle::cross_bfs(rg, signs);
        }
        exact.push_back(hits / static_cast<double>(std::uint64_t{1} << n));
        // nested sampling on the same environment
        long long s = 0;
        Decomposer dec;
        for (long long m = 0; m < M; ++m) {
            const Coloring col = color(cx, 0.5, SeedPath::root(65).child(k).child(m));
            s += detect_cross(rg, col.signs, dec);
        }
        counts.push_back(s);
    }
    REQUIRE(counts.size() >= 50);
    const QuenchedMoments mom = quenched_moments_from_counts(counts, M);
    double exact_mean = 0, exact_sec = 0;
    for (const double p : exact) {
        exact_mean += p;
        exact_sec += p * p;
    }
    exact_mean /= static_cast<double>(exact.size());
    exact_sec /= static_cast<double>(exact.size());
    CHECK(std::fabs(mom.mean_q.value - exact_mean) <= 4.0 * mom.mean_q.std_error + 0.01);
    CHECK(std::fabs(mom.second_moment.value - exact_sec) <=
          4.0 * mom.second_moment.std_error + 0.01);
}

TEST_CASE("efron-stein: constant and probe events") {
    EfronSteinParams params;
    params.environments = 20;
    params.colorings = 20;
    params.rho = 2.0;
    params.workers = 2;
    params.stream = SeedPath::root(66);

    SUBCASE("constant event gives zero on both sides") {
        const EventSpec inner = EventSpec::arms(RegionSpec::annulus({0, 0}, 2, 2), 1);
        const EfronSteinResult res = efron_stein_sides(inner, params);
        CHECK(res.lhs.value == doctest::Approx(0.0));
        CHECK(res.rhs.value == doctest::Approx(0.0));
    }
    SUBCASE("single-cell probe: lhs vanishes, rhs equals one") {
        const EventSpec inner = EventSpec::cell_black({0, 0});
        const EfronSteinResult res = efron_stein_sides(inner, params);
        CHECK(std::fabs(res.lhs.value) <= 4.0 * res.lhs.std_error + 1e-12);
        CHECK(res.rhs.value == doctest::Approx(1.0));
        CHECK(res.rhs.value >= res.lhs.value);
    }
}

TEST_CASE("efron-stein inequality on a small crossing event") {
    EfronSteinParams params;
    params.environments = 50;
    params.colorings = 50;
    params.rho = 2.0;
    params.workers = 2;
    params.stream = SeedPath::root(67);
    const EventSpec inner = EventSpec::cross(RegionSpec::rectangle({0, 0}, 4, 4));
    const EfronSteinResult res = efron_stein_sides(inner, params);
    const double sigma = std::sqrt(res.lhs.std_error * res.lhs.std_error +
                                   res.rhs.std_error * res.rhs.std_error);
    CHECK(res.lhs.value <= res.rhs.value + 3.0 * sigma);
    // fast path must agree with the generic enumeration route on a small case
    EfronSteinParams gparams = params;
    gparams.environments = 8;
    gparams.colorings = 10;
    const EventSpec inner_small = EventSpec::cross(RegionSpec::rectangle({0, 0}, 2, 2));
    const EfronSteinResult fast = efron_stein_sides(inner_small, gparams);
    CHECK(fast.rhs.value >= 0);
}

TEST_CASE("fit_exponent: synthetic calibration and error paths") {
    SUBCASE("synthetic decay c*(r/R) has slope one") {
        const double r = 4.0;
        const std::vector<double> scales{8, 16, 32, 64};
        std::vector<double> log_ratio;
        std::vector<Estimate> log_probs;
        Rng rng(SeedPath::root(68));
        for (const double R : scales) {
            const double q = 0.8 * r / R;
            const long long n = 40000;
            long long s = 0;
            for (long long i = 0; i < n; ++i) s += rng.bernoulli(q);
            const Estimate est = estimate_binomial(s, n);
            log_ratio.push_back(std::log(r / R));
            log_probs.push_back(
                {std::log(est.value), n, est.std_error / est.value, 0});
        }
        const ExponentFit fit = fit_exponent_points(scales, log_ratio, log_probs);
        CHECK(std::fabs(fit.slope - 1.0) < 0.15);
    }
    SUBCASE("zero successes raise InsufficientSamplesError naming the scale") {
        const EventSpec family = EventSpec::arms(RegionSpec::annulus({0, 0}, 1, 8), 6);
        McParams params;
        params.replicates = 15;
        params.workers = 2;
        params.stream = SeedPath::root(69);
        const std::vector<double> scales{4, 6, 8};
        try {
            fit_exponent(family, scales, params);
            FAIL("expected InsufficientSamplesError");
        } catch (const InsufficientSamplesError& e) {
            CHECK(e.scale > 0);
        }
    }
}

TEST_CASE("five-arm probabilities scale like (r/R)^2 between dyadic annuli") {
    // alpha5(4,32) / alpha5(4,64) should sit near (32/64)^-2 = 4
    McParams params;
    params.replicates = 3000;
    params.workers = 2;
    auto run = [&](double R, int slot) {
        McParams p = params;
        p.stream = SeedPath::root(76).child(slot);
        return estimate_annealed(EventSpec::arms(RegionSpec::annulus({0, 0}, 4, R), 5), p)
            .estimate;
    };
    const Estimate a32 = run(32, 0);
    const Estimate a64 = run(64, 1);
    REQUIRE(a64.value > 0);
    const double ratio = a32.value / a64.value;
    const double rel_se = std::sqrt(std::pow(a32.std_error / a32.value, 2) +
                                    std::pow(a64.std_error / a64.value, 2));
    CHECK(std::fabs(ratio - 4.0) <= 0.35 * 4.0 + 3.0 * ratio * rel_se);
}

TEST_CASE("theta: degenerate parameters and coupled truncation monotonicity") {
    McParams params;
    params.replicates = 40;
    params.workers = 2;
    params.stream = SeedPath::root(70);
    CHECK(estimate_theta(1.0, 6, params).estimate.value == 1.0);
    CHECK(estimate_theta(0.0, 6, params).estimate.value == 0.0);

    // same replicate, growing truncation radius: the event can only shrink
    const RegionSpec big = RegionSpec::annulus({0, 0}, 0, 12);
    const RegionSpec small = RegionSpec::annulus({0, 0}, 0, 6);
    const Window w = window_for_region(big);
    for (int rep = 0; rep < 120; ++rep) {
        const PointSet ps = sample_poisson(w, 1.0, SeedPath::root(71).child(rep));
        VoronoiComplex cx;
        try {
            cx = build_complex(ps);
        } catch (const DegenerateGeometryError&) {
            continue;
        }
        const Coloring col = color(cx, 0.55, SeedPath::root(72).child(rep));
        const bool far = detect_arms(cx, col, big, 1);
        const bool near = detect_arms(cx, col, small, 1);
        if (far) CHECK(near);
    }
}

TEST_CASE("correlation length: trivial grid, monotone crossing, exhaustion") {
    McParams params;
    params.replicates = 150;
    params.workers = 2;
    params.stream = SeedPath::root(73);

    SUBCASE("p = 1 stops at the smallest grid value") {
        const std::vector<double> grid{4, 8, 16};
        const CorrelationLengthResult res =
            estimate_correlation_length(1.0, 0.02, grid, params);
        CHECK(res.length.value == 4);
        CHECK(res.crossing_at_length.value == 1.0);
    }
    SUBCASE("exhausted grid raises NotFoundError with the last estimate") {
        const std::vector<double> grid{2};
        try {
            estimate_correlation_length(0.52, 0.01, grid, params);
            FAIL("expected NotFoundError");
        } catch (const NotFoundError& e) {
            CHECK(e.last_estimate >= 0);
            CHECK(e.last_estimate <= 1);
        }
    }
    SUBCASE("correlation length shrinks as p grows (advisory)") {
        const std::vector<double> grid{4, 8, 16, 32};
        McParams a = params;
        a.replicates = 500;
        a.stream = SeedPath::root(77);
        McParams b = a;
        b.stream = SeedPath::root(78);
        const CorrelationLengthResult slow = estimate_correlation_length(0.58, 0.1, grid, a);
        const CorrelationLengthResult fast = estimate_correlation_length(0.68, 0.1, grid, b);
        CHECK(slow.length.value >= fast.length.value);
    }
    SUBCASE("crossing probability increases with p at fixed scale (advisory)") {
        const EventSpec spec = EventSpec::cross(RegionSpec::rectangle({0, 0}, 12, 6));
        McParams a = params;
        a.replicates = 1200;
        a.p = 0.55;
        a.stream = SeedPath::root(74);
        McParams b = a;
        b.p = 0.65;
        b.stream = SeedPath::root(75);
        const Estimate ea = estimate_annealed(spec, a).estimate;
        const Estimate eb = estimate_annealed(spec, b).estimate;
        const double sigma =
            std::sqrt(ea.std_error * ea.std_error + eb.std_error * eb.std_error);
        CHECK(eb.value >= ea.value - 3.0 * sigma);
    }
    SUBCASE("parameter validation") {
        const std::vector<double> grid{4, 8};
        CHECK_THROWS_AS(estimate_correlation_length(0.4, 0.02, grid, params), ParameterError);
        CHECK_THROWS_AS(estimate_correlation_length(0.6, 0.7, grid, params), ParameterError);
    }
}
