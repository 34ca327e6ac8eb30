#include "vperc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vperc/parallel.hpp"

namespace vperc {

namespace {

double betacf(double a, double b, double x) {
    const int maxit = 300;
    const double eps = 3e-14, fpmin = 1e-300;
    const double qab = a + b, qap = a + 1, qam = a - 1;
    double c = 1, d = 1 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1 / d;
    double h = d;
    for (int m = 1; m <= maxit; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1) < eps) break;
    }
    return h;
}

double inc_beta(double a, double b, double x) {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    const double bt =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                 b * std::log1p(-x));
    if (x < (a + 1) / (a + b + 2)) return bt * betacf(a, b, x) / a;
    return 1 - bt * betacf(b, a, 1 - x) / b;
}

double qbeta(double target, double a, double b) {
    double lo = 0, hi = 1;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inc_beta(a, b, mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double jackknife_se(std::span<const double> leave_one_out) {
    const std::size_t k = leave_one_out.size();
    if (k < 2) return 0;
    double mean = 0;
    for (const double x : leave_one_out) mean += x;
    mean /= static_cast<double>(k);
    double ss = 0;
    for (const double x : leave_one_out) ss += (x - mean) * (x - mean);
    return std::sqrt((static_cast<double>(k) - 1) / static_cast<double>(k) * ss);
}

Estimate with_ci(double value, long long n, double se) {
    return {value, n, se, 1.96 * se};
}

// Per-thread scratch shared by the replicate loops.
struct ReplicateCtx {
    ComplexBuilder builder;
    VoronoiComplex complex;
    PointSet points;
    Decomposer dec;
    std::vector<std::int8_t> signs;
};

// Sample + build, redrawing the environment if the geometry degenerates.
void build_environment(ReplicateCtx& ctx, const Window& window, double intensity,
                       const SeedPath& rep) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        try {
            ctx.points = sample_poisson(window, intensity, rep.child("pts").child(attempt));
            ctx.builder.build(ctx.points, ctx.complex);
            return;
        } catch (const DegenerateGeometryError&) {
            if (attempt >= 64) throw;
        }
    }
}

}  // namespace

namespace detail {
void fill_signs(Rng& rng, double p, std::span<std::int8_t> signs) {
    for (auto& s : signs) s = rng.uniform() < p ? std::int8_t{1} : std::int8_t{-1};
}
}  // namespace detail

Estimate estimate_from_sums(long long sum, long long sum_sq, long long n) {
    if (n < 1) throw ParameterError("estimate needs n >= 1");
    const double mean = static_cast<double>(sum) / static_cast<double>(n);
    double se = 0;
    if (n > 1) {
        const double var =
            std::max(0.0, (static_cast<double>(sum_sq) - n * mean * mean) / (n - 1.0));
        se = std::sqrt(var / static_cast<double>(n));
    }
    return with_ci(mean, n, se);
}

Estimate estimate_binomial(long long successes, long long n) {
    if (n < 1) throw ParameterError("estimate needs n >= 1");
    const double p = static_cast<double>(successes) / static_cast<double>(n);
    const double se = std::sqrt(std::max(0.0, p * (1 - p) / static_cast<double>(n)));
    Estimate est = with_ci(p, n, se);
    if (successes < 30) {
        const double nd = static_cast<double>(n);
        const double sd = static_cast<double>(successes);
        const double lo = successes == 0 ? 0.0 : qbeta(0.025, sd, nd - sd + 1);
        const double hi =
            successes == n ? 1.0 : qbeta(0.975, sd + 1, nd - sd);
        est.ci_half_width = std::max(p - lo, hi - p);
    }
    return est;
}

AnnealedResult estimate_annealed(const EventSpec& spec, const McParams& params) {
    if (params.replicates < 1) throw ParameterError("replicates must be >= 1");
    if (!(params.p >= 0 && params.p <= 1)) throw ParameterError("p must lie in [0,1]");
    const Window window = window_for_region(spec.support());
    const long long n = params.replicates;

    std::vector<std::int8_t> value(n, 0);
    std::vector<std::uint8_t> kept(n, 0);
    run_indexed(n, params.workers, [&](long long i) {
        thread_local ReplicateCtx ctx;
        const SeedPath rep = params.stream.child(static_cast<std::uint64_t>(i));
        try {
            build_environment(ctx, window, params.intensity, rep);
            const Coloring col = color(ctx.complex, params.p, rep.child("col"));
            const double v =
                evaluate_event(ctx.complex, col, ctx.points, spec, {.discard_boundary_flagged = true});
            value[i] = static_cast<std::int8_t>(v);
            kept[i] = 1;
        } catch (const ReplicateDiscard&) {
            kept[i] = 0;
        }
    });

    long long sum = 0, sum_sq = 0, n_kept = 0;
    bool binary = true;
    for (long long i = 0; i < n; ++i) {
        if (!kept[i]) continue;
        ++n_kept;
        sum += value[i];
        sum_sq += value[i] * value[i];
        if (value[i] < 0) binary = false;
    }
    if (n_kept < 1) throw ParameterError("all replicates were discarded");

    AnnealedResult res;
    res.discarded = n - n_kept;
    res.estimate = (binary && spec.kind != EventKind::Circuit)
                       ? estimate_binomial(sum, n_kept)
                       : estimate_from_sums(sum, sum_sq, n_kept);
    return res;
}

QuenchedMoments quenched_moments_from_counts(std::span<const long long> successes, long long M) {
    const auto K = static_cast<long long>(successes.size());
    if (K < 2 || M < 2)
        throw ParameterError("quenched moments need K >= 2 environments and M >= 2 colorings");
    const double Md = static_cast<double>(M);
    const double Kd = static_cast<double>(K);

    std::vector<double> f(K), q(K);
    for (long long k = 0; k < K; ++k) {
        const double s = static_cast<double>(successes[k]);
        f[k] = s / Md;
        q[k] = s * (s - 1) / (Md * (Md - 1));
    }
    const double T = tree_sum(f);
    const double Q = tree_sum(q);
    std::vector<double> f2(K);
    for (long long k = 0; k < K; ++k) f2[k] = f[k] * f[k];
    const double F2 = tree_sum(f2);

    const double mean = T / Kd;
    const double second = Q / Kd;
    const double pair = (T * T - F2) / (Kd * (Kd - 1));
    const double variance = second - pair;

    std::vector<double> jk_mean(K), jk_sec(K), jk_pair(K), jk_var(K);
    const double K1 = Kd - 1;
    for (long long k = 0; k < K; ++k) {
        const double Ti = T - f[k];
        jk_mean[k] = Ti / K1;
        jk_sec[k] = (Q - q[k]) / K1;
        jk_pair[k] = K >= 3 ? (Ti * Ti - (F2 - f2[k])) / (K1 * (K1 - 1)) : pair;
        jk_var[k] = jk_sec[k] - jk_pair[k];
    }

    QuenchedMoments m;
    m.environments = K;
    m.colorings = M;
    m.mean_q = with_ci(mean, K * M, jackknife_se(jk_mean));
    m.second_moment = with_ci(second, K, jackknife_se(jk_sec));
    m.annealed_sq = with_ci(pair, K, jackknife_se(jk_pair));
    m.variance = with_ci(variance, K, jackknife_se(jk_var));
    m.negative_variance_flagged = m.variance.value < -3.0 * m.variance.std_error;
    return m;
}

QuenchedMoments estimate_quenched_moments(const EventSpec& spec, const McParams& params) {
    const long long K = params.environments;
    const long long M = params.colorings;
    if (K < 2 || M < 2)
        throw ParameterError("quenched moments need K >= 2 environments and M >= 2 colorings");
    if (spec.kind == EventKind::Circuit)
        throw ParameterError("quenched moments need an indicator-valued event");
    const Window window = window_for_region(spec.support());

    std::vector<long long> counts(K, -1);
    run_indexed(K, params.workers, [&](long long k) {
        thread_local ReplicateCtx ctx;
        const SeedPath env = params.stream.child(static_cast<std::uint64_t>(k));
        try {
            build_environment(ctx, window, params.intensity, env);
            const VoronoiComplex& cx = ctx.complex;
            ctx.signs.resize(cx.cell_count());

            long long s = 0;
            const SeedPath cols = env.child("col");
            if (spec.kind == EventKind::Cross || spec.kind == EventKind::Arms) {
                RegionGraph rg;
                build_region_graph(cx, spec.region, rg, {.discard_boundary_flagged = true});
                for (long long m = 0; m < M; ++m) {
                    Rng rng(cols.child(static_cast<std::uint64_t>(m)));
                    detail::fill_signs(rng, params.p, ctx.signs);
                    const bool hit = spec.kind == EventKind::Cross
                                         ? detect_cross(rg, ctx.signs, ctx.dec)
                                         : detect_arms(rg, ctx.signs, spec.j, ctx.dec);
                    s += hit;
                }
            } else if (spec.kind == EventKind::CellBlack) {
                const std::uint32_t cell = cx.cell_of(spec.site);
                for (long long m = 0; m < M; ++m) {
                    Rng rng(cols.child(static_cast<std::uint64_t>(m)));
                    detail::fill_signs(rng, params.p, ctx.signs);
                    s += ctx.signs[cell] > 0;
                }
            } else {
                for (long long m = 0; m < M; ++m) {
                    const Coloring col =
                        color(cx, params.p, cols.child(static_cast<std::uint64_t>(m)));
                    s += evaluate_event(cx, col, ctx.points, spec,
                                        {.discard_boundary_flagged = true}) > 0;
                }
            }
            counts[k] = s;
        } catch (const ReplicateDiscard&) {
            counts[k] = -1;
        }
    });

    std::vector<long long> kept;
    kept.reserve(K);
    for (const long long s : counts)
        if (s >= 0) kept.push_back(s);
    if (static_cast<long long>(kept.size()) < 2)
        throw ParameterError("too many discarded environments");

    QuenchedMoments m = quenched_moments_from_counts(kept, M);
    m.discarded = K - static_cast<long long>(kept.size());
    return m;
}

ExponentFit fit_exponent_points(std::span<const double> scales, std::span<const double> log_ratio,
                                std::span<const Estimate> log_probs) {
    const std::size_t n = scales.size();
    if (n < 3) throw ParameterError("exponent fit needs at least 3 scales");
    double xbar = 0, ybar = 0;
    for (std::size_t i = 0; i < n; ++i) {
        xbar += log_ratio[i];
        ybar += log_probs[i].value;
    }
    xbar /= static_cast<double>(n);
    ybar /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (log_ratio[i] - xbar) * (log_ratio[i] - xbar);
        sxy += (log_ratio[i] - xbar) * (log_probs[i].value - ybar);
    }
    ExponentFit fit;
    fit.scales.assign(scales.begin(), scales.end());
    fit.log_probs.assign(log_probs.begin(), log_probs.end());
    fit.slope = sxy / sxx;
    const double intercept = ybar - fit.slope * xbar;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = log_probs[i].value - (intercept + fit.slope * log_ratio[i]);
        ss_res += e * e;
    }
    fit.slope_std_error = std::sqrt(ss_res / (static_cast<double>(n) - 2) / sxx);
    return fit;
}

ExponentFit fit_exponent(const EventSpec& family, std::span<const double> scales,
                         const McParams& params) {
    if (family.kind != EventKind::Arms || !family.region.is_annulus_kind())
        throw ParameterError("exponent fit expects an arm-event family");
    if (scales.size() < 3) throw ParameterError("exponent fit needs at least 3 scales");

    std::vector<double> log_ratio;
    std::vector<Estimate> log_probs;
    long long discarded = 0;
    for (std::size_t s = 0; s < scales.size(); ++s) {
        EventSpec spec = family;
        spec.region.R = scales[s];
        if (!(spec.region.r <= spec.region.R))
            throw ParameterError("scale below the family's inner radius");
        McParams per_scale = params;
        per_scale.stream = params.stream.child("scale").child(s);
        const AnnealedResult res = estimate_annealed(spec, per_scale);
        discarded += res.discarded;
        const double alpha = res.estimate.value;
        if (alpha <= 0)
            throw InsufficientSamplesError(
                "no successes at scale R=" + std::to_string(scales[s]), scales[s]);
        log_ratio.push_back(std::log(spec.region.r / scales[s]));
        log_probs.push_back(with_ci(std::log(alpha), res.estimate.n,
                                    res.estimate.std_error / alpha));
    }
    ExponentFit fit = fit_exponent_points(scales, log_ratio, log_probs);
    fit.discarded = discarded;
    return fit;
}

AnnealedResult estimate_theta(double p, double truncation_radius, McParams params) {
    if (!(truncation_radius >= 1)) throw ParameterError("theta needs R >= 1");
    params.p = p;
    const EventSpec spec =
        EventSpec::arms(RegionSpec::annulus({0, 0}, 0.0, truncation_radius), 1);
    return estimate_annealed(spec, params);
}

CorrelationLengthResult estimate_correlation_length(double p, double eps0,
                                                    std::span<const double> R_grid,
                                                    McParams params) {
    if (!(p > 0.5 && p <= 1)) throw ParameterError("correlation length needs p > 1/2");
    if (!(eps0 > 0 && eps0 < 0.5)) throw ParameterError("eps0 must lie in (0, 1/2)");
    if (R_grid.empty() || !std::is_sorted(R_grid.begin(), R_grid.end()))
        throw ParameterError("R grid must be increasing and non-empty");
    params.p = p;

    CorrelationLengthResult out;
    Estimate last;
    for (std::size_t i = 0; i < R_grid.size(); ++i) {
        const double R = R_grid[i];
        const EventSpec spec =
            EventSpec::cross(RegionSpec::rectangle({0, 0}, 2.0 * R, R));
        McParams per_scale = params;
        per_scale.stream = params.stream.child("grid").child(i);
        const AnnealedResult res = estimate_annealed(spec, per_scale);
        out.discarded += res.discarded;
        out.scan.emplace_back(R, res.estimate);
        last = res.estimate;
        if (last.value - last.ci_half_width >= 1.0 - eps0) {
            out.length = {R, last.n, 0, 0};
            out.crossing_at_length = last;
            return out;
        }
    }
    throw NotFoundError("correlation length: grid exhausted below the crossing threshold",
                        last.value, last.std_error);
}

}  // namespace vperc
