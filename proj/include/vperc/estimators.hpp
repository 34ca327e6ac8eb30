#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vperc/events.hpp"
#include "vperc/rng.hpp"

namespace vperc {

/// Point value with sampling uncertainty (95% normal CI unless the exact
/// binomial interval kicks in for rare events).
struct Estimate {
    double value = 0;
    long long n = 0;
    double std_error = 0;
    double ci_half_width = 0;
};

/// Estimate for a mean of values in {-1,0,1} given integer sums.
Estimate estimate_from_sums(long long sum, long long sum_sq, long long n);

/// Bernoulli frequency; exact Clopper-Pearson half-width when successes < 30.
Estimate estimate_binomial(long long successes, long long n);

struct McParams {
    double intensity = 1.0;
    double p = 0.5;
    long long replicates = 0;
    long long environments = 0;  // K (nested estimators)
    long long colorings = 0;     // M (nested estimators)
    SeedPath stream;
    int workers = 1;
};

struct AnnealedResult {
    Estimate estimate;
    long long discarded = 0;
};

/// Fresh environment and fresh coloring per replicate; value is the mean of the
/// event value. Discarded (safe-zone-violating) replicates are excluded and counted.
AnnealedResult estimate_annealed(const EventSpec& spec, const McParams& params);

struct QuenchedMoments {
    Estimate mean_q;         // E[P^eta[A]]
    Estimate second_moment;  // E[P^eta[A]^2], unbiased S(S-1)/(M(M-1))
    Estimate annealed_sq;    // (E[P^eta[A]])^2, unbiased over environment pairs
    Estimate variance;       // second_moment - annealed_sq
    long long environments = 0;
    long long colorings = 0;
    bool negative_variance_flagged = false;
    long long discarded = 0;
};

/// Nested Monte Carlo: K environments x M colorings, jackknife-over-environment
/// standard errors. Requires an indicator-valued event.
QuenchedMoments estimate_quenched_moments(const EventSpec& spec, const McParams& params);

/// Core moment algebra on per-environment success counts (testable directly).
QuenchedMoments quenched_moments_from_counts(std::span<const long long> successes, long long M);

struct EfronSteinParams {
    double intensity = 1.0;
    double p = 0.5;
    double rho = 2.0;
    long long environments = 0;
    long long colorings = 0;
    SeedPath stream;
    int workers = 1;
    int recoloring_cap = kDefaultRecoloringCap;
};

struct EfronSteinResult {
    Estimate lhs;  // Var(P^eta[E])
    Estimate rhs;  // sum over grid squares of E[P^eta[Piv_S(E)]^2]
    long long discarded = 0;
    int grid_squares = 0;
};

/// Both sides of the martingale variance bound over the rho-grid.
EfronSteinResult efron_stein_sides(const EventSpec& inner, const EfronSteinParams& params);

struct ExponentFit {
    std::vector<double> scales;
    std::vector<Estimate> log_probs;  // ln(alpha-hat) with delta-method errors
    double slope = 0;
    double slope_std_error = 0;
    long long discarded = 0;
};

/// Least squares of ln(alpha-hat) on ln(r/R); residual-based slope error.
ExponentFit fit_exponent_points(std::span<const double> scales, std::span<const double> log_ratio,
                                std::span<const Estimate> log_probs);

/// Annealed estimates of `family` (an arms event whose region R is replaced by
/// each scale), then the regression above. Zero successes at a scale raise
/// InsufficientSamplesError naming it.
ExponentFit fit_exponent(const EventSpec& family, std::span<const double> scales,
                         const McParams& params);

/// Frequency of {origin cell black and connected to the boundary of B_R}.
AnnealedResult estimate_theta(double p, double truncation_radius, McParams params);

struct CorrelationLengthResult {
    Estimate length;                                     // the grid scale found
    Estimate crossing_at_length;                         // P-hat[Cross(2R,R)] there
    std::vector<std::pair<double, Estimate>> scan;       // per visited grid R
    long long discarded = 0;
};

/// Smallest grid R with P-hat_p[Cross(2R,R)] >= 1 - eps0 and CI clear of the
/// threshold; NotFoundError (with the last estimate) when the grid runs out.
CorrelationLengthResult estimate_correlation_length(double p, double eps0,
                                                    std::span<const double> R_grid,
                                                    McParams params);

namespace detail {
void fill_signs(Rng& rng, double p, std::span<std::int8_t> signs);
}

}  // namespace vperc
