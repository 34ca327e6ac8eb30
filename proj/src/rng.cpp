#include "vperc/rng.hpp"

#include <cmath>

namespace vperc {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t ctr[4], std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t c1 = ctr[1];
    const std::uint32_t c3 = ctr[3];
    ctr[0] = hi1 ^ c1 ^ k0;
    ctr[1] = lo1;
    ctr[2] = hi0 ^ c3 ^ k1;
    ctr[3] = lo0;
}

}  // namespace

void Rng::refill() {
    std::uint32_t ctr[4] = {static_cast<std::uint32_t>(counter_),
                            static_cast<std::uint32_t>(counter_ >> 32), ctr2_, ctr3_};
    ++counter_;
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, k0, k1);
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    buf_[0] = (static_cast<std::uint64_t>(ctr[0]) << 32) | ctr[1];
    buf_[1] = (static_cast<std::uint64_t>(ctr[2]) << 32) | ctr[3];
    avail_ = 2;
}

std::uint64_t Rng::poisson(double mean) {
    if (!(mean >= 0)) throw ParameterError("poisson: mean must be nonnegative");
    if (mean < 30.0) {
        // Knuth inversion by multiplying uniforms.
        const double limit = std::exp(-mean);
        double prod = 1.0;
        std::uint64_t k = 0;
        while (true) {
            prod *= uniform();
            if (prod <= limit) return k;
            ++k;
        }
    }
    // PTRS transformed rejection (Hormann 1993), exact for large means.
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double ln_mean = std::log(mean);
    while (true) {
        double u = uniform() - 0.5;
        double v = uniform();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * ln_mean - mean - std::lgamma(kf + 1.0)) {
            return static_cast<std::uint64_t>(kf);
        }
    }
}

}  // namespace vperc
