#pragma once

#include <cmath>
#include <cstdint>

namespace nccell {

/// Success count out of a number of Bernoulli trials.
struct Proportion {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;

    double rate() const noexcept { return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials); }

    Proportion& operator+=(const Proportion& o) noexcept {
        successes += o.successes;
        trials += o.trials;
        return *this;
    }
};

struct Interval {
    double low = 0.0;
    double high = 1.0;

    bool contains(double x) const noexcept { return low <= x && x <= high; }
    bool overlaps(const Interval& o) const noexcept { return low <= o.high && o.low <= high; }
};

/// Wilson score interval; z = 1.96 gives 95 %.
inline Interval wilson_interval(const Proportion& p, double z = 1.96) {
    if (p.trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(p.trials);
    const double phat = p.rate();
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::fmax(0.0, centre - half), std::fmin(1.0, centre + half)};
}

/// Standard deviation of the success count under Binomial(trials, p).
inline double binomial_sigma(std::uint64_t trials, double p) {
    return std::sqrt(static_cast<double>(trials) * p * (1.0 - p));
}

/// |successes - trials * p| <= k sigma.
inline bool within_binomial_sigmas(const Proportion& obs, double p, double k = 3.0) {
    const double expected = static_cast<double>(obs.trials) * p;
    return std::fabs(static_cast<double>(obs.successes) - expected) <= k * binomial_sigma(obs.trials, p);
}

}  // namespace nccell
