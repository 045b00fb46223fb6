#pragma once

#include <cstdint>

namespace rtcf {

/// Success count with a Wilson score interval.
struct Stats
{
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double estimate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;

    double half_width() const { return (ci_hi - ci_lo) / 2.0; }
};

inline constexpr double kZ95 = 1.959963984540054;

Stats wilson(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

/// Pr[X >= k] for X ~ Binomial(n, p), summed exactly in log space.
double binomial_upper_tail(int n, int k, double p);

}  // namespace rtcf
