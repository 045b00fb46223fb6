#include "rtcf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtcf {

Stats wilson(std::uint64_t successes, std::uint64_t trials, double z)
{
    if (trials == 0) throw std::invalid_argument("wilson: zero trials");
    if (successes > trials) throw std::invalid_argument("wilson: more successes than trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    Stats s;
    s.trials = trials;
    s.successes = successes;
    s.estimate = p;
    s.ci_lo = std::clamp(centre - spread, 0.0, p);
    s.ci_hi = std::clamp(centre + spread, p, 1.0);
    return s;
}

double binomial_upper_tail(int n, int k, double p)
{
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double total = 0.0;
    for (int i = k; i <= n; ++i) {
        const double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                                i * std::log(p) + (n - i) * std::log1p(-p);
        total += std::exp(log_term);
    }
    return std::min(total, 1.0);
}

}  // namespace rtcf
