#include "rtcf/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rtcf {

Params::Params(std::string name, Eigen::Index n, double sigma, Modulus mod)
    : preset_(std::move(name)),
      lambda_(n),
      n_(n),
      m_(0),
      Q_(mod.bits()),
      sigma_(sigma),
      mod_(mod),
      noise_(std::make_shared<const GaussianTable>(sigma))
{
    m_ = n_ * (2 * Q_ + 1);
    tau_ = Rational{mod_.value(), static_cast<std::uint64_t>(4 * m_ * Q_)};
}

Params Params::make(std::string name, Eigen::Index n, double sigma, std::uint64_t q)
{
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (!(sigma >= 1.0)) throw std::invalid_argument("sigma must be >= 1");
    Params p(std::move(name), n, sigma, Modulus(q));
    // Decryption margin: |f^T e| <= m tau = q/(4Q) must stay within q/8.
    if (static_cast<u128>(p.m_) * p.tau_.num * 8 > static_cast<u128>(q) * p.tau_.den) {
        throw std::invalid_argument("parameters violate m*tau <= q/8");
    }
    return p;
}

Params Params::with_note(std::string note) const
{
    Params copy = *this;
    copy.note_ = std::move(note);
    return copy;
}

double Params::completeness_bound() const
{
    const double c = std::cos(std::numbers::pi / 8);
    const double qd = static_cast<double>(q());
    const double md = static_cast<double>(m_);
    return c * c - 5.0 * md * sigma_ * sigma_ / (qd * qd) - two_preimage_deficit();
}

double Params::two_preimage_deficit() const
{
    return static_cast<double>(m_) * sigma_ / (2.0 * tau_.to_double());
}

double Params::rsp_accuracy_bound() const
{
    return 4.0 * std::numbers::pi * static_cast<double>(m_) * sigma_ / static_cast<double>(q());
}

bool Params::supports_rsp() const { return tau_.to_double() >= 2.0 * static_cast<double>(m_) * sigma_; }

Params desk_preset()
{
    return Params::make("desk", 4, 3.0, next_prime(std::uint64_t{1} << 42)).with_note("functional, not secure");
}

Params toy_preset()
{
    return Params::make("toy", 2, 1.0, next_prime(std::uint64_t{1} << 20)).with_note("functional, not secure");
}

Params preset_by_name(std::string_view name)
{
    if (name == "desk") return desk_preset();
    if (name == "toy") return toy_preset();
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected desk or toy)");
}

Params select_params(Eigen::Index n, double c, double eps, RngStream& rng)
{
    if (n < 2) throw std::invalid_argument("select_params: n must be at least 2");
    if (!(c > 0) || !(eps > 0)) throw std::invalid_argument("select_params: c and eps must be positive");
    const double sigma = std::pow(static_cast<double>(n), c);
    const double lo_real = std::pow(static_cast<double>(n), 2.0 + eps) * sigma;
    const double hi_real = 2.0 * lo_real;
    if (hi_real >= static_cast<double>(kMaxModulus)) throw std::invalid_argument("select_params: modulus too large");
    const auto lo = static_cast<std::uint64_t>(std::ceil(lo_real));
    const auto hi = static_cast<std::uint64_t>(std::floor(hi_real));
    // Primes have density ~1/ln(q) in [L, 2L], so a few hundred random probes almost surely hit one.
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const std::uint64_t candidate = lo + rng.uniform_below(hi - lo + 1);
        if (candidate > 2 && candidate % 2 == 1 && is_prime(candidate)) {
            return Params::make("rule-n" + std::to_string(n), n, sigma, candidate)
                .with_note("asymptotic parameter rule");
        }
    }
    // Bertrand's postulate guarantees a prime in (L, 2L]; fall back to a deterministic scan.
    const std::uint64_t p = next_prime(lo);
    if (p > hi) throw std::logic_error("select_params: no prime in range");
    return Params::make("rule-n" + std::to_string(n), n, sigma, p).with_note("asymptotic parameter rule");
}

}  // namespace rtcf
