#pragma once

#include "rtcf/zq.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rtcf {

using Seed = std::array<std::uint8_t, 32>;

/// Parses a 64-hex-character seed. Throws std::invalid_argument on any other input.
Seed parse_seed_hex(std::string_view hex);
std::string seed_hex(const Seed& seed);

/// Counter-mode ChaCha20 keystream. Identical (key, counter) state always yields identical output.
class RngStream
{
public:
    explicit RngStream(const Seed& key);

    /// Stream for trial `index` of experiment `label`, keyed by BLAKE2b(master, label, index).
    static RngStream derive(const Seed& master, std::string_view label, std::uint64_t index);

    /// Independent child stream; does not advance this one.
    RngStream fork(std::string_view label) const;

    const Seed& key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64();

    /// Uniform on [0, bound) without modulo bias.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    int bit();

private:
    void refill();

    Seed key_;
    std::uint64_t counter_ = 0;
    std::array<std::uint64_t, 8> block_{};
    int next_word_ = 8;
    std::uint64_t bit_buffer_ = 0;
    int bits_left_ = 0;
};

/// Nonnegative rational num/den; used for the truncation bound tau so that |x| <= tau is an integer test.
struct Rational
{
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    bool admits(std::uint64_t magnitude) const
    {
        return static_cast<u128>(magnitude) * den <= static_cast<u128>(num);
    }
    std::uint64_t floor() const { return num / den; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct GaussianSpec
{
    double sigma = 1.0;
    std::optional<Rational> tau;
};

/// Inverse-CDF table for the discrete Gaussian G(sigma) on [-ceil(10 sigma), ceil(10 sigma)].
class GaussianTable
{
public:
    explicit GaussianTable(double sigma);

    double sigma() const { return sigma_; }
    std::int64_t bound() const { return bound_; }

    /// Normalized probability of x under the table (zero outside the support).
    double pmf(std::int64_t x) const;

    std::int64_t sample(RngStream& rng) const;

private:
    double sigma_;
    std::int64_t bound_;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

ZqVec sample_uniform(Eigen::Index dim, const Modulus& mod, RngStream& rng);
ZqMat sample_uniform_matrix(Eigen::Index rows, Eigen::Index cols, const Modulus& mod, RngStream& rng);
BitString sample_bits(Eigen::Index m, RngStream& rng);
BitMat sample_bit_matrix(Eigen::Index rows, Eigen::Index cols, RngStream& rng);

std::int64_t sample_gaussian(const GaussianTable& table, RngStream& rng);

/// G(sigma) conditioned on |x| <= tau, by rejection.
std::int64_t sample_truncated_gaussian(const GaussianTable& table, const Rational& tau, RngStream& rng);

/// m independent truncated Gaussians reduced into Z_q.
ZqVec sample_truncated_gaussian_vec(Eigen::Index m, const GaussianTable& table, const Rational& tau,
                                    const Modulus& mod, RngStream& rng);

/// Each coordinate uniform on {x in Z_q : |x| <= tau}.
ZqVec sample_box(Eigen::Index m, const Rational& tau, const Modulus& mod, RngStream& rng);

}  // namespace rtcf
