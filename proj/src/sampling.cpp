#include "rtcf/sampling.hpp"

#include <sodium.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtcf {

namespace {

void ensure_sodium()
{
    static const int rc = sodium_init();
    if (rc < 0) throw std::runtime_error("libsodium initialisation failed");
}

int hex_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::uint64_t load_le64(const unsigned char* p)
{
    std::uint64_t x = 0;
    for (int i = 7; i >= 0; --i) x = (x << 8) | p[i];
    return x;
}

}  // namespace

Seed parse_seed_hex(std::string_view hex)
{
    if (hex.size() != 64) throw std::invalid_argument("seed must be exactly 64 hex characters");
    Seed seed{};
    for (std::size_t i = 0; i < 32; ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("seed contains a non-hex character");
        seed[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return seed;
}

std::string seed_hex(const Seed& seed)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (const auto byte : seed) {
        out.push_back(digits[byte >> 4]);
        out.push_back(digits[byte & 15]);
    }
    return out;
}

RngStream::RngStream(const Seed& key) : key_(key) { ensure_sodium(); }

RngStream RngStream::derive(const Seed& master, std::string_view label, std::uint64_t index)
{
    ensure_sodium();
    crypto_generichash_state st;
    crypto_generichash_init(&st, nullptr, 0, 32);
    crypto_generichash_update(&st, master.data(), master.size());
    unsigned char len[8];
    for (int i = 0; i < 8; ++i) len[i] = static_cast<unsigned char>((label.size() >> (8 * i)) & 0xff);
    crypto_generichash_update(&st, len, sizeof len);
    crypto_generichash_update(&st, reinterpret_cast<const unsigned char*>(label.data()), label.size());
    unsigned char idx[8];
    for (int i = 0; i < 8; ++i) idx[i] = static_cast<unsigned char>((index >> (8 * i)) & 0xff);
    crypto_generichash_update(&st, idx, sizeof idx);
    Seed out{};
    crypto_generichash_final(&st, out.data(), out.size());
    return RngStream(out);
}

RngStream RngStream::fork(std::string_view label) const { return derive(key_, label, 0); }

void RngStream::refill()
{
    unsigned char zeros[64] = {};
    unsigned char out[64];
    const unsigned char nonce[crypto_stream_chacha20_NONCEBYTES] = {};
    crypto_stream_chacha20_xor_ic(out, zeros, sizeof out, nonce, counter_, key_.data());
    ++counter_;
    for (int i = 0; i < 8; ++i) block_[i] = load_le64(out + 8 * i);
    next_word_ = 0;
}

std::uint64_t RngStream::next_u64()
{
    if (next_word_ >= 8) refill();
    return block_[next_word_++];
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound)
{
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold) return r % bound;
    }
}

double RngStream::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

int RngStream::bit()
{
    if (bits_left_ == 0) {
        bit_buffer_ = next_u64();
        bits_left_ = 64;
    }
    const int b = static_cast<int>(bit_buffer_ & 1);
    bit_buffer_ >>= 1;
    --bits_left_;
    return b;
}

GaussianTable::GaussianTable(double sigma) : sigma_(sigma)
{
    if (!(sigma >= 1.0) || !std::isfinite(sigma)) throw std::invalid_argument("Gaussian sigma must be >= 1");
    bound_ = static_cast<std::int64_t>(std::ceil(10.0 * sigma));
    const std::size_t size = static_cast<std::size_t>(2 * bound_ + 1);
    pmf_.resize(size);
    cdf_.resize(size);
    double total = 0.0;
    for (std::int64_t x = -bound_; x <= bound_; ++x) {
        const double w = std::exp(-static_cast<double>(x * x) / (2.0 * sigma * sigma));
        pmf_[static_cast<std::size_t>(x + bound_)] = w;
        total += w;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        pmf_[i] /= total;
        acc += pmf_[i];
        cdf_[i] = acc;
    }
    cdf_.back() = 1.0;
}

double GaussianTable::pmf(std::int64_t x) const
{
    if (x < -bound_ || x > bound_) return 0.0;
    return pmf_[static_cast<std::size_t>(x + bound_)];
}

std::int64_t GaussianTable::sample(RngStream& rng) const
{
    const double u = rng.uniform01();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::int64_t>(it - cdf_.begin()) - bound_;
}

ZqVec sample_uniform(Eigen::Index dim, const Modulus& mod, RngStream& rng)
{
    if (dim < 1) throw std::invalid_argument("sample_uniform: dimension must be positive");
    ZqVec v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.uniform_below(mod.value());
    return v;
}

ZqMat sample_uniform_matrix(Eigen::Index rows, Eigen::Index cols, const Modulus& mod, RngStream& rng)
{
    if (rows < 1 || cols < 1) throw std::invalid_argument("sample_uniform_matrix: dimensions must be positive");
    ZqMat A(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = rng.uniform_below(mod.value());
    }
    return A;
}

BitString sample_bits(Eigen::Index m, RngStream& rng)
{
    if (m < 1) throw std::invalid_argument("sample_bits: length must be positive");
    BitString f(m);
    for (Eigen::Index i = 0; i < m; ++i) f(i) = static_cast<std::uint8_t>(rng.bit());
    return f;
}

BitMat sample_bit_matrix(Eigen::Index rows, Eigen::Index cols, RngStream& rng)
{
    BitMat N(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) N(i, j) = static_cast<std::uint8_t>(rng.bit());
    }
    return N;
}

std::int64_t sample_gaussian(const GaussianTable& table, RngStream& rng) { return table.sample(rng); }

std::int64_t sample_truncated_gaussian(const GaussianTable& table, const Rational& tau, RngStream& rng)
{
    if (tau.den == 0) throw std::invalid_argument("truncation bound has zero denominator");
    for (;;) {
        const std::int64_t x = table.sample(rng);
        if (tau.admits(static_cast<std::uint64_t>(x < 0 ? -x : x))) return x;
    }
}

ZqVec sample_truncated_gaussian_vec(Eigen::Index m, const GaussianTable& table, const Rational& tau,
                                    const Modulus& mod, RngStream& rng)
{
    ZqVec e(m);
    for (Eigen::Index i = 0; i < m; ++i) e(i) = mod.reduce(sample_truncated_gaussian(table, tau, rng));
    return e;
}

ZqVec sample_box(Eigen::Index m, const Rational& tau, const Modulus& mod, RngStream& rng)
{
    if (m < 1) throw std::invalid_argument("sample_box: length must be positive");
    const std::uint64_t half = (mod.value() - 1) / 2;
    const std::uint64_t radius = tau.floor();
    ZqVec g(m);
    if (radius >= half) {
        for (Eigen::Index i = 0; i < m; ++i) g(i) = rng.uniform_below(mod.value());
        return g;
    }
    const std::uint64_t width = 2 * radius + 1;
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto k = static_cast<std::int64_t>(rng.uniform_below(width));
        g(i) = mod.reduce(k - static_cast<std::int64_t>(radius));
    }
    return g;
}

}  // namespace rtcf
