#pragma once

// Exact arithmetic and dense linear algebra over Z_q for an odd prime q < 2^61.
//
// Elements are stored as their canonical representative in [0, q). Vectors and
// matrices are plain Eigen containers of std::uint64_t; every operation that
// needs the modulus takes it explicitly.

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>

namespace rtcf {

using ZqVec = Eigen::Matrix<std::uint64_t, Eigen::Dynamic, 1>;
using ZqMat = Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic>;
using BitString = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;
using BitMat = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

using u128 = unsigned __int128;
using i128 = __int128;

/// Upper bound (exclusive) on supported moduli; keeps every product inside a 128-bit word.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 61;

bool is_prime(std::uint64_t x);

/// Smallest prime >= x.
std::uint64_t next_prime(std::uint64_t x);

/// Odd prime modulus with the arithmetic primitives everything else is built on.
class Modulus
{
public:
    explicit Modulus(std::uint64_t q);

    std::uint64_t value() const { return q_; }

    /// Binary length ceil(log2 q).
    int bits() const { return bits_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const
    {
        const std::uint64_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const
    {
        return a >= b ? a - b : a + q_ - b;
    }

    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }

    /// Product through a 128-bit intermediate.
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const
    {
        return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % q_);
    }

    /// Shift-and-add product that never forms anything wider than 64 bits.
    std::uint64_t mul_schoolbook(std::uint64_t a, std::uint64_t b) const;

    std::uint64_t reduce(std::int64_t x) const
    {
        const std::int64_t r = x % static_cast<std::int64_t>(q_);
        return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(q_) : r);
    }

    std::uint64_t reduce(i128 x) const
    {
        const i128 r = x % static_cast<i128>(q_);
        return static_cast<std::uint64_t>(r < 0 ? r + static_cast<i128>(q_) : r);
    }

    /// Centered lift into (-q/2, q/2].
    std::int64_t centered(std::uint64_t x) const
    {
        return x > q_ / 2 ? static_cast<std::int64_t>(x) - static_cast<std::int64_t>(q_)
                          : static_cast<std::int64_t>(x);
    }

    std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const;

    bool operator==(const Modulus& o) const { return q_ == o.q_; }

private:
    std::uint64_t q_;
    int bits_;
};

/// |x| := min(x, q - x).
inline std::uint64_t centered_abs(std::uint64_t x, const Modulus& mod)
{
    const std::uint64_t q = mod.value();
    return x < q - x ? x : q - x;
}

template <class Derived>
std::uint64_t inf_norm(const Eigen::MatrixBase<Derived>& v, const Modulus& mod)
{
    if (v.size() == 0) throw std::invalid_argument("inf_norm: empty vector");
    std::uint64_t best = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const std::uint64_t a = centered_abs(v(i), mod);
        if (a > best) best = a;
    }
    return best;
}

/// Sum of centered absolute values.
template <class Derived>
std::uint64_t l1_norm(const Eigen::MatrixBase<Derived>& v, const Modulus& mod)
{
    std::uint64_t total = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) total += centered_abs(v(i), mod);
    return total;
}

/// Little-endian binary representation of x in exactly `width` bits.
BitString bits_le(std::uint64_t x, int width);

/// Per-coordinate little-endian bits, concatenated in coordinate order.
template <class Derived>
BitString bits_le_vec(const Eigen::MatrixBase<Derived>& x, int width)
{
    BitString out(x.size() * width);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out.segment(i * width, width) = bits_le(x(i), width);
    }
    return out;
}

/// Inverse of bits_le: sum_j bits_j 2^j.
std::uint64_t recompose_le(const Eigen::Ref<const BitString>& bits);

/// The nQ x n block-diagonal gadget matrix with blocks (1, 2, ..., 2^{Q-1})^T.
ZqMat gadget_matrix(Eigen::Index n, int Q, const Modulus& mod);

ZqVec add(const ZqVec& u, const ZqVec& v, const Modulus& mod);
ZqVec sub(const ZqVec& u, const ZqVec& v, const Modulus& mod);
ZqVec neg(const ZqVec& u, const Modulus& mod);

/// A x mod q.
ZqVec mat_vec(const ZqMat& A, const ZqVec& x, const Modulus& mod);

/// f^T A mod q for a 0/1 vector f.
ZqVec bits_mat(const BitString& f, const ZqMat& A, const Modulus& mod);

/// N v mod q for a 0/1 matrix N.
ZqVec bitmat_vec(const BitMat& N, const ZqVec& v, const Modulus& mod);

/// f . v mod q for a 0/1 vector f.
std::uint64_t bits_dot(const BitString& f, const ZqVec& v, const Modulus& mod);

std::uint64_t inner(const ZqVec& u, const ZqVec& v, const Modulus& mod);

/// u . v over GF(2).
int bit_dot(const BitString& u, const BitString& v);

BitString bit_xor(const BitString& u, const BitString& v);

}  // namespace rtcf
