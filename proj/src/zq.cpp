#include "rtcf/zq.hpp"

#include <array>
#include <bit>
#include <string>

namespace rtcf {

namespace {

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m)
{
    u128 result = 1;
    u128 b = base % m;
    while (exp > 0) {
        if (exp & 1) result = (result * b) % m;
        b = (b * b) % m;
        exp >>= 1;
    }
    return static_cast<std::uint64_t>(result);
}

}  // namespace

// Miller-Rabin with the first twelve primes as witnesses, which is deterministic below 2^64.
bool is_prime(std::uint64_t x)
{
    if (x < 2) return false;
    static constexpr std::array<std::uint64_t, 12> witnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (const auto p : witnesses) {
        if (x % p == 0) return x == p;
    }
    std::uint64_t d = x - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (const auto a : witnesses) {
        std::uint64_t y = powmod_u64(a, d, x);
        if (y == 1 || y == x - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            y = static_cast<std::uint64_t>((static_cast<u128>(y) * y) % x);
            if (y == x - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::uint64_t next_prime(std::uint64_t x)
{
    if (x <= 2) return 2;
    std::uint64_t c = x | 1;
    while (!is_prime(c)) c += 2;
    return c;
}

Modulus::Modulus(std::uint64_t q) : q_(q), bits_(0)
{
    if (q < 3 || q % 2 == 0 || q >= kMaxModulus || !is_prime(q)) {
        throw std::invalid_argument("modulus must be an odd prime below 2^61, got " + std::to_string(q));
    }
    // q is odd and > 1, so it is never a power of two and ceil(log2 q) = bit_width(q).
    bits_ = static_cast<int>(std::bit_width(q));
}

std::uint64_t Modulus::mul_schoolbook(std::uint64_t a, std::uint64_t b) const
{
    std::uint64_t result = 0;
    a %= q_;
    b %= q_;
    while (b > 0) {
        if (b & 1) result = add(result, a);
        a = add(a, a);
        b >>= 1;
    }
    return result;
}

std::uint64_t Modulus::pow(std::uint64_t base, std::uint64_t exp) const
{
    return powmod_u64(base, exp, q_);
}

BitString bits_le(std::uint64_t x, int width)
{
    BitString out(width);
    for (int j = 0; j < width; ++j) out(j) = static_cast<std::uint8_t>((x >> j) & 1);
    return out;
}

std::uint64_t recompose_le(const Eigen::Ref<const BitString>& bits)
{
    std::uint64_t x = 0;
    for (Eigen::Index j = bits.size() - 1; j >= 0; --j) x = (x << 1) | (bits(j) & 1);
    return x;
}

ZqMat gadget_matrix(Eigen::Index n, int Q, const Modulus& mod)
{
    if (n < 1 || Q < 1) throw std::invalid_argument("gadget_matrix: n and Q must be positive");
    ZqMat G = ZqMat::Zero(n * Q, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::uint64_t pow2 = 1 % mod.value();
        for (int j = 0; j < Q; ++j) {
            G(i * Q + j, i) = pow2;
            pow2 = mod.add(pow2, pow2);
        }
    }
    return G;
}

namespace {

void require_same_size(Eigen::Index a, Eigen::Index b, const char* what)
{
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                                    std::to_string(b) + ")");
    }
}

}  // namespace

ZqVec add(const ZqVec& u, const ZqVec& v, const Modulus& mod)
{
    require_same_size(u.size(), v.size(), "add");
    return u.binaryExpr(v, [&mod](std::uint64_t a, std::uint64_t b) { return mod.add(a, b); });
}

ZqVec sub(const ZqVec& u, const ZqVec& v, const Modulus& mod)
{
    require_same_size(u.size(), v.size(), "sub");
    return u.binaryExpr(v, [&mod](std::uint64_t a, std::uint64_t b) { return mod.sub(a, b); });
}

ZqVec neg(const ZqVec& u, const Modulus& mod)
{
    return u.unaryExpr([&mod](std::uint64_t a) { return mod.neg(a); });
}

ZqVec mat_vec(const ZqMat& A, const ZqVec& x, const Modulus& mod)
{
    require_same_size(A.cols(), x.size(), "mat_vec");
    ZqVec out = ZqVec::Zero(A.rows());
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const std::uint64_t xj = x(j);
        if (xj == 0) continue;
        for (Eigen::Index i = 0; i < A.rows(); ++i) out(i) = mod.add(out(i), mod.mul(A(i, j), xj));
    }
    return out;
}

namespace {

// All-ones for a set bit. Random 0/1 data defeats the branch predictor, so selection is done by masking.
inline std::uint64_t mask(std::uint8_t bit) { return std::uint64_t{0} - (bit & 1u); }

}  // namespace

ZqVec bits_mat(const BitString& f, const ZqMat& A, const Modulus& mod)
{
    require_same_size(f.size(), A.rows(), "bits_mat");
    ZqVec out = ZqVec::Zero(A.cols());
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        std::uint64_t acc = 0;
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            acc = mod.add(acc, A(i, j) & mask(f(i)));
        }
        out(j) = acc;
    }
    return out;
}

ZqVec bitmat_vec(const BitMat& N, const ZqVec& v, const Modulus& mod)
{
    require_same_size(N.cols(), v.size(), "bitmat_vec");
    ZqVec out = ZqVec::Zero(N.rows());
    for (Eigen::Index j = 0; j < N.cols(); ++j) {
        const std::uint64_t vj = v(j);
        for (Eigen::Index i = 0; i < N.rows(); ++i) {
            out(i) = mod.add(out(i), vj & mask(N(i, j)));
        }
    }
    return out;
}

std::uint64_t bits_dot(const BitString& f, const ZqVec& v, const Modulus& mod)
{
    require_same_size(f.size(), v.size(), "bits_dot");
    std::uint64_t acc = 0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        acc = mod.add(acc, v(i) & mask(f(i)));
    }
    return acc;
}

std::uint64_t inner(const ZqVec& u, const ZqVec& v, const Modulus& mod)
{
    require_same_size(u.size(), v.size(), "inner");
    std::uint64_t acc = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i) acc = mod.add(acc, mod.mul(u(i), v(i)));
    return acc;
}

int bit_dot(const BitString& u, const BitString& v)
{
    require_same_size(u.size(), v.size(), "bit_dot");
    int acc = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i) acc ^= (u(i) & v(i)) & 1;
    return acc;
}

BitString bit_xor(const BitString& u, const BitString& v)
{
    require_same_size(u.size(), v.size(), "bit_xor");
    return u.binaryExpr(v, [](std::uint8_t a, std::uint8_t b) { return static_cast<std::uint8_t>((a ^ b) & 1); });
}

}  // namespace rtcf
