#include "common.hpp"
#include "rtcf/zq.hpp"

#include <gtest/gtest.h>

using namespace rtcf;

namespace {

ZqVec vec(std::initializer_list<std::uint64_t> xs)
{
    ZqVec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (auto x : xs) v(i++) = x;
    return v;
}

BitString bits(std::initializer_list<int> xs)
{
    BitString b(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (auto x : xs) b(i++) = static_cast<std::uint8_t>(x);
    return b;
}

}  // namespace

TEST(Primes, SmallTable)
{
    const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
    int k = 0;
    for (int x = 0; x < 50; ++x) {
        const bool expected = k < 15 && primes[k] == x;
        EXPECT_EQ(is_prime(static_cast<std::uint64_t>(x)), expected) << x;
        if (expected) ++k;
    }
}

TEST(Primes, NextPrimeAbove2To42)
{
    const std::uint64_t p = next_prime(std::uint64_t{1} << 42);
    EXPECT_EQ(p, 4398046511119ULL);
    for (std::uint64_t x = std::uint64_t{1} << 42; x < p; ++x) EXPECT_FALSE(is_prime(x));
}

TEST(Modulus, RejectsBadModuli)
{
    EXPECT_THROW(Modulus(0), std::invalid_argument);
    EXPECT_THROW(Modulus(1), std::invalid_argument);
    EXPECT_THROW(Modulus(kMaxModulus + 1), std::invalid_argument);
}

TEST(Modulus, BitLength)
{
    EXPECT_EQ(Modulus(5).bits(), 3);
    EXPECT_EQ(Modulus(3).bits(), 2);
    EXPECT_EQ(Modulus(23).bits(), 5);
    EXPECT_EQ(Modulus(4398046511119ULL).bits(), 43);
}

TEST(Modulus, MulMatchesSchoolbook)
{
    const Modulus mod(4398046511119ULL);
    RngStream rng = test::rng_for("mul");
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t a = rng.uniform_below(mod.value());
        const std::uint64_t b = rng.uniform_below(mod.value());
        EXPECT_EQ(mod.mul(a, b), mod.mul_schoolbook(a, b));
    }
}

TEST(Modulus, AddSubNegReduce)
{
    const Modulus mod(7);
    EXPECT_EQ(mod.add(5, 4), 2u);
    EXPECT_EQ(mod.sub(2, 5), 4u);
    EXPECT_EQ(mod.neg(0), 0u);
    EXPECT_EQ(mod.neg(3), 4u);
    EXPECT_EQ(mod.reduce(std::int64_t{-1}), 6u);
    EXPECT_EQ(mod.reduce(std::int64_t{-15}), 6u);
    EXPECT_EQ(mod.pow(3, 6), 1u);
}

TEST(CenteredAbs, Examples)
{
    EXPECT_EQ(centered_abs(5, Modulus(7)), 2u);
    EXPECT_EQ(centered_abs(0, Modulus(7)), 0u);
    EXPECT_EQ(centered_abs(6, Modulus(13)), 6u);
    EXPECT_EQ(centered_abs(7, Modulus(13)), 6u);
}

TEST(InfNorm, Examples)
{
    EXPECT_EQ(inf_norm(vec({5, 1}), Modulus(7)), 2u);
    EXPECT_EQ(inf_norm(vec({0, 0}), Modulus(7)), 0u);
    EXPECT_EQ(inf_norm(vec({6, 5, 10}), Modulus(11)), 5u);
    EXPECT_THROW(inf_norm(ZqVec(0), Modulus(7)), std::invalid_argument);
}

TEST(Bits, LittleEndian)
{
    EXPECT_EQ(bits_le(3, 3), bits({1, 1, 0}));
    EXPECT_EQ(bits_le(0, 3), bits({0, 0, 0}));
    EXPECT_EQ(bits_le_vec(vec({3, 1}), 3), bits({1, 1, 0, 1, 0, 0}));
}

TEST(Bits, RecomposeInvertsDecompose)
{
    RngStream rng = test::rng_for("recompose");
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t x = rng.uniform_below(std::uint64_t{1} << 43);
        EXPECT_EQ(recompose_le(bits_le(x, 43)), x);
    }
}

TEST(Gadget, Examples)
{
    ZqMat expected(4, 2);
    expected << 1, 0, 2, 0, 0, 1, 0, 2;
    EXPECT_EQ(gadget_matrix(2, 2, Modulus(7)), expected);
    EXPECT_EQ(gadget_matrix(1, 1, Modulus(7)), ZqMat::Constant(1, 1, 1));
}

TEST(Gadget, BlocksArePowersOfTwo)
{
    const Modulus mod(4398046511119ULL);
    const int Q = mod.bits();
    RngStream rng = test::rng_for("gadget");
    ZqVec s(3);
    for (int i = 0; i < 3; ++i) s(i) = rng.uniform_below(mod.value());
    const ZqVec Gs = mat_vec(gadget_matrix(3, Q, mod), s, mod);
    for (int i = 0; i < 3; ++i) {
        std::uint64_t expected = s(i);
        for (int j = 0; j < Q; ++j) {
            EXPECT_EQ(Gs(i * Q + j), expected);
            expected = mod.add(expected, expected);
        }
    }
}

TEST(Linalg, IdentityAndInner)
{
    const Modulus mod(5);
    ZqMat I = ZqMat::Identity(3, 3);
    EXPECT_EQ(mat_vec(I, vec({4, 0, 2}), mod), vec({4, 0, 2}));
    EXPECT_EQ(inner(vec({2, 3}), vec({4, 1}), mod), 1u);
    EXPECT_EQ(bit_dot(bits({0, 0, 0}), bits({1, 0, 1})), 0);
    EXPECT_EQ(bit_dot(bits({1, 1, 1}), bits({1, 0, 1})), 0);
    EXPECT_EQ(bit_dot(bits({1, 1, 0}), bits({1, 0, 1})), 1);
    EXPECT_EQ(bit_xor(bits({1, 1, 0}), bits({1, 0, 1})), bits({0, 1, 1}));
}

TEST(Linalg, BitOpsMatchDenseProducts)
{
    const Modulus mod(4398046511119ULL);
    RngStream rng = test::rng_for("bitops");
    const Eigen::Index rows = 40, cols = 5;
    ZqMat A(rows, cols);
    for (Eigen::Index i = 0; i < A.size(); ++i) A(i) = rng.uniform_below(mod.value());
    BitString f(rows);
    for (Eigen::Index i = 0; i < rows; ++i) f(i) = static_cast<std::uint8_t>(rng.bit());
    ZqMat F(1, rows);
    for (Eigen::Index i = 0; i < rows; ++i) F(0, i) = f(i);

    const ZqVec fa = bits_mat(f, A, mod);
    for (Eigen::Index j = 0; j < cols; ++j) {
        std::uint64_t acc = 0;
        for (Eigen::Index i = 0; i < rows; ++i) acc = mod.add(acc, mod.mul(F(0, i), A(i, j)));
        EXPECT_EQ(fa(j), acc);
    }
    const ZqVec col = A.col(0);
    EXPECT_EQ(bits_dot(f, col, mod), fa(0));

    BitMat N(3, rows);
    for (Eigen::Index i = 0; i < N.size(); ++i) N(i) = static_cast<std::uint8_t>(rng.bit());
    const ZqVec Nv = bitmat_vec(N, col, mod);
    for (Eigen::Index r = 0; r < 3; ++r) {
        std::uint64_t acc = 0;
        for (Eigen::Index i = 0; i < rows; ++i) acc = mod.add(acc, N(r, i) ? col(i) : 0);
        EXPECT_EQ(Nv(r), acc);
    }
}

TEST(Linalg, DimensionMismatchThrows)
{
    const Modulus mod(7);
    EXPECT_THROW(add(vec({1, 2}), vec({1}), mod), std::invalid_argument);
    EXPECT_THROW(inner(vec({1, 2}), vec({1}), mod), std::invalid_argument);
    EXPECT_THROW(mat_vec(ZqMat::Identity(2, 2), vec({1}), mod), std::invalid_argument);
}
