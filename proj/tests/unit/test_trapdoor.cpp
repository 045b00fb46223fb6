#include "common.hpp"
#include "rtcf/params.hpp"
#include "rtcf/trapdoor.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rtcf;

namespace {

ZqVec noise_within(const Params& p, std::uint64_t bound, RngStream& rng)
{
    ZqVec e(p.m());
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        const auto mag = static_cast<std::int64_t>(rng.uniform_below(bound + 1));
        e(i) = p.mod().reduce(rng.bit() ? -mag : mag);
    }
    return e;
}

std::uint64_t two_tau_floor(const Params& p) { return (2 * p.tau().num) / p.tau().den; }

}  // namespace

TEST(GenTrap, ShapeAndStructure)
{
    const Params p = desk_preset();
    RngStream rng = test::rng_for("gen-trap");
    const TrapdoorPair t = gen_trap(p, rng);
    EXPECT_EQ(t.A.rows(), p.m());
    EXPECT_EQ(t.A.cols(), p.n());
    EXPECT_EQ(p.m(), p.n() * (2 * p.Q() + 1));
    EXPECT_EQ(t.N.rows(), p.gadget_rows());
    EXPECT_EQ(t.N.cols(), p.uniform_rows());

    const ZqMat G = gadget_matrix(p.n(), p.Q(), p.mod());
    const ZqMat M = t.bottom(p);
    for (Eigen::Index j = 0; j < p.n(); ++j) {
        const ZqVec NM = bitmat_vec(t.N, M.col(j), p.mod());
        for (Eigen::Index i = 0; i < p.gadget_rows(); ++i) EXPECT_EQ(t.A(i, j), p.mod().add(G(i, j), NM(i)));
    }

    RngStream other = test::rng_for("gen-trap-2");
    EXPECT_NE(gen_trap(p, other).A, t.A);
}

TEST(GadgetKernel, AnnihilatesGadgetRow)
{
    for (std::uint64_t q : {3ULL, 5ULL, 23ULL, 4398046511119ULL}) {
        const Modulus mod(q);
        const auto S = gadget_kernel_block(mod);
        ASSERT_EQ(S.rows(), mod.bits());
        for (Eigen::Index r = 0; r < S.rows(); ++r) {
            i128 acc = 0;
            std::uint64_t pow2 = 1;
            for (Eigen::Index c = 0; c < S.cols(); ++c) {
                acc += static_cast<i128>(S(r, c)) * pow2;
                pow2 = mod.add(pow2, pow2);
            }
            EXPECT_EQ(mod.reduce(acc), 0u) << "q=" << q << " row " << r;
        }
    }
}

TEST(Invert, NoiseFreeRoundTrip)
{
    const Params p = desk_preset();
    RngStream rng = test::rng_for("invert-clean");
    const TrapdoorPair t = gen_trap(p, rng);
    for (int k = 0; k < 1000; ++k) {
        const ZqVec s = sample_uniform(p.n(), p.mod(), rng);
        EXPECT_EQ(invert(t, mat_vec(t.A, s, p.mod()), p), s);
    }
}

TEST(Invert, NoisyRoundTripUpToTwoTau)
{
    const Params p = desk_preset();
    RngStream rng = test::rng_for("invert-noisy");
    const std::uint64_t bound = two_tau_floor(p);
    for (int k = 0; k < 1000; ++k) {
        if (k % 100 == 0) rng = RngStream::derive(test::seed_for("invert-noisy"), "key", k);
        const TrapdoorPair t = gen_trap(p, rng);
        const ZqVec s = sample_uniform(p.n(), p.mod(), rng);
        ZqVec e = noise_within(p, bound, rng);
        // Put one coordinate exactly on the boundary.
        const auto edge = static_cast<std::int64_t>(bound);
        e(k % p.m()) = p.mod().reduce(k % 2 ? edge : -edge);
        ASSERT_LE(inf_norm(e, p.mod()), bound);
        EXPECT_EQ(invert(t, add(mat_vec(t.A, s, p.mod()), e, p.mod()), p), s) << "k=" << k;
    }
}

TEST(Invert, BruteForceTinyInstance)
{
    // n = 1, q = 23: Q = 5, m = 11 and tau < 1, so only e = 0 is inside the 2 tau guarantee.
    const Params p = Params::make("tiny", 1, 1.0, 23);
    ASSERT_EQ(p.Q(), 5);
    ASSERT_EQ(p.m(), 11);
    for (int key = 0; key < 20; ++key) {
        RngStream rng = RngStream::derive(test::seed_for("tiny"), "key", key);
        const TrapdoorPair t = gen_trap(p, rng);
        for (std::uint64_t s0 = 0; s0 < 23; ++s0) {
            ZqVec s(1);
            s(0) = s0;
            const ZqVec v = mat_vec(t.A, s, p.mod());
            std::uint64_t best = 0, best_norm = ~0ULL;
            int ties = 0;
            for (std::uint64_t c = 0; c < 23; ++c) {
                ZqVec cand(1);
                cand(0) = c;
                const std::uint64_t norm = inf_norm(sub(v, mat_vec(t.A, cand, p.mod()), p.mod()), p.mod());
                if (norm < best_norm) {
                    best_norm = norm;
                    best = c;
                    ties = 0;
                } else if (norm == best_norm) {
                    ++ties;
                }
            }
            ASSERT_EQ(ties, 0);
            EXPECT_EQ(best, s0);
            EXPECT_EQ(invert(t, v, p)(0), best);
        }
    }
}

TEST(GenTrap, NonzeroImagesAreLong)
{
    // Distinct s cannot share a 2 tau-close image: ||A d||_inf > 4 tau for every nonzero d sampled.
    const Params p = desk_preset();
    RngStream rng = test::rng_for("long-images");
    const TrapdoorPair t = gen_trap(p, rng);
    const std::uint64_t four_tau = (4 * p.tau().num) / p.tau().den;
    for (int k = 0; k < 1000; ++k) {
        ZqVec d = sample_uniform(p.n(), p.mod(), rng);
        if (k < 8) d = ZqVec::Zero(p.n()), d(k % p.n()) = k < 4 ? 1 : p.q() - 1;
        if (d.isZero()) continue;
        EXPECT_GT(inf_norm(mat_vec(t.A, d, p.mod()), p.mod()), four_tau);
    }
}

TEST(FindPreimage, ShortResidualIsReturned)
{
    const Params p = desk_preset();
    RngStream rng = test::rng_for("preimage");
    const TrapdoorPair t = gen_trap(p, rng);
    for (int k = 0; k < 200; ++k) {
        const ZqVec x = sample_uniform(p.n(), p.mod(), rng);
        const ZqVec g = sample_box(p.m(), p.tau(), p.mod(), rng);
        const ZqVec y = add(mat_vec(t.A, x, p.mod()), g, p.mod());
        const auto pre = find_preimage(t, y, nullptr, p);
        ASSERT_TRUE(pre.has_value());
        EXPECT_EQ(pre->x, x);
        EXPECT_EQ(pre->g, g);
    }
}

TEST(FindPreimage, UniformImageHasNoShortPreimage)
{
    // Pr[preimage] <= ((2 tau + 1)/q)^m q^n, far below 2^-1000 at the desk preset.
    const Params p = desk_preset();
    const double log2_bound = static_cast<double>(p.m()) * std::log2((2 * p.tau().to_double() + 1) / static_cast<double>(p.q())) +
                              static_cast<double>(p.n()) * std::log2(static_cast<double>(p.q()));
    EXPECT_LT(log2_bound, -1000);
    RngStream rng = test::rng_for("preimage-uniform");
    const TrapdoorPair t = gen_trap(p, rng);
    for (int k = 0; k < 200; ++k) EXPECT_FALSE(find_preimage(t, sample_uniform(p.m(), p.mod(), rng), nullptr, p));
}

TEST(FindPreimage, TwoPreimageRateMatchesProduct)
{
    // Pr[y in U0 and U1] = prod_i (2 tau + 1 - |e_i|) / (2 tau + 1) when g is uniform on the tau box.
    const Params p = Params::make("small", 2, 4.0, next_prime(std::uint64_t{1} << 30));
    RngStream rng = test::rng_for("two-preimage");
    const TrapdoorPair t = gen_trap(p, rng);
    const ZqVec s = sample_uniform(p.n(), p.mod(), rng);
    const auto half_tau = static_cast<std::int64_t>(p.tau().floor() / 2);
    ZqVec e = ZqVec::Zero(p.m());
    e(0) = p.mod().reduce(half_tau);
    e(5) = p.mod().reduce(-half_tau);
    e(9) = p.mod().reduce(half_tau / 2);
    const ZqVec v = add(mat_vec(t.A, s, p.mod()), e, p.mod());

    const double width = 2.0 * static_cast<double>(p.tau().floor()) + 1.0;
    double predicted = 1.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) predicted *= (width - static_cast<double>(centered_abs(e(i), p.mod()))) / width;

    const int N = 20000;
    int both = 0;
    for (int k = 0; k < N; ++k) {
        const ZqVec x = sample_uniform(p.n(), p.mod(), rng);
        const ZqVec y = add(mat_vec(t.A, x, p.mod()), sample_box(p.m(), p.tau(), p.mod(), rng), p.mod());
        both += find_preimage(t, y, nullptr, p) && find_preimage(t, y, &v, p);
    }
    const double rate = static_cast<double>(both) / N;
    EXPECT_NEAR(rate, predicted, 4 * std::sqrt(predicted * (1 - predicted) / N));
}
