#include "common.hpp"
#include "rtcf/puzzle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace rtcf;

TEST(Puzzle, PublicPartHidesSecrets)
{
    const Params p = desk_preset();
    RngStream rng = test::rng_for("puzzle-g");
    int ones = 0;
    const int N = 1000;
    for (int k = 0; k < N; ++k) {
        const Puzzle z = puzzle_G(p, rng);
        EXPECT_EQ(z.p.pk.A, z.key.keypair.pk.A);
        ones += z.key.b;
    }
    EXPECT_NEAR(ones / double(N), 0.5, 4 * 0.5 / std::sqrt(N));
}

TEST(Puzzle, MatchesProtocolSeedForSeed)
{
    const Params p = desk_preset();
    const Seed seed = test::seed_for("puzzle-eq");
    for (int k = 0; k < 300; ++k) {
        const Transcript a = puzzle_trial(p, seed, k);
        const Transcript b = run_trial(p, HonestProver{}, seed, k).transcript;
        EXPECT_EQ(a.success, b.success);
        EXPECT_EQ(a.y, b.y);
        EXPECT_EQ(a.d_prime, b.d_prime);
    }
}

TEST(Puzzle, VerifierAgreesWithTranscript)
{
    const Params p = desk_preset();
    RngStream rng = test::rng_for("puzzle-v");
    for (int k = 0; k < 300; ++k) {
        Puzzle z = puzzle_G(p, rng);
        const Obligation o = puzzle_O(z.p, z.key.witness(), p, rng);
        const int bp = rng.bit();
        z.key.b_prime = bp;
        const int dp = puzzle_S(o, bp, rng);
        const Transcript t = verifier_score(z.key, o.o, dp, p);
        EXPECT_EQ(puzzle_V(z, o.o, bp, dp, p), t.success ? 1 : 0);
    }
}

TEST(Puzzle, ClassicalBothAnswersWinIffBZero)
{
    const Params p = desk_preset();
    RngStream rng = test::rng_for("puzzle-both");
    const Msg2 zero{ZqVec::Zero(p.m()), BitString::Zero(p.n() * p.Q())};
    int both = 0;
    const int N = 2000;
    for (int k = 0; k < N; ++k) {
        const Puzzle z = puzzle_G(p, rng);
        const bool win = puzzle_V(z, zero, 0, 0, p) && puzzle_V(z, zero, 1, 0, p);
        EXPECT_EQ(win, z.key.b == 0);
        both += win;
    }
    EXPECT_NEAR(both / double(N), 0.5, 4 * 0.5 / std::sqrt(N));
}

TEST(Threshold, CeilingArithmetic)
{
    EXPECT_FALSE(threshold_met(2, 3, 0.8));
    EXPECT_TRUE(threshold_met(3, 3, 0.8));
    EXPECT_TRUE(threshold_met(40, 50, 0.8));
    EXPECT_FALSE(threshold_met(39, 50, 0.8));
}

TEST(Threshold, RejectsAlphaOutsideGap)
{
    const Params p = desk_preset();
    EXPECT_THROW(threshold_repetition(p, 50, 0.7, Solver::honest, 1, test::seed_for("x")), std::invalid_argument);
    EXPECT_THROW(threshold_repetition(p, 50, 0.9, Solver::honest, 1, test::seed_for("x")), std::invalid_argument);
    EXPECT_THROW(solver_from_string("psychic"), std::invalid_argument);
}

TEST(Threshold, RatesTrackBinomialTails)
{
    const Params p = desk_preset();
    const int ell = 20;
    const double alpha = 0.8;
    const int k = static_cast<int>(std::ceil(alpha * ell - 1e-9));
    const double c = std::cos(std::numbers::pi / 8);
    const RepetitionReport h = threshold_repetition(p, ell, alpha, Solver::honest, 300, test::seed_for("rep-h"));
    const double ph = binomial_upper_tail(ell, k, c * c);
    EXPECT_NEAR(h.pass.estimate, ph, 4 * std::sqrt(ph * (1 - ph) / 300));
    EXPECT_NEAR(h.instance_rate, c * c, 0.02);
    const RepetitionReport b = threshold_repetition(p, ell, alpha, Solver::classical_baseline, 300, test::seed_for("rep-b"));
    EXPECT_LT(b.pass.estimate, h.pass.estimate);
    EXPECT_NEAR(b.instance_rate, 0.75, 0.02);
}

TEST(Threshold, PassRateGrowsWithEllForHonestSolver)
{
    const double c = std::cos(std::numbers::pi / 8);
    double prev = 0;
    for (int ell : {50, 100, 200, 400}) {
        const double tail = binomial_upper_tail(ell, static_cast<int>(std::ceil(0.8 * ell - 1e-9)), c * c);
        EXPECT_GT(tail, prev);
        prev = tail;
    }
    EXPECT_GT(prev, 0.99);
}
