#include "common.hpp"
#include "rtcf/randomness.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rtcf;

TEST(MinEntropy, Formula)
{
    EXPECT_EQ(min_entropy_bits(1.0), 0.0);
    EXPECT_FALSE(std::signbit(min_entropy_bits(1.0)));
    EXPECT_NEAR(min_entropy_bits(0.5), 1.0, 1e-15);
    EXPECT_NEAR(min_entropy_bits(0.85), 0.2345, 1e-4);
}

TEST(MinEntropy, ConstantProverHasNone)
{
    const EntropyEstimate e = estimate_minentropy(BernoulliProver(0.0), desk_preset(), 20, 50, test::seed_for("const"));
    EXPECT_EQ(e.guessing_prob, 1.0);
    EXPECT_EQ(e.h_min, 0.0);
    EXPECT_TRUE(e.rewound);
}

TEST(MinEntropy, UniformProverHasOneBit)
{
    const EntropyEstimate e = estimate_minentropy(BernoulliProver(0.5), desk_preset(), 2, 10000, test::seed_for("uniform"));
    EXPECT_NEAR(e.h_min, 1.0, 0.02);
}

TEST(MinEntropy, RejectsTooFewReplays)
{
    EXPECT_THROW(estimate_minentropy(BaselineProver{}, desk_preset(), 5, 9, test::seed_for("few")), std::invalid_argument);
    EXPECT_THROW(estimate_minentropy(BaselineProver{}, desk_preset(), 0, 50, test::seed_for("few")), std::invalid_argument);
}

TEST(MinEntropy, HonestProverAwayFromZero)
{
    const EntropyEstimate e = estimate_minentropy(HonestProver{}, desk_preset(), 40, 100, test::seed_for("honest"));
    EXPECT_FALSE(e.rewound);
    EXPECT_GT(e.h_min, 0.1);
    EXPECT_GT(e.analytic_guessing_prob, 0.5);
    EXPECT_LT(e.analytic_guessing_prob, 0.9);
    EXPECT_NEAR(e.guessing_prob, e.analytic_guessing_prob, 0.05);
}

TEST(EntropyReport, BaselineHasNoWarning)
{
    const EntropyReport r = score_entropy_report(BaselineProver{}, desk_preset(), 2000, 20, 20, test::seed_for("rep"));
    EXPECT_EQ(r.entropy.h_min, 0.0);
    EXPECT_FALSE(r.warning);
}

TEST(EntropyReport, WarningFiresOnHighScoreWithoutEntropy)
{
    Stats success = wilson(8000, 10000);
    EntropyEstimate e;
    e.guessing_prob = 1.0;
    e.h_min = 0.0;
    EXPECT_TRUE(entropy_warning(success, e));
    e.guessing_prob = 0.85;
    e.h_min = min_entropy_bits(0.85);
    EXPECT_FALSE(entropy_warning(success, e));
    EXPECT_FALSE(entropy_warning(wilson(7500, 10000), EntropyEstimate{}));
}
