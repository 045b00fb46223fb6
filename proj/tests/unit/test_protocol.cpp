#include "common.hpp"
#include "rtcf/protocol_q.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace rtcf;

namespace {

bool within(const Stats& s, double p, double sds = 4.0)
{
    return std::abs(s.estimate - p) <= sds * std::sqrt(p * (1 - p) / static_cast<double>(s.trials));
}

}  // namespace

TEST(Params, DeskPreset)
{
    const Params p = desk_preset();
    EXPECT_EQ(p.n(), 4);
    EXPECT_EQ(p.sigma(), 3.0);
    EXPECT_EQ(p.q(), next_prime(std::uint64_t{1} << 42));
    EXPECT_EQ(p.Q(), 43);
    EXPECT_EQ(p.m(), 348);
    EXPECT_EQ(p.lambda(), 4);
    EXPECT_EQ(p.tau().den, 4u * 348 * 43);
    const double err = 5.0 * 348 * 9 / (double(p.q()) * double(p.q())) + p.two_preimage_deficit();
    EXPECT_LT(err, 1e-4);
    EXPECT_NEAR(p.rsp_accuracy_bound(), 4 * std::numbers::pi * 348 * 3 / double(p.q()), 1e-20);
    EXPECT_TRUE(p.supports_rsp());
    EXPECT_EQ(p.note(), "functional, not secure");
    EXPECT_THROW(preset_by_name("huge"), std::invalid_argument);
}

TEST(Params, RuleBasedSelection)
{
    RngStream rng = test::rng_for("select");
    const Params p = select_params(8, 1.0, 0.5, rng);
    EXPECT_DOUBLE_EQ(p.sigma(), 8.0);
    EXPECT_TRUE(is_prime(p.q()));
    EXPECT_GE(double(p.q()), 8 * std::pow(8.0, 2.5));
    EXPECT_LE(double(p.q()), 2 * 8 * std::pow(8.0, 2.5));
    EXPECT_THROW(select_params(1, 1.0, 0.5, rng), std::invalid_argument);
}

TEST(VerifierRound1, DecryptsAndHidesSecrets)
{
    const Params p = desk_preset();
    RngStream rng = test::rng_for("v1");
    int ones = 0;
    const int N = 2000;
    for (int k = 0; k < N; ++k) {
        const VerifierRound1 r = verifier_round1(p, rng);
        ASSERT_EQ(decrypt_bit(r.state.keypair.s, r.msg.ct, p), r.state.b);
        ones += r.state.b;
    }
    EXPECT_NEAR(ones / double(N), 0.5, 4 * 0.5 / std::sqrt(N));
}

TEST(VerifierD, ZeroUGivesZero)
{
    const Params p = desk_preset();
    RngStream rng = test::rng_for("vd");
    const VerifierRound1 r = verifier_round1(p, rng);
    Msg2 m{sample_uniform(p.m(), p.mod(), rng), BitString::Zero(p.n() * p.Q())};
    EXPECT_EQ(verifier_d(r.state.keypair.trapdoor, r.state.keypair.pk.v, m, p), 0);
    m.u = BitString::Constant(3, 0);
    EXPECT_THROW(verifier_d(r.state.keypair.trapdoor, r.state.keypair.pk.v, m, p), std::invalid_argument);
}

TEST(Chsh, Rule)
{
    EXPECT_FALSE(chsh_success(0, 0, 1, 1));
    EXPECT_TRUE(chsh_success(1, 0, 1, 1));
    EXPECT_TRUE(chsh_success(0, 0, 1, 0));
    EXPECT_TRUE(chsh_success(1, 1, 0, 1));
}

TEST(HonestProver, TwoPreimageAndClawConsistency)
{
    const Params p = desk_preset();
    const Seed seed = test::seed_for("honest-claw");
    HonestProver h;
    int two = 0;
    const int N = 300;
    for (int k = 0; k < N; ++k) {
        const TrialRecord rec = run_trial(p, h, seed, k);
        ASSERT_TRUE(rec.claw.has_value());
        two += *rec.claw == ClawCase::two_preimage;
        EXPECT_TRUE(rec.claw_consistent);
    }
    EXPECT_GE(two / double(N), 1 - p.two_preimage_deficit() - 4 * std::sqrt(p.two_preimage_deficit() / N));
}

TEST(HonestProver, UIsUniform)
{
    const Params p = desk_preset();
    const Seed seed = test::seed_for("honest-u");
    HonestProver h;
    std::uint64_t ones = 0, total = 0;
    for (int k = 0; k < 200; ++k) {
        const Transcript t = run_trial(p, h, seed, k).transcript;
        for (Eigen::Index i = 0; i < t.u.size(); ++i) ones += t.u(i);
        total += t.u.size();
    }
    EXPECT_NEAR(double(ones) / total, 0.5, 4 * 0.5 / std::sqrt(double(total)));
}

TEST(HonestProver, SingleQubitStepGivesCosSquared)
{
    // Phase beta = 0 (noise-free, b = 0) measured at +pi/4 when b' = 0.
    RngStream rng = test::rng_for("cos2");
    ProverState st;
    st.qubit = PhaseQubit::superposed(5, 0);
    st.claw_case = ClawCase::two_preimage;
    int zeros = 0;
    const int N = 100000;
    for (int k = 0; k < N; ++k) zeros += honest_prover_round2(st, 0, rng) == 0;
    const double c = std::cos(std::numbers::pi / 8);
    EXPECT_NEAR(zeros / double(N), c * c, 0.005);
    st.qubit = PhaseQubit::basis_state(5, 1);
    st.claw_case = ClawCase::single_preimage;
    zeros = 0;
    for (int k = 0; k < N; ++k) zeros += honest_prover_round2(st, 1, rng) == 0;
    EXPECT_NEAR(zeros / double(N), 0.5, 0.005);
}

TEST(Experiment, HonestAndBaselineRates)
{
    const Params p = desk_preset();
    const double c = std::cos(std::numbers::pi / 8);
    const ExperimentResult honest = run_experiment(p, HonestProver{}, 3000, test::seed_for("rate-h"), {4, false});
    EXPECT_TRUE(within(honest.stats, c * c));
    EXPECT_EQ(honest.claw_inconsistent, 0u);
    const ExperimentResult base = run_experiment(p, BaselineProver{}, 3000, test::seed_for("rate-b"), {4, false});
    EXPECT_TRUE(within(base.stats, 0.75));
    const ExperimentResult rnd = run_experiment(p, RandomAnswerProver{}, 3000, test::seed_for("rate-r"), {4, false});
    EXPECT_TRUE(within(rnd.stats, 0.5));
}

TEST(Experiment, WorkerCountDoesNotChangeResults)
{
    const Params p = toy_preset();
    const Seed seed = test::seed_for("workers");
    const ExperimentResult a = run_experiment(p, HonestProver{}, 400, seed, {1, true});
    const ExperimentResult b = run_experiment(p, HonestProver{}, 400, seed, {7, true});
    EXPECT_EQ(a.stats.successes, b.stats.successes);
    EXPECT_EQ(a.two_preimage, b.two_preimage);
    ASSERT_EQ(a.transcripts.size(), b.transcripts.size());
    for (std::size_t i = 0; i < a.transcripts.size(); ++i) EXPECT_TRUE(a.transcripts[i] == b.transcripts[i]);
}

TEST(Experiment, ToyPresetExercisesSinglePreimage)
{
    const Params p = toy_preset();
    const ExperimentResult r = run_experiment(p, HonestProver{}, 2000, test::seed_for("toy"), {2, false});
    EXPECT_LT(r.two_preimage, 2000u);
    EXPECT_EQ(r.claw_inconsistent, 0u);
}

TEST(Transcripts, RescoreDetectsTampering)
{
    const Params p = desk_preset();
    Transcript t = run_trial(p, HonestProver{}, test::seed_for("tamper"), 0).transcript;
    EXPECT_TRUE(rescore(t, p));
    t.d_prime ^= 1;
    EXPECT_FALSE(rescore(t, p));
}

TEST(Deterministic, ExactValuesAtMostThreeQuarters)
{
    const Params p = desk_preset();
    const auto all = DeterministicStrategy::all();
    ASSERT_EQ(all.size(), 8u);
    double best = 0;
    for (const auto& d : all) {
        const double v = d.exact_value(p.q());
        EXPECT_LE(v, 0.75) << d.name();
        best = std::max(best, v);
    }
    EXPECT_DOUBLE_EQ(best, 0.75);
}

TEST(Deterministic, EmpiricalMatchesExact)
{
    const Params p = desk_preset();
    for (const auto& d : DeterministicStrategy::all()) {
        const ExperimentResult r = run_experiment(p, d, 1500, test::seed_for(d.name()), {4, false});
        EXPECT_TRUE(within(r.stats, d.exact_value(p.q()))) << d.name() << " " << r.stats.estimate;
    }
}

TEST(MakeProver, Names)
{
    EXPECT_EQ(make_prover("honest")->name(), "honest");
    EXPECT_EQ(make_prover("classical-baseline")->name(), "classical-baseline");
    EXPECT_EQ(make_prover("random")->name(), "random");
    EXPECT_TRUE(make_prover("honest")->needs_witness());
    EXPECT_FALSE(make_prover("random")->needs_witness());
    const auto d = DeterministicStrategy::all().front();
    EXPECT_EQ(make_prover(d.name())->name(), d.name());
    EXPECT_NO_THROW(make_prover("bernoulli:0.3"));
    EXPECT_THROW(make_prover("bernoulli:1.5"), std::invalid_argument);
    EXPECT_THROW(make_prover("oracle"), std::invalid_argument);
}

TEST(Rewinding, Majority)
{
    EXPECT_EQ(majority({1, 0}), 1);
    EXPECT_EQ(majority({0, 0, 1}), 0);
    EXPECT_EQ(majority({1, 1, 0}), 1);
    EXPECT_EQ(majority({0, 0, 0, 0}), 0);
}

TEST(Rewinding, BaselineAllVariantsAtThreeQuarters)
{
    const Params p = desk_preset();
    for (RewindVariant v : {RewindVariant::C, RewindVariant::C_prime, RewindVariant::C_double}) {
        const Stats s = rewinding_experiment(v, BaselineProver{}, p, 2000, test::seed_for(to_string(v)));
        EXPECT_TRUE(within(s, 0.75)) << to_string(v) << " " << s.estimate;
    }
    EXPECT_THROW(rewinding_experiment(RewindVariant::C, HonestProver{}, p, 10, test::seed_for("x")), std::invalid_argument);
}

TEST(Rewinding, DoublePrimeBoundedForDeterministicStrategies)
{
    const Params p = desk_preset();
    for (const auto& d : DeterministicStrategy::all()) {
        const Stats s = rewinding_experiment(RewindVariant::C_double, d, p, 1000, test::seed_for("cpp" + d.name()));
        EXPECT_LE(s.estimate, 0.75 + 4 * std::sqrt(0.75 * 0.25 / 1000)) << d.name();
    }
}

namespace {

// Exact C' win rate for a ct-independent strategy answering a(b'), with d = MAJ over lambda votes
// a(b_k) xor (b and b_k). Votes are constant when a(0) = a(1) xor b, otherwise fair coins.
double c_prime_exact(const DeterministicStrategy& s, const Params& p)
{
    RngStream unused = test::rng_for("unused");
    const FirstResponse r = s.first_response(PublicKey{}, Ciphertext{}, p, unused);
    const int a[2] = {s.second_response(r, 0, unused), s.second_response(r, 1, unused)};
    const int lambda = static_cast<int>(p.lambda());
    const double p_maj_one = binomial_upper_tail(lambda, (lambda + 1) / 2, 0.5);
    double win = 0;
    for (int b : {0, 1}) {
        const bool constant = a[0] == (a[1] ^ b);
        const double pd1 = constant ? a[0] : p_maj_one;
        for (int bp : {0, 1}) {
            for (int d : {0, 1}) {
                const double pd = d ? pd1 : 1 - pd1;
                if (chsh_success(d, a[bp], b, bp)) win += 0.25 * pd;
            }
        }
    }
    return win;
}

}  // namespace

TEST(Rewinding, VariantsMatchExactValuesForDeterministicStrategies)
{
    // C reproduces the plain protocol value. C' lets the vote pick d to agree with the prover's own
    // answers, so it can exceed C for strategies whose answers ignore the trapdoor's d.
    const Params p = desk_preset();
    for (const auto& d : DeterministicStrategy::all()) {
        const Stats c = rewinding_experiment(RewindVariant::C, d, p, 1000, test::seed_for("c" + d.name()));
        const Stats cp = rewinding_experiment(RewindVariant::C_prime, d, p, 1000, test::seed_for("cp" + d.name()));
        EXPECT_TRUE(within(c, d.exact_value(p.q()))) << d.name() << " C " << c.estimate;
        EXPECT_TRUE(within(cp, c_prime_exact(d, p))) << d.name() << " C' " << cp.estimate;
        EXPECT_NEAR(d.rewound_value(p.lambda()), c_prime_exact(d, p), 1e-12) << d.name();
        EXPECT_LE(d.rewound_value(p.lambda()), 0.75 + 1e-12) << d.name();
    }
}
