#include "common.hpp"
#include "rtcf/rsp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace rtcf;

TEST(RspClient, CiphertextCarriesAlpha)
{
    const Params p = desk_preset();
    RngStream rng = test::rng_for("rsp-ct");
    for (int k = 0; k < 50; ++k) {
        const std::uint64_t alpha = rng.uniform_below(p.q());
        const RspRound1 r = rsp_client_round1(p, alpha, rng);
        const KeypairJ& kp = r.state.keypair;
        const std::uint64_t w = p.mod().sub(r.msg.ct.w, inner(r.msg.ct.a, kp.s, p.mod()));
        EXPECT_EQ(p.mod().sub(w, bits_dot(r.state.f, kp.e, p.mod())), alpha);
    }
    const RspRound1 zero = rsp_client_round1(p, 0, rng);
    EXPECT_EQ(decrypt_bit(zero.state.keypair.s, zero.msg.ct, p), 0);
}

TEST(RspClient, RejectsParametersWithoutRoom)
{
    const Params toy = toy_preset();
    ASSERT_FALSE(toy.supports_rsp());
    RngStream rng = test::rng_for("rsp-toy");
    EXPECT_THROW(rsp_client_round1(toy, 1, rng), std::invalid_argument);
}

TEST(RspServer, NoiseFreeTargetIsExact)
{
    const Params p = desk_preset();
    RngStream rng = test::rng_for("rsp-exact");
    RspOptions opt;
    opt.force_zero_noise = true;
    for (int k = 0; k < 200; ++k) {
        const std::uint64_t alpha = rng.uniform_below(p.q());
        const RspRound1 r1 = rsp_client_round1(p, alpha, rng, opt);
        const Witness w{r1.state.keypair.s, r1.state.keypair.e};
        const RspServerResult srv = rsp_server_round(r1.msg, w, p, rng);
        const RspOutcome out = rsp_client_finish(r1.state, srv.msg, p);
        ASSERT_FALSE(out.aborted);
        ASSERT_TRUE(srv.state.qubit.is_superposed());
        const std::uint64_t expected = (2 * static_cast<u128>(alpha) + (out.b ? p.q() : 0)) % (2 * p.q());
        EXPECT_EQ(out.target.theta_units, expected);
        EXPECT_EQ(srv.state.qubit.theta_units, expected);
    }
}

TEST(TraceDistance, Examples)
{
    EXPECT_DOUBLE_EQ(trace_distance(PhaseQubit::superposed(5, 3), PhaseQubit::superposed(5, 3)), 0.0);
    EXPECT_NEAR(trace_distance(PhaseQubit::superposed(5, 0), PhaseQubit::superposed(5, 5)), 2.0, 1e-15);
    // f^T e = 1 shifts the phase by 2 units of pi/5.
    EXPECT_NEAR(trace_distance(PhaseQubit::superposed(5, 4), PhaseQubit::superposed(5, 6)), 2 * std::sin(std::numbers::pi / 5),
                1e-12);
    EXPECT_NEAR(2 * std::sin(std::numbers::pi / 5), 1.17557, 1e-5);
    EXPECT_THROW(trace_distance(PhaseQubit::basis_state(5, 0), PhaseQubit::superposed(5, 0)), std::invalid_argument);
}

TEST(RunRsp, DeskBounds)
{
    const Params p = desk_preset();
    const RspReport r = run_rsp(p, std::nullopt, 1000, test::seed_for("rsp-run"));
    EXPECT_LE(r.abort_rate(), p.two_preimage_deficit() + 4 * std::sqrt(p.two_preimage_deficit() / 1000));
    EXPECT_LE(r.mean_trace_distance, p.rsp_accuracy_bound());
    EXPECT_LE(r.mean_e_l1, 2.0 * p.m() * p.sigma());
    EXPECT_EQ(r.b_mismatches, 0u);
    EXPECT_GT(r.nonzero_distances, 0u);
}

TEST(RunRsp, ZeroNoiseIsExact)
{
    RspOptions opt;
    opt.force_zero_noise = true;
    const RspReport r = run_rsp(desk_preset(), 123456789, 300, test::seed_for("rsp-zero"), opt);
    EXPECT_EQ(r.max_trace_distance, 0.0);
    EXPECT_EQ(r.nonzero_distances, 0u);
    EXPECT_EQ(r.mean_e_l1, 0.0);
}

TEST(RunRsp, FigureSignsFailAccuracy)
{
    const Params p = desk_preset();
    RspOptions opt;
    opt.fig5_signs = true;
    const RspReport r = run_rsp(p, std::nullopt, 300, test::seed_for("rsp-fig5"), opt);
    EXPECT_GT(r.mean_trace_distance, p.rsp_accuracy_bound());
}

TEST(RunRsp, UniformImageAborts)
{
    const Params p = desk_preset();
    RngStream rng = test::rng_for("rsp-abort");
    const RspRound1 r1 = rsp_client_round1(p, 7, rng);
    for (int k = 0; k < 50; ++k) {
        const Msg2 m{sample_uniform(p.m(), p.mod(), rng), sample_bits(p.n() * p.Q(), rng)};
        EXPECT_TRUE(rsp_client_finish(r1.state, m, p).aborted);
    }
}

TEST(Blindness, RandomGuessIsOneOverQ)
{
    const Params p = Params::make("blind", 2, 1.0, 17);
    const BlindAdversary guess = [&](const BlindSample&, RngStream& rng) { return rng.uniform_below(p.q()); };
    for (BlindDist d : {BlindDist::D_x, BlindDist::D_tilde_x, BlindDist::D}) {
        const Stats s = blindness_game(d, guess, p, 4000, test::seed_for(to_string(d)));
        EXPECT_LE(s.ci_lo, 1.0 / 17) << to_string(d);
        EXPECT_GE(s.ci_hi, 1.0 / 17) << to_string(d);
    }
}

TEST(Blindness, UniformHybridIsUniform)
{
    const Params p = Params::make("blind", 2, 1.0, 17);
    RngStream rng = test::rng_for("blind-uniform");
    std::vector<int> counts(17, 0);
    const int N = 20000;
    for (int k = 0; k < N; ++k) ++counts[blindness_sample(BlindDist::D, 3, p, rng).w];
    double chi = 0;
    for (int c : counts) chi += (c - N / 17.0) * (c - N / 17.0) / (N / 17.0);
    EXPECT_LT(chi, 39.25);  // 0.999 quantile of chi^2 with 16 degrees of freedom
}
