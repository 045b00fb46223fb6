#include "rtcf/rsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rtcf {

RspRound1 rsp_client_round1(const Params& params, std::uint64_t alpha, RngStream& rng, const RspOptions& options)
{
    if (!params.supports_rsp()) throw std::invalid_argument("remote state preparation needs tau >= 2 m sigma");
    const Modulus& mod = params.mod();
    if (alpha >= mod.value()) throw std::invalid_argument("alpha must lie in [0, q)");

    RspRound1 out;
    out.state.keypair = options.force_zero_noise ? gen_j_noise_free(params, rng) : gen_j(params, rng);
    out.state.alpha = alpha;
    out.state.options = options;
    out.state.f = sample_bits(params.m(), rng);
    const std::uint64_t shift = options.fig5_signs ? mod.neg(alpha) : alpha;
    out.msg.pk = out.state.keypair.pk;
    out.msg.ct = encrypt_zq_with(out.state.keypair.pk, shift, out.state.f, params);
    return out;
}

RspServerResult rsp_server_round(const Msg1& msg, const Witness& witness, const Params& params, RngStream& rng,
                                 bool fig5_signs)
{
    ProverRound1 r = measure_claw(msg, witness, params, rng);
    const std::uint64_t w = fig5_signs ? params.mod().neg(msg.ct.w) : msg.ct.w;
    r.state.qubit = rotate_z(r.state.qubit, w);
    return RspServerResult{std::move(r.msg), std::move(r.state)};
}

RspOutcome rsp_client_finish(const RspClientState& state, const Msg2& msg, const Params& params)
{
    if (msg.y.size() != params.m()) throw std::invalid_argument("response: y must have length m");
    if (msg.u.size() != params.gadget_rows()) throw std::invalid_argument("response: u must have length n Q");
    const Modulus& mod = params.mod();
    const TrapdoorPair& trap = state.keypair.trapdoor;

    RspOutcome out;
    const auto p0 = find_preimage(trap, msg.y, nullptr, params);
    const auto p1 = find_preimage(trap, msg.y, &state.keypair.pk.v, params);
    if (!p0 || !p1) return out;

    out.aborted = false;
    out.x0 = p0->x;
    const ZqVec x1 = add(p0->x, state.keypair.s, mod);
    const BitString z = bit_xor(bits_le_vec(out.x0, params.Q()), bits_le_vec(x1, params.Q()));
    out.b = bit_dot(z, msg.u);
    out.target = PhaseQubit::superposed(mod.value(), 2 * state.alpha + (out.b ? mod.value() : 0));
    return out;
}

double trace_distance(const PhaseQubit& target, const PhaseQubit& actual)
{
    if (!target.is_superposed() || !actual.is_superposed()) {
        throw std::invalid_argument("trace_distance: both states must be superposed");
    }
    if (target.q != actual.q) throw std::invalid_argument("trace_distance: phase units differ");
    const std::uint64_t two_q = 2 * target.q;
    const std::uint64_t delta = (target.theta_units + two_q - actual.theta_units) % two_q;
    return 2.0 * std::abs(std::sin(std::numbers::pi * static_cast<double>(delta) / (2.0 * static_cast<double>(target.q))));
}

RspReport run_rsp(const Params& params, std::optional<std::uint64_t> alpha, std::uint64_t trials, const Seed& master,
                  const RspOptions& options)
{
    if (trials == 0) throw std::invalid_argument("run_rsp: trials must be at least 1");
    const Modulus& mod = params.mod();
    RspReport rep;
    rep.trials = trials;
    double sum_td = 0.0;
    double sum_l1 = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const RngStream trial = RngStream::derive(master, "rsp", i);
        RngStream client = trial.fork("client");
        RngStream server = trial.fork("server");

        const std::uint64_t a = alpha ? *alpha : client.uniform_below(mod.value());
        const RspRound1 r1 = rsp_client_round1(params, a, client, options);
        const Witness witness{r1.state.keypair.s, r1.state.keypair.e};
        const RspServerResult sr = rsp_server_round(r1.msg, witness, params, server, options.fig5_signs);
        const RspOutcome out = rsp_client_finish(r1.state, sr.msg, params);

        if (out.aborted) {
            ++rep.aborts;
            continue;
        }
        ++rep.non_aborts;
        const double td = trace_distance(out.target, sr.state.qubit);
        sum_td += td;
        rep.max_trace_distance = std::max(rep.max_trace_distance, td);
        if (out.target != sr.state.qubit) ++rep.nonzero_distances;
        sum_l1 += static_cast<double>(l1_norm(r1.state.keypair.e, mod));

        const BitString z =
            bit_xor(bits_le_vec(sr.state.x0, params.Q()), bits_le_vec(sr.state.x1, params.Q()));
        if (bit_dot(z, sr.msg.u) != out.b) ++rep.b_mismatches;
    }
    if (rep.non_aborts > 0) {
        rep.mean_trace_distance = sum_td / static_cast<double>(rep.non_aborts);
        rep.mean_e_l1 = sum_l1 / static_cast<double>(rep.non_aborts);
    }
    return rep;
}

// ---------------------------------------------------------------------------------------------

const char* to_string(BlindDist d)
{
    switch (d) {
    case BlindDist::D_x: return "D_x";
    case BlindDist::D_tilde_x: return "D~_x";
    case BlindDist::D: return "D";
    }
    return "?";
}

BlindSample blindness_sample(BlindDist which, std::uint64_t x, const Params& params, RngStream& rng)
{
    const Modulus& mod = params.mod();
    if (x >= mod.value()) throw std::invalid_argument("blindness_sample: x must lie in [0, q)");
    BlindSample out;
    if (which == BlindDist::D) {
        out.A = sample_uniform_matrix(params.m(), params.n(), mod, rng);
        out.v = sample_uniform(params.m(), mod, rng);
        out.a = sample_uniform(params.n(), mod, rng);
        out.w = rng.uniform_below(mod.value());
        return out;
    }
    out.A = which == BlindDist::D_x ? gen_trap(params, rng).A : sample_uniform_matrix(params.m(), params.n(), mod, rng);
    const ZqVec s = sample_uniform(params.n(), mod, rng);
    const ZqVec e = sample_truncated_gaussian_vec(params.m(), params.noise(), params.tau(), mod, rng);
    out.v = add(mat_vec(out.A, s, mod), e, mod);
    const PublicKey pk{out.A, out.v};
    const Ciphertext ct = encrypt_zq_with(pk, x, sample_bits(params.m(), rng), params);
    out.a = ct.a;
    out.w = ct.w;
    return out;
}

Stats blindness_game(BlindDist which, const BlindAdversary& adversary, const Params& params, std::uint64_t trials,
                     const Seed& master)
{
    if (trials == 0) throw std::invalid_argument("blindness_game: trials must be at least 1");
    std::uint64_t wins = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const RngStream trial = RngStream::derive(master, std::string("blind-") + to_string(which), i);
        RngStream challenger = trial.fork("challenger");
        RngStream adv = trial.fork("adversary");
        const std::uint64_t x = challenger.uniform_below(params.q());
        const BlindSample sample = blindness_sample(which, x, params, challenger);
        if (adversary(sample, adv) == x) ++wins;
    }
    return wilson(wins, trials);
}

}  // namespace rtcf
