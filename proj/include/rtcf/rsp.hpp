#pragma once

// Blind remote preparation of Z^b (|0> + e^{2 pi i alpha/q}|1>)/sqrt(2). The client hides alpha
// inside an LWE encryption; the server runs the claw measurement and rotates by w.

#include "rtcf/protocol_q.hpp"

#include <functional>
#include <optional>

namespace rtcf {

struct RspOptions
{
    /// Draw the key with e = 0. Test hook: the prepared state is then exact.
    bool force_zero_noise = false;
    /// Use w = f^T v - alpha and rotate by -w, as the protocol figure is printed.
    bool fig5_signs = false;
};

struct RspClientState
{
    KeypairJ keypair;
    BitString f;
    std::uint64_t alpha = 0;
    RspOptions options;
};

struct RspRound1
{
    RspClientState state;
    Msg1 msg;
};

/// Throws std::invalid_argument unless tau >= 2 m sigma.
RspRound1 rsp_client_round1(const Params& params, std::uint64_t alpha, RngStream& rng, const RspOptions& options = {});

struct RspServerResult
{
    Msg2 msg;
    ProverState state;
};

RspServerResult rsp_server_round(const Msg1& msg, const Witness& witness, const Params& params, RngStream& rng,
                                 bool fig5_signs = false);

struct RspOutcome
{
    bool aborted = true;
    int b = 0;
    ZqVec x0;
    PhaseQubit target;
};

/// Aborts unless y has a tau-short preimage on both branches; otherwise x1 = x0 + s and b = ([x0] xor [x1]) . u.
RspOutcome rsp_client_finish(const RspClientState& state, const Msg2& msg, const Params& params);

/// 2 |sin((phi_1 - phi_2)/2)| for two superposed qubits; throws for basis states.
double trace_distance(const PhaseQubit& target, const PhaseQubit& actual);

struct RspReport
{
    std::uint64_t trials = 0;
    std::uint64_t aborts = 0;
    std::uint64_t non_aborts = 0;
    double mean_trace_distance = 0.0;
    double max_trace_distance = 0.0;
    std::uint64_t nonzero_distances = 0;
    /// Mean ||e||_1 over the runs that did not abort.
    double mean_e_l1 = 0.0;
    /// Non-abort runs where the client's b disagrees with the server-side phase flip.
    std::uint64_t b_mismatches = 0;

    double abort_rate() const { return trials ? static_cast<double>(aborts) / static_cast<double>(trials) : 0.0; }
};

/// alpha fixed, or fresh uniform per run when absent.
RspReport run_rsp(const Params& params, std::optional<std::uint64_t> alpha, std::uint64_t trials, const Seed& master,
                  const RspOptions& options = {});

// ---------------------------------------------------------------------------------------------
// Blindness hybrids

enum class BlindDist
{
    D_x,       ///< trapdoor A, v = A s + e, (a, w) = (f^T A, f^T v + x)
    D_tilde_x, ///< as D_x with a uniform A
    D          ///< every component uniform
};

const char* to_string(BlindDist d);

struct BlindSample
{
    ZqMat A;
    ZqVec v;
    ZqVec a;
    std::uint64_t w = 0;
};

BlindSample blindness_sample(BlindDist which, std::uint64_t x, const Params& params, RngStream& rng);

using BlindAdversary = std::function<std::uint64_t(const BlindSample&, RngStream&)>;

/// Empirical Pr[adversary outputs x] with x uniform on Z_q.
Stats blindness_game(BlindDist which, const BlindAdversary& adversary, const Params& params, std::uint64_t trials,
                     const Seed& master);

}  // namespace rtcf
