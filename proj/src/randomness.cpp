#include "rtcf/randomness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rtcf {

namespace {

constexpr double kWarnEntropy = 0.05;

}  // namespace

EntropyEstimate estimate_minentropy(const Prover& prover, const Params& params, std::uint64_t contexts,
                                    std::uint64_t replays, const Seed& master)
{
    if (replays < 10) throw std::invalid_argument("estimate_minentropy: need at least 10 replays per context");
    if (contexts < 1) throw std::invalid_argument("estimate_minentropy: need at least one context");

    const auto* classical = dynamic_cast<const ClassicalStrategy*>(&prover);
    EntropyEstimate est;
    est.contexts = contexts;
    est.samples_per_context = replays;
    est.rewound = classical != nullptr;
    est.worst_guessing_prob = 0.0;

    double sum_guess = 0.0;
    double sum_analytic = 0.0;
    for (std::uint64_t c = 0; c < contexts; ++c) {
        const RngStream ctx = RngStream::derive(master, "entropy", c);
        RngStream vrng = ctx.fork("verifier");
        VerifierRound1 r1 = verifier_round1(params, vrng);
        const Witness witness = r1.state.witness();
        const Witness* wp = prover.needs_witness() ? &witness : nullptr;

        std::uint64_t ones = 0;
        double p0_sum = 0.0;
        if (classical) {
            RngStream prng = ctx.fork("prover");
            const FirstResponse p = classical->first_response(r1.msg.pk, r1.msg.ct, params, prng);
            (void)classical->second_response(p, vrng.bit(), prng);
            for (std::uint64_t k = 0; k < replays; ++k) ones += classical->second_response(p, 0, prng) & 1;
        } else {
            // No rewinding for a quantum prover: each sample is a fresh run on the same (pk, ct).
            for (std::uint64_t k = 0; k < replays; ++k) {
                auto session = prover.open(params, wp, ctx.fork("replay-" + std::to_string(k)));
                (void)session->respond1(r1.msg);
                if (auto qs = session->quantum_state()) {
                    p0_sum += prob_zero(qs->qubit, std::numbers::pi / 4.0);
                }
                ones += session->respond2(0) & 1;
            }
        }
        const double f1 = static_cast<double>(ones) / static_cast<double>(replays);
        const double guess = std::max(f1, 1.0 - f1);
        sum_guess += guess;
        est.worst_guessing_prob = std::max(est.worst_guessing_prob, guess);
        if (!classical) {
            const double p0 = p0_sum / static_cast<double>(replays);
            sum_analytic += std::max(p0, 1.0 - p0);
        }
    }
    est.guessing_prob = sum_guess / static_cast<double>(contexts);
    est.h_min = min_entropy_bits(est.guessing_prob);
    est.worst_h_min = min_entropy_bits(est.worst_guessing_prob);
    if (!classical) est.analytic_guessing_prob = sum_analytic / static_cast<double>(contexts);
    return est;
}

bool entropy_warning(const Stats& success, const EntropyEstimate& entropy)
{
    return success.ci_lo > 0.75 && entropy.h_min <= kWarnEntropy;
}

EntropyReport score_entropy_report(const Prover& prover, const Params& params, std::uint64_t trials,
                                   std::uint64_t contexts, std::uint64_t replays, const Seed& master)
{
    EntropyReport rep;
    rep.success = run_experiment(params, prover, trials, master).stats;
    rep.entropy = estimate_minentropy(prover, params, contexts, replays, master);
    rep.warning = entropy_warning(rep.success, rep.entropy);
    if (rep.warning) {
        std::ostringstream msg;
        msg << "WARNING: success " << rep.success.estimate << " (95% CI lower end " << rep.success.ci_lo
            << ") exceeds 3/4 while the b'=0 answer has min-entropy " << rep.entropy.h_min
            << " bits; a sound classical prover cannot do both";
        rep.message = msg.str();
    }
    return rep;
}

}  // namespace rtcf
