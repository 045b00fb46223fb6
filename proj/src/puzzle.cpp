#include "rtcf/puzzle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rtcf {

Puzzle puzzle_G(const Params& params, RngStream& rng)
{
    VerifierRound1 r = verifier_round1(params, rng);
    return Puzzle{std::move(r.msg), std::move(r.state)};
}

Obligation puzzle_O(const Msg1& p, const Witness& witness, const Params& params, RngStream& rng)
{
    ProverRound1 r = honest_prover_round1(p, witness, params, rng);
    return Obligation{std::move(r.msg), std::move(r.state)};
}

int puzzle_S(const Obligation& obligation, int b_prime, RngStream& rng)
{
    return honest_prover_round2(obligation.rho, b_prime, rng);
}

int puzzle_V(const Puzzle& puzzle, const Msg2& o, int b_prime, int d_prime, const Params& params)
{
    const int d = verifier_d(puzzle.key.keypair.trapdoor, puzzle.key.keypair.pk.v, o, params);
    return chsh_success(d, d_prime, puzzle.key.b, b_prime) ? 1 : 0;
}

Transcript puzzle_trial(const Params& params, const Seed& master, std::uint64_t index)
{
    const RngStream trial = RngStream::derive(master, "poq", index);
    RngStream vrng = trial.fork("verifier");
    RngStream prng = trial.fork("prover");

    Puzzle pz = puzzle_G(params, vrng);
    const Obligation ob = puzzle_O(pz.p, pz.key.witness(), params, prng);
    pz.key.b_prime = vrng.bit();
    const int d_prime = puzzle_S(ob, pz.key.b_prime, prng);

    Transcript t = verifier_score(pz.key, ob.o, d_prime, params);
    t.success = puzzle_V(pz, ob.o, pz.key.b_prime, d_prime, params) == 1;
    t.prover = "honest";
    t.seed = seed_hex(master);
    t.trial = index;
    return t;
}

const char* to_string(Solver s) { return s == Solver::honest ? "honest" : "classical-baseline"; }

Solver solver_from_string(const std::string& s)
{
    if (s == "honest") return Solver::honest;
    if (s == "classical-baseline" || s == "baseline") return Solver::classical_baseline;
    throw std::invalid_argument("unknown solver '" + s + "'");
}

bool threshold_met(int count, int ell, double alpha)
{
    // alpha * ell is compared as a real number; the slack absorbs binary rounding of alpha.
    return static_cast<double>(count) >= alpha * static_cast<double>(ell) - 1e-9;
}

RepetitionRun repetition_run(const Params& params, int ell, double alpha, Solver solver, const Seed& master,
                             std::uint64_t index)
{
    const RngStream run = RngStream::derive(master, "puzzle-repetition", index);
    RngStream challenger = run.fork("challenge");

    RepetitionRun out;
    out.b_prime = challenger.bit();
    for (int j = 0; j < ell; ++j) {
        const RngStream inst = run.fork("instance-" + std::to_string(j));
        RngStream vrng = inst.fork("verifier");
        RngStream srng = inst.fork("solver");
        const Puzzle pz = puzzle_G(params, vrng);
        int ok = 0;
        if (solver == Solver::honest) {
            const Obligation ob = puzzle_O(pz.p, pz.key.witness(), params, srng);
            ok = puzzle_V(pz, ob.o, out.b_prime, puzzle_S(ob, out.b_prime, srng), params);
        } else {
            const Msg2 o{ZqVec::Zero(params.m()), BitString::Zero(params.gadget_rows())};
            ok = puzzle_V(pz, o, out.b_prime, 0, params);
        }
        out.successes += ok;
    }
    out.passed = threshold_met(out.successes, ell, alpha);
    return out;
}

RepetitionReport threshold_repetition(const Params& params, int ell, double alpha, Solver solver, std::uint64_t runs,
                                      const Seed& master)
{
    const double upper = std::pow(std::cos(std::numbers::pi / 8.0), 2);
    if (!(alpha > 0.75 && alpha < upper)) throw std::invalid_argument("alpha must lie strictly between 3/4 and cos^2(pi/8)");
    if (ell < 1) throw std::invalid_argument("ell must be at least 1");
    if (runs == 0) throw std::invalid_argument("runs must be at least 1");

    std::uint64_t passes = 0;
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < runs; ++i) {
        const RepetitionRun r = repetition_run(params, ell, alpha, solver, master, i);
        passes += r.passed;
        total += static_cast<std::uint64_t>(r.successes);
    }
    RepetitionReport rep;
    rep.ell = ell;
    rep.alpha = alpha;
    rep.pass = wilson(passes, runs);
    rep.mean_successes = static_cast<double>(total) / static_cast<double>(runs);
    rep.instance_rate = rep.mean_successes / ell;
    return rep;
}

}  // namespace rtcf
