#pragma once

// 1-of-2 puzzle built from the proof of quantumness, and its threshold parallel repetition.

#include "rtcf/protocol_q.hpp"

namespace rtcf {

/// p = (pk, ct) is public; key = (s, t, b) plus the verifier's bookkeeping.
struct Puzzle
{
    Msg1 p;
    VerifierState key;
};

/// o = (y, u) is public; rho is the single retained qubit.
struct Obligation
{
    Msg2 o;
    ProverState rho;
};

Puzzle puzzle_G(const Params& params, RngStream& rng);
Obligation puzzle_O(const Msg1& p, const Witness& witness, const Params& params, RngStream& rng);
int puzzle_S(const Obligation& obligation, int b_prime, RngStream& rng);
/// 1 iff d xor d' = b AND b'.
int puzzle_V(const Puzzle& puzzle, const Msg2& o, int b_prime, int d_prime, const Params& params);

/// One G/O/S/V round drawing randomness exactly like run_trial does for the honest prover,
/// so the two pipelines are comparable seed for seed.
Transcript puzzle_trial(const Params& params, const Seed& master, std::uint64_t index);

enum class Solver
{
    honest,
    classical_baseline
};

const char* to_string(Solver s);
Solver solver_from_string(const std::string& s);

/// count >= alpha * ell, compared as written (real-valued).
bool threshold_met(int count, int ell, double alpha);

struct RepetitionRun
{
    int b_prime = 0;
    int successes = 0;
    bool passed = false;
};

/// ell independent puzzles answered under one shared challenge bit.
RepetitionRun repetition_run(const Params& params, int ell, double alpha, Solver solver, const Seed& master,
                             std::uint64_t index);

struct RepetitionReport
{
    int ell = 0;
    double alpha = 0.0;
    Stats pass;
    double mean_successes = 0.0;
    /// Fraction of single instances that verified.
    double instance_rate = 0.0;
};

/// Throws std::invalid_argument unless 3/4 < alpha < cos^2(pi/8) and ell >= 1.
RepetitionReport threshold_repetition(const Params& params, int ell, double alpha, Solver solver, std::uint64_t runs,
                                      const Seed& master);

}  // namespace rtcf
