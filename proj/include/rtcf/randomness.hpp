#pragma once

// Empirical conditional min-entropy of the prover's second answer at challenge b' = 0, and the
// joint score/entropy report.

#include "rtcf/protocol_q.hpp"

#include <cmath>
#include <string>

namespace rtcf {

struct EntropyEstimate
{
    /// -log2(guessing_prob).
    double h_min = 0.0;
    /// Mean over contexts of the larger empirical answer frequency.
    double guessing_prob = 1.0;
    /// Largest per-context guessing probability and its entropy.
    double worst_guessing_prob = 1.0;
    double worst_h_min = 0.0;
    std::uint64_t contexts = 0;
    std::uint64_t samples_per_context = 0;
    /// True when round 2 was replayed from stored state; false when every sample is an independent full run.
    bool rewound = true;
    /// For the simulated quantum prover: the same statistic computed from exact answer probabilities.
    double analytic_guessing_prob = -1.0;
};

inline double min_entropy_bits(double guessing_prob) { return 0.0 - std::log2(guessing_prob); }

/// Throws std::invalid_argument when replays < 10 or contexts < 1.
EntropyEstimate estimate_minentropy(const Prover& prover, const Params& params, std::uint64_t contexts,
                                    std::uint64_t replays, const Seed& master);

struct EntropyReport
{
    Stats success;
    EntropyEstimate entropy;
    bool warning = false;
    std::string message;
};

/// Fires when the success interval lies above 3/4 while the answer is essentially predictable.
bool entropy_warning(const Stats& success, const EntropyEstimate& entropy);

EntropyReport score_entropy_report(const Prover& prover, const Params& params, std::uint64_t trials,
                                   std::uint64_t contexts, std::uint64_t replays, const Seed& master);

}  // namespace rtcf
