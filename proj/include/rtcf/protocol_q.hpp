#pragma once

// Two-round proof of quantumness: the verifier side, the exactly simulated honest prover,
// replayable classical provers, the rewinding experiments and the Monte Carlo runner.

#include "rtcf/ghz.hpp"
#include "rtcf/params.hpp"
#include "rtcf/regev.hpp"
#include "rtcf/sampling.hpp"
#include "rtcf/stats.hpp"
#include "rtcf/trapdoor.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rtcf {

struct Msg1
{
    PublicKey pk;
    Ciphertext ct;
};

struct Msg2
{
    ZqVec y;
    BitString u;
};

/// (s, e) with v = A s + e. Only the simulated quantum prover consumes it.
struct Witness
{
    ZqVec s;
    ZqVec e;
};

struct VerifierState
{
    KeypairJ keypair;
    int b = 0;
    Ciphertext ct;
    BitString f;
    int b_prime = -1;

    Witness witness() const { return Witness{keypair.s, keypair.e}; }
};

struct VerifierRound1
{
    VerifierState state;
    Msg1 msg;
};

VerifierRound1 verifier_round1(const Params& params, RngStream& rng);

enum class ClawCase
{
    two_preimage,
    single_preimage
};

const char* to_string(ClawCase c);

struct ProverState
{
    PhaseQubit qubit;
    ClawCase claw_case = ClawCase::single_preimage;
    ZqVec x0;
    ZqVec x1;
};

struct ProverRound1
{
    ProverState state;
    Msg2 msg;
};

/// Samples the claw register and measures it at the angles taken from ct.a; the surviving qubit is
/// left unrotated. Throws std::invalid_argument if v != A s + e.
ProverRound1 measure_claw(const Msg1& msg, const Witness& witness, const Params& params, RngStream& rng);

/// measure_claw followed by the rotation |1> -> e^{2 pi i w / q}|1>.
ProverRound1 honest_prover_round1(const Msg1& msg, const Witness& witness, const Params& params, RngStream& rng);

/// Measures the stored qubit at (-1)^{b'} pi/4.
int honest_prover_round2(const ProverState& state, int b_prime, RngStream& rng);

/// d = u . ([Invert(y)] xor [Invert(y + v)]).
int verifier_d(const TrapdoorPair& trapdoor, const ZqVec& v, const Msg2& msg, const Params& params);

inline bool chsh_success(int d, int d_prime, int b, int b_prime) { return ((d ^ d_prime) & 1) == (b & b_prime & 1); }

struct Transcript
{
    std::string preset;
    std::string prover;
    std::string seed;
    std::uint64_t trial = 0;

    PublicKey pk;
    Ciphertext ct;
    ZqVec y;
    BitString u;
    int b = 0;
    int b_prime = 0;
    int d = 0;
    int d_prime = 0;
    bool success = false;

    // Verifier-side secrets, kept so a stored transcript can be rescored offline.
    ZqVec s;
    ZqVec e;
    BitString f;
    BitMat N;
};

/// Field-by-field equality, including the stored secrets.
bool operator==(const Transcript& a, const Transcript& b);

Transcript verifier_score(const VerifierState& state, const Msg2& msg, int d_prime, const Params& params);

/// Recomputes d and the success flag from the stored secrets. Returns true iff both match.
bool rescore(const Transcript& t, const Params& params);

// ---------------------------------------------------------------------------------------------
// Provers

class ProverSession
{
public:
    virtual ~ProverSession() = default;
    virtual Msg2 respond1(const Msg1& msg) = 0;
    virtual int respond2(int b_prime) = 0;
    /// Claw information for simulated quantum sessions.
    virtual std::optional<ProverState> quantum_state() const { return std::nullopt; }
};

class Prover
{
public:
    virtual ~Prover() = default;
    virtual std::string name() const = 0;
    virtual bool needs_witness() const { return false; }
    /// `witness` must be non-null when needs_witness() is true.
    virtual std::unique_ptr<ProverSession> open(const Params& params, const Witness* witness, RngStream rng) const = 0;
};

class HonestProver final : public Prover
{
public:
    std::string name() const override { return "honest"; }
    bool needs_witness() const override { return true; }
    std::unique_ptr<ProverSession> open(const Params& params, const Witness* witness, RngStream rng) const override;
};

/// (y, u, p) from the first round; p is opaque memory carried to the second round.
struct FirstResponse
{
    ZqVec y;
    BitString u;
    std::vector<std::int64_t> memory;
};

/// A classical prover split into two replayable steps. SecondResponse only sees (b', p).
class ClassicalStrategy : public Prover
{
public:
    virtual FirstResponse first_response(const PublicKey& pk, const Ciphertext& ct, const Params& params,
                                         RngStream& rng) const = 0;
    virtual int second_response(const FirstResponse& p, int b_prime, RngStream& rng) const = 0;

    std::unique_ptr<ProverSession> open(const Params& params, const Witness* witness, RngStream rng) const override;
};

/// y = 0, u = 0, d' = 0. Wins exactly when b AND b' = 0.
class BaselineProver final : public ClassicalStrategy
{
public:
    std::string name() const override { return "classical-baseline"; }
    FirstResponse first_response(const PublicKey& pk, const Ciphertext& ct, const Params& params,
                                 RngStream& rng) const override;
    int second_response(const FirstResponse& p, int b_prime, RngStream& rng) const override;
};

/// y = 0, uniform u and d'.
class RandomAnswerProver final : public ClassicalStrategy
{
public:
    std::string name() const override { return "random"; }
    FirstResponse first_response(const PublicKey& pk, const Ciphertext& ct, const Params& params,
                                 RngStream& rng) const override;
    int second_response(const FirstResponse& p, int b_prime, RngStream& rng) const override;
};

/// y = 0 and d' = 1 with probability p regardless of the challenge.
class BernoulliProver final : public ClassicalStrategy
{
public:
    explicit BernoulliProver(double p);
    std::string name() const override;
    FirstResponse first_response(const PublicKey& pk, const Ciphertext& ct, const Params& params,
                                 RngStream& rng) const override;
    int second_response(const FirstResponse& p, int b_prime, RngStream& rng) const override;

private:
    double p_;
};

/// ct-independent deterministic strategies: y = 0, u in {0, e_1}, d' a fixed function of b'.
class DeterministicStrategy final : public ClassicalStrategy
{
public:
    enum class UChoice
    {
        zero,
        unit
    };
    enum class Answer
    {
        zero,
        one,
        copy,
        flip
    };

    DeterministicStrategy(UChoice u, Answer a) : u_(u), a_(a) {}

    std::string name() const override;
    FirstResponse first_response(const PublicKey& pk, const Ciphertext& ct, const Params& params,
                                 RngStream& rng) const override;
    int second_response(const FirstResponse& p, int b_prime, RngStream& rng) const override;

    /// Exact winning probability against a verifier whose d is u . [s]; uniform b, b' and s.
    double exact_value(std::uint64_t q) const;

    /// Exact winning probability in the rewound experiments, where d is the majority of lambda votes
    /// d'(b_k) xor (b and b_k) over fresh challenges b_k. Enumerates all 2^lambda challenge vectors.
    double rewound_value(Eigen::Index lambda) const;

    static std::vector<DeterministicStrategy> all();

private:
    UChoice u_;
    Answer a_;
};

/// "honest", "classical-baseline" (or "baseline"), "random", "bernoulli:<p>" or a DeterministicStrategy name.
std::unique_ptr<Prover> make_prover(const std::string& name);

// ---------------------------------------------------------------------------------------------
// Runner

struct TrialRecord
{
    Transcript transcript;
    std::optional<ClawCase> claw;
    /// For two-preimage honest trials: whether the verifier's Invert recovered the simulator's (x0, x1)
    /// and x1 - x0 = s.
    bool claw_consistent = true;
};

TrialRecord run_trial(const Params& params, const Prover& prover, const Seed& master, std::uint64_t index);

struct ExperimentOptions
{
    unsigned workers = 1;
    bool keep_transcripts = false;
};

struct ExperimentResult
{
    Stats stats;
    std::uint64_t two_preimage = 0;
    std::uint64_t claw_inconsistent = 0;
    std::vector<Transcript> transcripts;
};

/// Deterministic in (params, prover, trials, master); the worker count only affects wall time.
ExperimentResult run_experiment(const Params& params, const Prover& prover, std::uint64_t trials, const Seed& master,
                                const ExperimentOptions& options = {});

enum class RewindVariant
{
    C,        ///< Charlie holds the trapdoor and computes d by inversion
    C_prime,  ///< Charlie votes over lambda replays of SecondResponse
    C_double  ///< as C_prime, with ct an encryption of 0
};

const char* to_string(RewindVariant v);

/// MAJ(z) = 1 iff the Hamming weight of z is at least half its length.
int majority(const std::vector<int>& bits);

/// Throws std::invalid_argument when the prover is not a ClassicalStrategy.
Stats rewinding_experiment(RewindVariant variant, const Prover& prover, const Params& params, std::uint64_t trials,
                           const Seed& master);

}  // namespace rtcf
