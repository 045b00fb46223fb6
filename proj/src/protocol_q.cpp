#include "rtcf/protocol_q.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace rtcf {

const char* to_string(ClawCase c) { return c == ClawCase::two_preimage ? "two-preimage" : "single-preimage"; }

const char* to_string(RewindVariant v)
{
    switch (v) {
    case RewindVariant::C: return "C";
    case RewindVariant::C_prime: return "C'";
    case RewindVariant::C_double: return "C''";
    }
    return "?";
}

VerifierRound1 verifier_round1(const Params& params, RngStream& rng)
{
    VerifierRound1 out;
    out.state.keypair = gen_j(params, rng);
    out.state.b = rng.bit();
    out.state.f = sample_bits(params.m(), rng);
    out.state.ct = encrypt_bit_with(out.state.keypair.pk, out.state.b, out.state.f, params);
    out.msg = Msg1{out.state.keypair.pk, out.state.ct};
    return out;
}

ProverRound1 measure_claw(const Msg1& msg, const Witness& witness, const Params& params, RngStream& rng)
{
    const Modulus& mod = params.mod();
    const ZqMat& A = msg.pk.A;
    const ZqVec& v = msg.pk.v;
    if (witness.s.size() != params.n() || witness.e.size() != params.m() ||
        add(mat_vec(A, witness.s, mod), witness.e, mod) != v) {
        throw std::invalid_argument("honest prover: witness does not match the public key");
    }

    const ZqVec x = sample_uniform(params.n(), mod, rng);
    const int c = rng.bit();
    const ZqVec g = sample_box(params.m(), params.tau(), mod, rng);
    ZqVec y = add(mat_vec(A, x, mod), g, mod);
    if (c) y = sub(y, v, mod);

    // The other branch's residual is g + e (c = 0) or g - e (c = 1).
    const ZqVec other = c ? sub(g, witness.e, mod) : add(g, witness.e, mod);
    const AngleSeq angles = angle_sequence(msg.ct.a, mod);

    ProverRound1 out;
    out.msg.y = y;
    if (params.tau().admits(inf_norm(other, mod))) {
        out.state.claw_case = ClawCase::two_preimage;
        out.state.x0 = c ? sub(x, witness.s, mod) : x;
        out.state.x1 = c ? x : add(x, witness.s, mod);
        MeasuredQubit mq = simulate_ghz_measurement(out.state.x1, out.state.x0, angles, mod, rng);
        out.msg.u = std::move(mq.u);
        out.state.qubit = mq.qubit;
    } else {
        out.state.claw_case = ClawCase::single_preimage;
        (c ? out.state.x1 : out.state.x0) = x;
        MeasuredQubit mq = simulate_basis_measurement(x, c, angles, mod, rng);
        out.msg.u = std::move(mq.u);
        out.state.qubit = mq.qubit;
    }
    return out;
}

ProverRound1 honest_prover_round1(const Msg1& msg, const Witness& witness, const Params& params, RngStream& rng)
{
    ProverRound1 out = measure_claw(msg, witness, params, rng);
    out.state.qubit = rotate_z(out.state.qubit, msg.ct.w);
    return out;
}

int honest_prover_round2(const ProverState& state, int b_prime, RngStream& rng)
{
    const double xi = (b_prime ? -1.0 : 1.0) * std::numbers::pi / 4.0;
    return measure_xy(state.qubit, xi, rng);
}

int verifier_d(const TrapdoorPair& trapdoor, const ZqVec& v, const Msg2& msg, const Params& params)
{
    if (msg.y.size() != params.m()) throw std::invalid_argument("response: y must have length m");
    if (msg.u.size() != params.gadget_rows()) throw std::invalid_argument("response: u must have length n Q");
    if ((msg.u.array() > 1).any()) throw std::invalid_argument("response: u must be a bit string");
    const Modulus& mod = params.mod();
    const ZqVec x0 = invert(trapdoor, msg.y, params);
    const ZqVec x1 = invert(trapdoor, add(msg.y, v, mod), params);
    return bit_dot(msg.u, bit_xor(bits_le_vec(x0, params.Q()), bits_le_vec(x1, params.Q())));
}

Transcript verifier_score(const VerifierState& state, const Msg2& msg, int d_prime, const Params& params)
{
    if (state.b_prime != 0 && state.b_prime != 1) throw std::logic_error("verifier_score: challenge not issued");
    if (d_prime != 0 && d_prime != 1) throw std::invalid_argument("response: d' must be a bit");
    Transcript t;
    t.preset = params.preset();
    t.pk = state.keypair.pk;
    t.ct = state.ct;
    t.y = msg.y;
    t.u = msg.u;
    t.b = state.b;
    t.b_prime = state.b_prime;
    t.d = verifier_d(state.keypair.trapdoor, state.keypair.pk.v, msg, params);
    t.d_prime = d_prime;
    t.success = chsh_success(t.d, t.d_prime, t.b, t.b_prime);
    t.s = state.keypair.s;
    t.e = state.keypair.e;
    t.f = state.f;
    t.N = state.keypair.trapdoor.N;
    return t;
}

namespace {

template <class M>
bool same(const M& a, const M& b)
{
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

}  // namespace

bool operator==(const Transcript& a, const Transcript& b)
{
    return a.preset == b.preset && a.prover == b.prover && a.seed == b.seed && a.trial == b.trial &&
           same(a.pk.A, b.pk.A) && same(a.pk.v, b.pk.v) && same(a.ct.a, b.ct.a) && a.ct.w == b.ct.w &&
           same(a.y, b.y) && same(a.u, b.u) && a.b == b.b && a.b_prime == b.b_prime && a.d == b.d &&
           a.d_prime == b.d_prime && a.success == b.success && same(a.s, b.s) && same(a.e, b.e) &&
           same(a.f, b.f) && same(a.N, b.N);
}

bool rescore(const Transcript& t, const Params& params)
{
    const TrapdoorPair pair{t.pk.A, t.N};
    const int d = verifier_d(pair, t.pk.v, Msg2{t.y, t.u}, params);
    return d == t.d && chsh_success(d, t.d_prime, t.b, t.b_prime) == t.success;
}

// ---------------------------------------------------------------------------------------------

namespace {

class HonestSession final : public ProverSession
{
public:
    HonestSession(const Params& params, Witness witness, RngStream rng)
        : params_(params), witness_(std::move(witness)), rng_(std::move(rng))
    {
    }

    Msg2 respond1(const Msg1& msg) override
    {
        ProverRound1 r = honest_prover_round1(msg, witness_, params_, rng_);
        state_ = std::move(r.state);
        return r.msg;
    }

    int respond2(int b_prime) override
    {
        if (!state_) throw std::logic_error("honest prover: challenge before first response");
        return honest_prover_round2(*state_, b_prime, rng_);
    }

    std::optional<ProverState> quantum_state() const override { return state_; }

private:
    Params params_;
    Witness witness_;
    RngStream rng_;
    std::optional<ProverState> state_;
};

class ClassicalSession final : public ProverSession
{
public:
    ClassicalSession(const ClassicalStrategy& strategy, const Params& params, RngStream rng)
        : strategy_(strategy), params_(params), rng_(std::move(rng))
    {
    }

    Msg2 respond1(const Msg1& msg) override
    {
        memory_ = strategy_.first_response(msg.pk, msg.ct, params_, rng_);
        return Msg2{memory_->y, memory_->u};
    }

    int respond2(int b_prime) override
    {
        if (!memory_) throw std::logic_error("classical prover: challenge before first response");
        return strategy_.second_response(*memory_, b_prime, rng_);
    }

private:
    const ClassicalStrategy& strategy_;
    Params params_;
    RngStream rng_;
    std::optional<FirstResponse> memory_;
};

FirstResponse zero_response(const Params& params)
{
    return FirstResponse{ZqVec::Zero(params.m()), BitString::Zero(params.gadget_rows()), {}};
}

}  // namespace

std::unique_ptr<ProverSession> HonestProver::open(const Params& params, const Witness* witness, RngStream rng) const
{
    if (witness == nullptr) throw std::invalid_argument("honest prover simulation needs the (s, e) witness");
    return std::make_unique<HonestSession>(params, *witness, std::move(rng));
}

std::unique_ptr<ProverSession> ClassicalStrategy::open(const Params& params, const Witness*, RngStream rng) const
{
    return std::make_unique<ClassicalSession>(*this, params, std::move(rng));
}

FirstResponse BaselineProver::first_response(const PublicKey&, const Ciphertext&, const Params& params,
                                             RngStream&) const
{
    return zero_response(params);
}

int BaselineProver::second_response(const FirstResponse&, int, RngStream&) const { return 0; }

FirstResponse RandomAnswerProver::first_response(const PublicKey&, const Ciphertext&, const Params& params,
                                                 RngStream& rng) const
{
    FirstResponse r = zero_response(params);
    r.u = sample_bits(params.gadget_rows(), rng);
    return r;
}

int RandomAnswerProver::second_response(const FirstResponse&, int, RngStream& rng) const { return rng.bit(); }

BernoulliProver::BernoulliProver(double p) : p_(p)
{
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("BernoulliProver: p must lie in [0, 1]");
}

std::string BernoulliProver::name() const { return "bernoulli(" + std::to_string(p_) + ")"; }

FirstResponse BernoulliProver::first_response(const PublicKey&, const Ciphertext&, const Params& params,
                                              RngStream&) const
{
    return zero_response(params);
}

int BernoulliProver::second_response(const FirstResponse&, int, RngStream& rng) const
{
    return rng.uniform01() < p_ ? 1 : 0;
}

std::string DeterministicStrategy::name() const
{
    static const char* answers[] = {"0", "1", "b'", "not-b'"};
    return std::string("det(u=") + (u_ == UChoice::zero ? "0" : "e1") + ",d'=" + answers[static_cast<int>(a_)] + ")";
}

FirstResponse DeterministicStrategy::first_response(const PublicKey&, const Ciphertext&, const Params& params,
                                                    RngStream&) const
{
    FirstResponse r = zero_response(params);
    if (u_ == UChoice::unit) r.u(0) = 1;
    return r;
}

int DeterministicStrategy::second_response(const FirstResponse&, int b_prime, RngStream&) const
{
    switch (a_) {
    case Answer::zero: return 0;
    case Answer::one: return 1;
    case Answer::copy: return b_prime & 1;
    case Answer::flip: return (b_prime & 1) ^ 1;
    }
    return 0;
}

double DeterministicStrategy::exact_value(std::uint64_t q) const
{
    // y = 0 gives x0 = 0 and x1 = s, so d = u . [s]: zero, or the low bit of s_1.
    const double p_odd = static_cast<double>((q - 1) / 2) / static_cast<double>(q);
    const double p_d1 = u_ == UChoice::zero ? 0.0 : p_odd;
    RngStream unused(Seed{});
    double total = 0.0;
    for (int b = 0; b < 2; ++b) {
        for (int bp = 0; bp < 2; ++bp) {
            const int need_d = second_response(FirstResponse{}, bp, unused) ^ (b & bp);
            total += 0.25 * (need_d ? p_d1 : 1.0 - p_d1);
        }
    }
    return total;
}

double DeterministicStrategy::rewound_value(Eigen::Index lambda) const
{
    if (lambda < 1 || lambda > 20) throw std::invalid_argument("rewound_value: lambda must be in [1, 20]");
    RngStream unused(Seed{});
    const int answer[2] = {second_response(FirstResponse{}, 0, unused), second_response(FirstResponse{}, 1, unused)};
    const std::uint64_t patterns = std::uint64_t{1} << lambda;
    double total = 0.0;
    for (int b = 0; b < 2; ++b) {
        double p_d1 = 0.0;
        for (std::uint64_t pat = 0; pat < patterns; ++pat) {
            std::vector<int> votes(static_cast<std::size_t>(lambda));
            for (Eigen::Index k = 0; k < lambda; ++k) {
                const int bk = static_cast<int>((pat >> k) & 1);
                votes[static_cast<std::size_t>(k)] = answer[bk] ^ (b & bk);
            }
            p_d1 += majority(votes) / static_cast<double>(patterns);
        }
        for (int bp = 0; bp < 2; ++bp) {
            const int need_d = answer[bp] ^ (b & bp);
            total += 0.25 * (need_d ? p_d1 : 1.0 - p_d1);
        }
    }
    return total;
}

std::vector<DeterministicStrategy> DeterministicStrategy::all()
{
    std::vector<DeterministicStrategy> out;
    for (UChoice u : {UChoice::zero, UChoice::unit}) {
        for (Answer a : {Answer::zero, Answer::one, Answer::copy, Answer::flip}) out.emplace_back(u, a);
    }
    return out;
}

std::unique_ptr<Prover> make_prover(const std::string& name)
{
    if (name == "honest") return std::make_unique<HonestProver>();
    if (name == "classical-baseline" || name == "baseline") return std::make_unique<BaselineProver>();
    if (name == "random") return std::make_unique<RandomAnswerProver>();
    if (name.rfind("bernoulli:", 0) == 0) {
        std::size_t used = 0;
        const std::string rest = name.substr(10);
        const double p = std::stod(rest, &used);
        if (used != rest.size() || !(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli:<p> needs p in [0, 1]");
        return std::make_unique<BernoulliProver>(p);
    }
    for (const DeterministicStrategy& d : DeterministicStrategy::all()) {
        if (d.name() == name) return std::make_unique<DeterministicStrategy>(d);
    }
    throw std::invalid_argument("unknown prover '" + name + "'");
}

// ---------------------------------------------------------------------------------------------

TrialRecord run_trial(const Params& params, const Prover& prover, const Seed& master, std::uint64_t index)
{
    const RngStream trial = RngStream::derive(master, "poq", index);
    RngStream vrng = trial.fork("verifier");

    VerifierRound1 r1 = verifier_round1(params, vrng);
    const Witness witness = r1.state.witness();
    auto session = prover.open(params, prover.needs_witness() ? &witness : nullptr, trial.fork("prover"));

    const Msg2 m2 = session->respond1(r1.msg);
    r1.state.b_prime = vrng.bit();
    const int d_prime = session->respond2(r1.state.b_prime);

    TrialRecord rec;
    rec.transcript = verifier_score(r1.state, m2, d_prime, params);
    rec.transcript.prover = prover.name();
    rec.transcript.seed = seed_hex(master);
    rec.transcript.trial = index;

    if (auto qs = session->quantum_state()) {
        rec.claw = qs->claw_case;
        if (qs->claw_case == ClawCase::two_preimage) {
            const Modulus& mod = params.mod();
            const TrapdoorPair& trap = r1.state.keypair.trapdoor;
            const ZqVec x0 = invert(trap, m2.y, params);
            const ZqVec x1 = invert(trap, add(m2.y, r1.state.keypair.pk.v, mod), params);
            rec.claw_consistent =
                x0 == qs->x0 && x1 == qs->x1 && sub(qs->x1, qs->x0, mod) == r1.state.keypair.s;
        }
    }
    return rec;
}

ExperimentResult run_experiment(const Params& params, const Prover& prover, std::uint64_t trials, const Seed& master,
                                const ExperimentOptions& options)
{
    if (trials == 0) throw std::invalid_argument("run_experiment: trials must be at least 1");
    const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(trials)));

    std::vector<std::uint8_t> success(trials), two(trials), bad(trials);
    std::vector<Transcript> transcripts(options.keep_transcripts ? trials : 0);

    auto work = [&](unsigned w) {
        for (std::uint64_t i = w; i < trials; i += workers) {
            TrialRecord rec = run_trial(params, prover, master, i);
            success[i] = rec.transcript.success;
            two[i] = rec.claw == ClawCase::two_preimage;
            bad[i] = !rec.claw_consistent;
            if (options.keep_transcripts) transcripts[i] = std::move(rec.transcript);
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    ExperimentResult out;
    std::uint64_t wins = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        wins += success[i];
        out.two_preimage += two[i];
        out.claw_inconsistent += bad[i];
    }
    out.stats = wilson(wins, trials);
    out.transcripts = std::move(transcripts);
    return out;
}

int majority(const std::vector<int>& bits)
{
    std::size_t weight = 0;
    for (int b : bits) weight += (b & 1);
    return 2 * weight >= bits.size() ? 1 : 0;
}

Stats rewinding_experiment(RewindVariant variant, const Prover& prover, const Params& params, std::uint64_t trials,
                           const Seed& master)
{
    const auto* strategy = dynamic_cast<const ClassicalStrategy*>(&prover);
    if (strategy == nullptr) throw std::invalid_argument("rewinding needs a replayable classical prover");
    if (trials == 0) throw std::invalid_argument("rewinding_experiment: trials must be at least 1");

    std::uint64_t wins = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const RngStream trial = RngStream::derive(master, std::string("rewind-") + to_string(variant), i);
        RngStream referee = trial.fork("referee");
        RngStream david = trial.fork("david");
        RngStream charlie = trial.fork("charlie");

        const int b = referee.bit();
        const int b_prime = referee.bit();
        const KeypairJ kp = gen_j(params, referee);
        const Ciphertext ct = encrypt_bit(kp.pk, variant == RewindVariant::C_double ? 0 : b, params, referee);

        const FirstResponse p = strategy->first_response(kp.pk, ct, params, david);

        int d = 0;
        if (variant == RewindVariant::C) {
            d = verifier_d(kp.trapdoor, kp.pk.v, Msg2{p.y, p.u}, params);
        } else {
            std::vector<int> votes(static_cast<std::size_t>(params.lambda()));
            for (int& z : votes) {
                const int bk = charlie.bit();
                z = strategy->second_response(p, bk, charlie) ^ (b & bk);
            }
            d = majority(votes);
        }
        const int d_prime = strategy->second_response(p, b_prime, david);
        wins += chsh_success(d, d_prime, b, b_prime);
    }
    return wilson(wins, trials);
}

}  // namespace rtcf
