#include "rtcf/regev.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rtcf {

namespace {

ZqVec noise_vector(const Params& params, RngStream& rng)
{
    return sample_truncated_gaussian_vec(params.m(), params.noise(), params.tau(), params.mod(), rng);
}

int check_bit(int b)
{
    if (b != 0 && b != 1) throw std::invalid_argument("message bit must be 0 or 1");
    return b;
}

}  // namespace

KeypairK gen_k(const Params& params, RngStream& rng)
{
    const Modulus& mod = params.mod();
    KeypairK kp;
    kp.s = sample_uniform(params.n(), mod, rng);
    kp.e = noise_vector(params, rng);
    kp.pk.A = sample_uniform_matrix(params.m(), params.n(), mod, rng);
    kp.pk.v = add(mat_vec(kp.pk.A, kp.s, mod), kp.e, mod);
    return kp;
}

KeypairJ gen_j(const Params& params, RngStream& rng)
{
    const Modulus& mod = params.mod();
    KeypairJ kp;
    kp.s = sample_uniform(params.n(), mod, rng);
    kp.e = noise_vector(params, rng);
    kp.trapdoor = gen_trap(params, rng);
    kp.pk.A = kp.trapdoor.A;
    kp.pk.v = add(mat_vec(kp.pk.A, kp.s, mod), kp.e, mod);
    return kp;
}

KeypairJ gen_j_noise_free(const Params& params, RngStream& rng)
{
    const Modulus& mod = params.mod();
    KeypairJ kp;
    kp.s = sample_uniform(params.n(), mod, rng);
    kp.e = ZqVec::Zero(params.m());
    kp.trapdoor = gen_trap(params, rng);
    kp.pk.A = kp.trapdoor.A;
    kp.pk.v = mat_vec(kp.pk.A, kp.s, mod);
    return kp;
}

std::uint64_t quarter(const Params& params) { return params.q() / 4; }

Ciphertext encrypt_bit_with(const PublicKey& pk, int b, const BitString& f, const Params& params)
{
    const Modulus& mod = params.mod();
    Ciphertext ct;
    ct.a = bits_mat(f, pk.A, mod);
    ct.w = mod.add(bits_dot(f, pk.v, mod), check_bit(b) ? quarter(params) : 0);
    return ct;
}

Ciphertext encrypt_bit(const PublicKey& pk, int b, const Params& params, RngStream& rng)
{
    return encrypt_bit_with(pk, b, sample_bits(params.m(), rng), params);
}

int decrypt_bit(const ZqVec& s, const Ciphertext& ct, const Params& params)
{
    const Modulus& mod = params.mod();
    const std::uint64_t l = mod.sub(inner(ct.a, s, mod), ct.w);
    return centered_abs(mod.add(l, quarter(params)), mod) <= centered_abs(l, mod) ? 1 : 0;
}

Ciphertext encrypt_zq_with(const PublicKey& pk, std::uint64_t alpha, const BitString& f, const Params& params)
{
    const Modulus& mod = params.mod();
    if (alpha >= mod.value()) throw std::invalid_argument("encrypt_zq: alpha must lie in [0, q)");
    Ciphertext ct;
    ct.a = bits_mat(f, pk.A, mod);
    ct.w = mod.add(bits_dot(f, pk.v, mod), alpha);
    return ct;
}

ZqEncryption encrypt_zq(const PublicKey& pk, std::uint64_t alpha, const Params& params, RngStream& rng)
{
    ZqEncryption out;
    out.f = sample_bits(params.m(), rng);
    out.ct = encrypt_zq_with(pk, alpha, out.f, params);
    return out;
}

Stats distinguishing_game(const Params& params, const BitAdversary& adversary, GameMode mode, std::uint64_t trials,
                          const Seed& seed, bool leak_trapdoor)
{
    if (trials == 0) throw std::invalid_argument("distinguishing_game: trials must be positive");
    std::uint64_t wins = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        RngStream rng = RngStream::derive(seed, "distinguishing-game", i);
        RngStream adv_rng = rng.fork("adversary");
        const KeypairJ kp = gen_j(params, rng);
        const int b = rng.bit();
        const Ciphertext ct = encrypt_bit(kp.pk, mode == GameMode::real_b ? b : 0, params, rng);
        const int guess = adversary(kp.pk, ct, leak_trapdoor ? &kp.trapdoor : nullptr, adv_rng);
        if (guess == b) ++wins;
    }
    return wilson(wins, trials);
}

BitAdversary random_guess_adversary()
{
    return [](const PublicKey&, const Ciphertext&, const TrapdoorPair*, RngStream& rng) { return rng.bit(); };
}

BitAdversary trapdoor_adversary(const Params& params)
{
    return [params](const PublicKey& pk, const Ciphertext& ct, const TrapdoorPair* leaked, RngStream& rng) {
        if (leaked == nullptr) return rng.bit();
        return decrypt_bit(invert(*leaked, pk.v, params), ct, params);
    };
}

BitAdversary naive_w_adversary(const Params& params)
{
    return [params](const PublicKey&, const Ciphertext& ct, const TrapdoorPair*, RngStream&) {
        return decrypt_bit(ZqVec::Zero(ct.a.size()), ct, params);
    };
}

double leftover_hash_distance(int m, std::uint64_t q)
{
    if (m < 1) throw std::invalid_argument("leftover_hash_distance: m must be positive");
    if (q < 2 || q > 7) throw std::invalid_argument("leftover_hash_distance: exhaustive evaluation needs q <= 7");
    const int qi = static_cast<int>(q);
    const int types = qi * qi;  // a row of [A | v] is a pair (A_i, v_i) in Z_q^2
    const double uniform = 1.0 / types;

    // The conditional law of (f^T A, f^T v) given [A | v] only depends on the multiset of rows,
    // so enumerate row-type multiplicities with multinomial weights.
    std::vector<int> counts(types, 0);
    double total = 0.0;
    const double log_norm = std::lgamma(m + 1.0) - m * std::log(static_cast<double>(types));

    std::function<void(int, int)> visit = [&](int type, int remaining) {
        if (type == types - 1) {
            counts[type] = remaining;
            double log_w = log_norm;
            for (const int c : counts) log_w -= std::lgamma(c + 1.0);
            std::vector<double> dist(types, 0.0), next(types);
            dist[0] = 1.0;
            for (int t = 0; t < types; ++t) {
                const int da = t / qi;
                const int dv = t % qi;
                for (int rep = 0; rep < counts[t]; ++rep) {
                    for (int cell = 0; cell < types; ++cell) {
                        const int a = cell / qi;
                        const int v = cell % qi;
                        const int from = ((a - da + qi) % qi) * qi + (v - dv + qi) % qi;
                        next[cell] = 0.5 * (dist[cell] + dist[from]);
                    }
                    dist.swap(next);
                }
            }
            double tvd = 0.0;
            for (const double p : dist) tvd += std::abs(p - uniform);
            total += std::exp(log_w) * 0.5 * tvd;
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[type] = c;
            visit(type + 1, remaining - c);
        }
        counts[type] = 0;
    };
    visit(0, m);
    return total;
}

}  // namespace rtcf
