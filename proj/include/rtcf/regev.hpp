#pragma once

// Single-bit LWE encryption in two flavours: K uses a uniform public matrix, J draws it from
// gen_trap so that the key owner also holds an inversion trapdoor. A bit b is encoded as
// w = f^T v + b floor(q/4); the quarter (rather than half) offset is what the CHSH-style
// protocols rely on. encrypt_zq carries a full Z_q message the same way.

#include "rtcf/params.hpp"
#include "rtcf/sampling.hpp"
#include "rtcf/stats.hpp"
#include "rtcf/trapdoor.hpp"
#include "rtcf/zq.hpp"

#include <functional>

namespace rtcf {

struct PublicKey
{
    ZqMat A;
    ZqVec v;
};

struct Ciphertext
{
    ZqVec a;
    std::uint64_t w = 0;
};

struct KeypairK
{
    PublicKey pk;
    ZqVec s;
    ZqVec e;
};

struct KeypairJ
{
    PublicKey pk;
    ZqVec s;
    TrapdoorPair trapdoor;
    ZqVec e;
};

KeypairK gen_k(const Params& params, RngStream& rng);
KeypairJ gen_j(const Params& params, RngStream& rng);

/// Keypair with every noise coordinate forced to zero. Test and simulation hook.
KeypairJ gen_j_noise_free(const Params& params, RngStream& rng);

std::uint64_t quarter(const Params& params);

Ciphertext encrypt_bit(const PublicKey& pk, int b, const Params& params, RngStream& rng);

/// Encryption with a caller-chosen subset vector f.
Ciphertext encrypt_bit_with(const PublicKey& pk, int b, const BitString& f, const Params& params);

/// Returns 1 iff |l + floor(q/4)| <= |l| where l = <a, s> - w.
int decrypt_bit(const ZqVec& s, const Ciphertext& ct, const Params& params);

struct ZqEncryption
{
    Ciphertext ct;
    BitString f;
};

/// (a, w) = (f^T A, f^T v + alpha). f is returned for simulation bookkeeping and never leaves the process.
ZqEncryption encrypt_zq(const PublicKey& pk, std::uint64_t alpha, const Params& params, RngStream& rng);
Ciphertext encrypt_zq_with(const PublicKey& pk, std::uint64_t alpha, const BitString& f, const Params& params);

enum class GameMode
{
    real_b,     ///< ct encrypts the hidden bit b
    always_zero ///< ct encrypts 0 regardless of b
};

/// Guesses b from (pk, ct). `leaked` is non-null only when the game was asked to leak the trapdoor.
using BitAdversary =
    std::function<int(const PublicKey& pk, const Ciphertext& ct, const TrapdoorPair* leaked, RngStream& rng)>;

/// Empirical Pr[b' = b] over fresh J keys, bits and ciphertexts.
Stats distinguishing_game(const Params& params, const BitAdversary& adversary, GameMode mode, std::uint64_t trials,
                          const Seed& seed, bool leak_trapdoor = false);

BitAdversary random_guess_adversary();
/// With a leaked trapdoor: recover s = Invert(v) and decrypt. Otherwise a coin flip.
BitAdversary trapdoor_adversary(const Params& params);
/// Decrypts with the all-zero key, i.e. guesses from w alone.
BitAdversary naive_w_adversary(const Params& params);

/// Exact total variation distance between (A, v, f^T A, f^T v) and uniform for n = 1, with A, v
/// uniform over Z_q^m and f uniform over {0,1}^m.
double leftover_hash_distance(int m, std::uint64_t q);

}  // namespace rtcf
