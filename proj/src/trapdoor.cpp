#include "rtcf/trapdoor.hpp"

#include <stdexcept>
#include <vector>

namespace rtcf {

TrapdoorPair gen_trap(const Params& params, RngStream& rng)
{
    const Modulus& mod = params.mod();
    const Eigen::Index n = params.n();
    const ZqMat M = sample_uniform_matrix(params.uniform_rows(), n, mod, rng);
    BitMat N = sample_bit_matrix(params.gadget_rows(), params.uniform_rows(), rng);

    ZqMat top = gadget_matrix(n, params.Q(), mod);
    for (Eigen::Index j = 0; j < n; ++j) top.col(j) = add(top.col(j), bitmat_vec(N, M.col(j), mod), mod);

    TrapdoorPair pair;
    pair.A.resize(params.m(), n);
    pair.A << top, M;
    pair.N = std::move(N);
    return pair;
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> gadget_kernel_block(const Modulus& mod)
{
    const int Q = mod.bits();
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> S =
        Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(Q, Q);
    for (int k = 0; k + 1 < Q; ++k) {
        S(k, k) = 2;
        S(k, k + 1) = -1;
    }
    for (int j = 0; j < Q; ++j) S(Q - 1, j) = static_cast<std::int64_t>((mod.value() >> j) & 1);
    return S;
}

namespace {

// Solves S e = w over the integers for one gadget block, where w is the centered lift of
// S v' mod q. The first Q-1 rows give e_{k+1} = 2 e_k - w_k, so e_k = 2^k e_0 - c_k with
// c_0 = 0 and c_{k+1} = 2 c_k + w_k; the last row then pins e_0 = (w_{Q-1} + sum_j [q]_j c_j) / q.
// Magnitudes stay below Q * 2^{2Q} < 2^127 for q < 2^61.
bool solve_block(const Modulus& mod, const Eigen::Ref<const ZqVec>& block, std::vector<i128>& err)
{
    const int Q = mod.bits();
    const std::uint64_t q = mod.value();

    std::vector<std::int64_t> w(Q);
    for (int k = 0; k + 1 < Q; ++k) {
        w[k] = mod.centered(mod.sub(mod.add(block(k), block(k)), block(k + 1)));
    }
    std::uint64_t last = 0;
    for (int j = 0; j < Q; ++j) {
        if ((q >> j) & 1) last = mod.add(last, block(j));
    }
    w[Q - 1] = mod.centered(last);

    std::vector<i128> c(Q);
    c[0] = 0;
    for (int k = 0; k + 1 < Q; ++k) c[k + 1] = 2 * c[k] + w[k];

    i128 numerator = w[Q - 1];
    for (int j = 0; j < Q; ++j) {
        if ((q >> j) & 1) numerator += c[j];
    }
    if (numerator % static_cast<i128>(q) != 0) return false;
    const i128 e0 = numerator / static_cast<i128>(q);

    // The decodable region is |e_k| < q / (2Q).
    err.resize(Q);
    for (int k = 0; k < Q; ++k) {
        const i128 ek = (e0 << k) - c[k];
        const i128 mag = ek < 0 ? -ek : ek;
        if (mag * 2 * Q >= static_cast<i128>(q)) return false;
        err[k] = ek;
    }
    return true;
}

}  // namespace

ZqVec invert(const TrapdoorPair& pair, const ZqVec& v, const Params& params)
{
    if (v.size() != params.m()) throw std::invalid_argument("invert: vector length must be m");
    const Modulus& mod = params.mod();
    const Eigen::Index n = params.n();
    const int Q = params.Q();

    const ZqVec v1 = v.head(params.gadget_rows());
    const ZqVec v2 = v.tail(params.uniform_rows());
    const ZqVec vp = sub(v1, bitmat_vec(pair.N, v2, mod), mod);

    ZqVec s(n);
    std::vector<i128> err;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!solve_block(mod, vp.segment(i * Q, Q), err)) return ZqVec::Zero(n);
        // The first gadget entry is 1, so the block's first coordinate is s_i + e_0.
        s(i) = mod.sub(vp(i * Q), mod.reduce(err[0]));
    }
    return s;
}

std::optional<Preimage> find_preimage(const TrapdoorPair& pair, const ZqVec& y, const ZqVec* shift,
                                      const Params& params)
{
    if (y.size() != params.m()) throw std::invalid_argument("find_preimage: y must have length m");
    const Modulus& mod = params.mod();
    const ZqVec target = shift ? add(y, *shift, mod) : y;
    ZqVec x = invert(pair, target, params);
    ZqVec g = sub(target, mat_vec(pair.A, x, mod), mod);
    if (!params.tau().admits(inf_norm(g, mod))) return std::nullopt;
    return Preimage{std::move(x), std::move(g)};
}

}  // namespace rtcf
