#pragma once

#include "rtcf/params.hpp"
#include "rtcf/sampling.hpp"
#include "rtcf/zq.hpp"

#include <optional>

namespace rtcf {

/// A = [G + N M ; M] together with its trapdoor N.
///
/// A is m x n with m = n(2Q+1). The top Qn rows are the gadget matrix G plus N M, where
/// M is the uniform bottom (Q+1)n x n block and N is a uniform 0/1 matrix of size Qn x (Q+1)n.
struct TrapdoorPair
{
    ZqMat A;
    BitMat N;

    ZqMat bottom(const Params& params) const { return A.bottomRows(params.uniform_rows()); }
};

TrapdoorPair gen_trap(const Params& params, RngStream& rng);

/// The Q x Q integer matrix with (2, -1) on the diagonal/superdiagonal of its first Q-1 rows
/// and the little-endian bits of q in its last row. S g = 0 mod q.
Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> gadget_kernel_block(const Modulus& mod);

/// Recovers s from v = A s + e whenever ||e||_inf <= 2 tau. Returns the zero vector when the
/// per-block solve has no integral, in-range solution.
ZqVec invert(const TrapdoorPair& pair, const ZqVec& v, const Params& params);

struct Preimage
{
    ZqVec x;
    ZqVec g;
};

/// Packages Invert with the residual check: x = invert(y + shift), g = y + shift - A x, and the
/// result is present only when ||g||_inf <= tau. A null shift means the zero vector.
std::optional<Preimage> find_preimage(const TrapdoorPair& pair, const ZqVec& y, const ZqVec* shift,
                                      const Params& params);

}  // namespace rtcf
