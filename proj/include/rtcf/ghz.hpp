#pragma once

// Rotated XY-plane measurements on generalized GHZ states (|x>|1> + |y>|0>)/sqrt(2).
//
// Phases are exact integers modulo 2q in units of pi/q. Floating point only appears in
// prob_zero, where the final measurement angle is applied to a single qubit.

#include "rtcf/sampling.hpp"
#include "rtcf/zq.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rtcf {

struct PhaseQubit
{
    enum class Kind
    {
        superposed, ///< (|0> + e^{i theta_units pi/q}|1>)/sqrt(2)
        basis       ///< |bit>
    };

    Kind kind = Kind::basis;
    std::uint64_t q = 3;
    std::uint64_t theta_units = 0;
    int bit = 0;

    static PhaseQubit superposed(std::uint64_t q, std::uint64_t units)
    {
        return PhaseQubit{Kind::superposed, q, units % (2 * q), 0};
    }
    static PhaseQubit basis_state(std::uint64_t q, int bit) { return PhaseQubit{Kind::basis, q, 0, bit}; }

    bool is_superposed() const { return kind == Kind::superposed; }

    /// Phase in radians, in [0, 2 pi).
    double phase() const { return std::numbers::pi * static_cast<double>(theta_units) / static_cast<double>(q); }

    bool operator==(const PhaseQubit&) const = default;
};

/// Measurement angles r_k in units of pi/q, one per bit of [x].
struct AngleSeq
{
    std::vector<std::uint64_t> r_units;
    std::uint64_t q = 3;
    int Q = 2;

    std::size_t size() const { return r_units.size(); }
};

/// r_units[(i-1)Q + j] = 2^j t_i mod 2q for j = 1..Q.
AngleSeq angle_sequence(const ZqVec& t, const Modulus& mod);

/// Relative phase (units of pi/q) left on the last qubit after measuring [x], [y] with outcome u:
/// sum_i 2 (y_i - x_i) t_i + q sum_k ([y]_k xor [x]_k) u_k  (mod 2q).
std::uint64_t ghz_phase_units(const ZqVec& x, const ZqVec& y, const AngleSeq& angles, const BitString& u,
                              const Modulus& mod);

struct MeasuredQubit
{
    BitString u;
    PhaseQubit qubit;
};

/// Measures every qubit of [x]/[y] at its angle; u is uniform and the survivor carries ghz_phase_units.
MeasuredQubit simulate_ghz_measurement(const ZqVec& x, const ZqVec& y, const AngleSeq& angles, const Modulus& mod,
                                       RngStream& rng);

/// Same measurement on the product state |[x]>|c>: u is uniform and the survivor stays |c>.
MeasuredQubit simulate_basis_measurement(const ZqVec& x, int c, const AngleSeq& angles, const Modulus& mod,
                                         RngStream& rng);

/// |1> -> e^{2 pi i w / q}|1>, i.e. theta_units += 2w. Basis states are returned unchanged.
PhaseQubit rotate_z(const PhaseQubit& qubit, std::uint64_t w);

/// Pr[d = 0] when measuring at angle gamma: cos^2((gamma - beta)/2), or 1/2 for a basis state.
double prob_zero(const PhaseQubit& qubit, double gamma);

int measure_xy(const PhaseQubit& qubit, double gamma, RngStream& rng);

/// Exact P(u, d) predicted by the analytic rule. Rows are indexed by u read little-endian, columns by d.
/// `rotation` is applied with rotate_z before the final measurement.
Eigen::MatrixXd analytic_ghz_distribution(const ZqVec& x, const ZqVec& y, const AngleSeq& angles,
                                          std::uint64_t rotation, double gamma, const Modulus& mod);
Eigen::MatrixXd analytic_basis_distribution(const ZqVec& x, int c, const AngleSeq& angles, double gamma,
                                            const Modulus& mod);

inline constexpr int kOracleMaxQubits = 14;

/// Dense statevector reference. `amplitudes` holds the initial (K+1)-qubit state with qubit k at
/// bit k of the index and the surviving qubit at bit K. Qubits 0..K-1 are projected in order
/// onto (<0| + (-1)^{u_k} e^{-i r_k}<1|)/sqrt(2), every branch is kept, the survivor's |1>
/// amplitude is multiplied by e^{i pi rotation_units / q}, and the survivor is measured at gamma.
template <class Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>
statevector_oracle(const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>& amplitudes, const AngleSeq& angles,
                   std::uint64_t rotation_units, Real gamma)
{
    using Cplx = std::complex<Real>;
    using State = Eigen::Matrix<Cplx, Eigen::Dynamic, 1>;
    const int K = static_cast<int>(angles.size());
    if (K + 1 > kOracleMaxQubits) throw std::invalid_argument("statevector_oracle: too many qubits");
    if (amplitudes.size() != (Eigen::Index{1} << (K + 1))) {
        throw std::invalid_argument("statevector_oracle: amplitude vector has the wrong dimension");
    }

    const Real pi = std::numbers::pi_v<Real>;
    const Real inv_sqrt2 = Real(1) / std::sqrt(Real(2));
    const Real unit = pi / static_cast<Real>(angles.q);
    const Cplx rot = std::polar(Real(1), unit * static_cast<Real>(rotation_units % (2 * angles.q)));

    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> out =
        Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(Eigen::Index{1} << K, 2);

    // Depth-first over outcome prefixes; `state` spans the qubits not yet measured, lowest first.
    auto visit = [&](auto&& self, const State& state, int k, Eigen::Index u_index) -> void {
        if (k == K) {
            const Cplx a0 = state(0);
            const Cplx a1 = state(1) * rot;
            for (int d = 0; d < 2; ++d) {
                const Cplx proj = (a0 + (d ? Real(-1) : Real(1)) * std::polar(Real(1), -gamma) * a1) * inv_sqrt2;
                out(u_index, d) = std::norm(proj);
            }
            return;
        }
        const Cplx phase = std::polar(Real(1), -unit * static_cast<Real>(angles.r_units[k] % (2 * angles.q)));
        State next(state.size() / 2);
        for (int uk = 0; uk < 2; ++uk) {
            const Cplx coeff = (uk ? Real(-1) : Real(1)) * phase;
            for (Eigen::Index j = 0; j < next.size(); ++j) {
                next(j) = (state(2 * j) + coeff * state(2 * j + 1)) * inv_sqrt2;
            }
            self(self, next, k + 1, u_index | (Eigen::Index{uk} << k));
        }
    };
    visit(visit, amplitudes, 0, 0);
    return out;
}

/// Initial amplitudes for (|[x]>|1> + |[y]>|0>)/sqrt(2).
template <class Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> ghz_amplitudes(const ZqVec& x, const ZqVec& y, int Q)
{
    const BitString bx = bits_le_vec(x, Q);
    const BitString by = bits_le_vec(y, Q);
    const int K = static_cast<int>(bx.size());
    if (K + 1 > kOracleMaxQubits) throw std::invalid_argument("ghz_amplitudes: too many qubits");
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> amp =
        Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>::Zero(Eigen::Index{1} << (K + 1));
    const Real h = Real(1) / std::sqrt(Real(2));
    amp(static_cast<Eigen::Index>(recompose_le(bx)) | (Eigen::Index{1} << K)) += h;
    amp(static_cast<Eigen::Index>(recompose_le(by))) += h;
    return amp;
}

/// Initial amplitudes for |[x]>|c>.
template <class Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> basis_amplitudes(const ZqVec& x, int c, int Q)
{
    const BitString bx = bits_le_vec(x, Q);
    const int K = static_cast<int>(bx.size());
    if (K + 1 > kOracleMaxQubits) throw std::invalid_argument("basis_amplitudes: too many qubits");
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> amp =
        Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>::Zero(Eigen::Index{1} << (K + 1));
    amp(static_cast<Eigen::Index>(recompose_le(bx)) | (Eigen::Index{c & 1} << K)) = 1;
    return amp;
}

/// Total variation distance between two joint distributions of equal shape.
double total_variation(const Eigen::MatrixXd& p, const Eigen::MatrixXd& r);

struct OracleCase
{
    int n = 1;
    std::uint64_t q = 3;
    std::uint64_t instances = 0;
    bool exhaustive = true;
    double max_tvd = 0.0;
};

/// Analytic simulator against statevector_oracle<double> for n in {1, 2} and q in {3, 5}. Every
/// (x, y, t) is checked when there are at most `exhaustive_limit` of them, otherwise `sample_cap`
/// random triples. Each instance also gets a random rotation, a final angle of +-pi/4 and the
/// matching single-preimage check.
std::vector<OracleCase> oracle_equivalence_suite(const Seed& seed, std::uint64_t exhaustive_limit = 10000,
                                                 std::uint64_t sample_cap = 200);

}  // namespace rtcf
