#include "rtcf/ghz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtcf {

namespace {

std::uint64_t mod_2q(i128 x, std::uint64_t q)
{
    const i128 two_q = 2 * static_cast<i128>(q);
    const i128 r = x % two_q;
    return static_cast<std::uint64_t>(r < 0 ? r + two_q : r);
}

void check_lengths(const ZqVec& x, const AngleSeq& angles, const Modulus& mod)
{
    if (angles.q != mod.value() || angles.Q != mod.bits()) {
        throw std::invalid_argument("angle sequence built for a different modulus");
    }
    if (static_cast<std::size_t>(x.size()) * angles.Q != angles.size()) {
        throw std::invalid_argument("angle sequence length must be n Q");
    }
}

}  // namespace

AngleSeq angle_sequence(const ZqVec& t, const Modulus& mod)
{
    const std::uint64_t q = mod.value();
    const int Q = mod.bits();
    AngleSeq seq;
    seq.q = q;
    seq.Q = Q;
    seq.r_units.reserve(static_cast<std::size_t>(t.size()) * Q);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        std::uint64_t r = mod_2q(2 * static_cast<i128>(t(i)), q);
        for (int j = 1; j <= Q; ++j) {
            seq.r_units.push_back(r);
            r = mod_2q(2 * static_cast<i128>(r), q);
        }
    }
    return seq;
}

std::uint64_t ghz_phase_units(const ZqVec& x, const ZqVec& y, const AngleSeq& angles, const BitString& u,
                              const Modulus& mod)
{
    check_lengths(x, angles, mod);
    if (y.size() != x.size()) throw std::invalid_argument("ghz_phase_units: x and y differ in length");
    if (static_cast<std::size_t>(u.size()) != angles.size()) {
        throw std::invalid_argument("ghz_phase_units: u must have length n Q");
    }
    const std::uint64_t q = mod.value();
    const BitString bx = bits_le_vec(x, angles.Q);
    const BitString by = bits_le_vec(y, angles.Q);
    i128 total = 0;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        const int diff = static_cast<int>(by(k)) - static_cast<int>(bx(k));
        if (diff == 0) continue;
        total += diff * static_cast<i128>(angles.r_units[k]);
        if (u(k)) total += q;
    }
    return mod_2q(total, q);
}

MeasuredQubit simulate_ghz_measurement(const ZqVec& x, const ZqVec& y, const AngleSeq& angles, const Modulus& mod,
                                       RngStream& rng)
{
    check_lengths(x, angles, mod);
    MeasuredQubit out;
    out.u = sample_bits(static_cast<Eigen::Index>(angles.size()), rng);
    out.qubit = PhaseQubit::superposed(mod.value(), ghz_phase_units(x, y, angles, out.u, mod));
    return out;
}

MeasuredQubit simulate_basis_measurement(const ZqVec& x, int c, const AngleSeq& angles, const Modulus& mod,
                                         RngStream& rng)
{
    check_lengths(x, angles, mod);
    MeasuredQubit out;
    out.u = sample_bits(static_cast<Eigen::Index>(angles.size()), rng);
    out.qubit = PhaseQubit::basis_state(mod.value(), c & 1);
    return out;
}

PhaseQubit rotate_z(const PhaseQubit& qubit, std::uint64_t w)
{
    if (!qubit.is_superposed()) return qubit;
    return PhaseQubit::superposed(qubit.q, mod_2q(static_cast<i128>(qubit.theta_units) + 2 * static_cast<i128>(w), qubit.q));
}

double prob_zero(const PhaseQubit& qubit, double gamma)
{
    if (!qubit.is_superposed()) return 0.5;
    const double c = std::cos((gamma - qubit.phase()) / 2.0);
    return c * c;
}

int measure_xy(const PhaseQubit& qubit, double gamma, RngStream& rng)
{
    return rng.uniform01() < prob_zero(qubit, gamma) ? 0 : 1;
}

Eigen::MatrixXd analytic_ghz_distribution(const ZqVec& x, const ZqVec& y, const AngleSeq& angles,
                                          std::uint64_t rotation, double gamma, const Modulus& mod)
{
    check_lengths(x, angles, mod);
    const int K = static_cast<int>(angles.size());
    const Eigen::Index outcomes = Eigen::Index{1} << K;
    const double weight = 1.0 / static_cast<double>(outcomes);
    Eigen::MatrixXd out(outcomes, 2);
    for (Eigen::Index idx = 0; idx < outcomes; ++idx) {
        const BitString u = bits_le(static_cast<std::uint64_t>(idx), K);
        const PhaseQubit qb =
            rotate_z(PhaseQubit::superposed(mod.value(), ghz_phase_units(x, y, angles, u, mod)), rotation);
        const double p0 = prob_zero(qb, gamma);
        out(idx, 0) = weight * p0;
        out(idx, 1) = weight * (1.0 - p0);
    }
    return out;
}

Eigen::MatrixXd analytic_basis_distribution(const ZqVec& x, int, const AngleSeq& angles, double, const Modulus& mod)
{
    check_lengths(x, angles, mod);
    const Eigen::Index outcomes = Eigen::Index{1} << angles.size();
    return Eigen::MatrixXd::Constant(outcomes, 2, 0.5 / static_cast<double>(outcomes));
}

double total_variation(const Eigen::MatrixXd& p, const Eigen::MatrixXd& r)
{
    if (p.rows() != r.rows() || p.cols() != r.cols()) throw std::invalid_argument("total_variation: shape mismatch");
    return 0.5 * (p - r).cwiseAbs().sum();
}

namespace {

ZqVec digits(std::uint64_t code, int n, std::uint64_t q)
{
    ZqVec v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = code % q;
        code /= q;
    }
    return v;
}

double check_instance(const ZqVec& x, const ZqVec& y, const ZqVec& t, std::uint64_t rotation, double gamma, int c,
                      const Modulus& mod)
{
    const AngleSeq angles = angle_sequence(t, mod);
    const double ghz = total_variation(
        analytic_ghz_distribution(x, y, angles, rotation, gamma, mod),
        statevector_oracle<double>(ghz_amplitudes<double>(x, y, mod.bits()), angles, 2 * rotation, gamma));
    const double basis =
        total_variation(analytic_basis_distribution(x, c, angles, gamma, mod),
                        statevector_oracle<double>(basis_amplitudes<double>(x, c, mod.bits()), angles, 0, gamma));
    return std::max(ghz, basis);
}

}  // namespace

std::vector<OracleCase> oracle_equivalence_suite(const Seed& seed, std::uint64_t exhaustive_limit,
                                                 std::uint64_t sample_cap)
{
    std::vector<OracleCase> out;
    for (int n : {1, 2}) {
        for (std::uint64_t q : {3u, 5u}) {
            const Modulus mod(q);
            OracleCase oc;
            oc.n = n;
            oc.q = q;
            std::uint64_t block = 1;
            for (int i = 0; i < n; ++i) block *= q;
            const std::uint64_t space = block * block * block;
            oc.exhaustive = space <= exhaustive_limit;
            oc.instances = oc.exhaustive ? space : sample_cap;
            RngStream rng = RngStream::derive(seed, "oracle-equivalence", static_cast<std::uint64_t>(n) * 16 + q);
            for (std::uint64_t k = 0; k < oc.instances; ++k) {
                const std::uint64_t code = oc.exhaustive ? k : rng.uniform_below(space);
                const ZqVec x = digits(code, n, q);
                const ZqVec y = digits(code / block, n, q);
                const ZqVec t = digits(code / (block * block), n, q);
                const std::uint64_t rotation = rng.uniform_below(q);
                const double gamma = (rng.bit() ? -1.0 : 1.0) * std::numbers::pi / 4.0;
                oc.max_tvd = std::max(oc.max_tvd, check_instance(x, y, t, rotation, gamma, rng.bit(), mod));
            }
            out.push_back(oc);
        }
    }
    return out;
}

}  // namespace rtcf
