#pragma once

#include "rtcf/sampling.hpp"
#include "rtcf/zq.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace rtcf {

/// Protocol parameters. Everything except (n, sigma, q) is derived:
/// Q = ceil(log2 q), m = n(2Q+1), tau = q/(4mQ), lambda = n.
class Params
{
public:
    static Params make(std::string name, Eigen::Index n, double sigma, std::uint64_t q);

    const std::string& preset() const { return preset_; }
    Eigen::Index lambda() const { return lambda_; }
    Eigen::Index n() const { return n_; }
    Eigen::Index m() const { return m_; }
    std::uint64_t q() const { return mod_.value(); }
    int Q() const { return Q_; }
    double sigma() const { return sigma_; }
    const Rational& tau() const { return tau_; }
    const Modulus& mod() const { return mod_; }
    const GaussianTable& noise() const { return *noise_; }

    /// Rows of the trapdoor's gadget block (Qn) and of its uniform block ((Q+1)n).
    Eigen::Index gadget_rows() const { return n_ * Q_; }
    Eigen::Index uniform_rows() const { return n_ * (Q_ + 1); }

    /// cos^2(pi/8) - 5 m sigma^2 / q^2 - m sigma / (2 tau)
    double completeness_bound() const;
    /// m sigma / (2 tau)
    double two_preimage_deficit() const;
    /// 4 pi m sigma / q
    double rsp_accuracy_bound() const;

    /// Whether the remote-state-preparation constraint tau >= 2 m sigma holds.
    bool supports_rsp() const;

    /// Free-form label shown next to results, e.g. "functional, not secure".
    const std::string& note() const { return note_; }
    Params with_note(std::string note) const;

private:
    Params(std::string name, Eigen::Index n, double sigma, Modulus mod);

    std::string preset_;
    Eigen::Index lambda_;
    Eigen::Index n_;
    Eigen::Index m_;
    int Q_;
    double sigma_;
    Rational tau_;
    Modulus mod_;
    std::string note_;
    std::shared_ptr<const GaussianTable> noise_;
};

/// n = 4, sigma = 3, q = first prime >= 2^42. Functional, not secure: chosen so the
/// completeness error terms are below 1e-4.
Params desk_preset();

/// n = 2, sigma = 1, q = first prime >= 2^20. Small enough that aborts and single-preimage
/// claws happen often, which exercises the failure paths.
Params toy_preset();

Params preset_by_name(std::string_view name);

/// sigma = n^c and q a random prime in [n^{2+eps} sigma, 2 n^{2+eps} sigma].
Params select_params(Eigen::Index n, double c, double eps, RngStream& rng);

}  // namespace rtcf
