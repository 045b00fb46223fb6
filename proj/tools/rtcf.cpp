// rtcf: command-line harness for the rotated-TCF proof of quantumness simulator.

#include "rtcf/ghz.hpp"
#include "rtcf/net.hpp"
#include "rtcf/params.hpp"
#include "rtcf/protocol_q.hpp"
#include "rtcf/puzzle.hpp"
#include "rtcf/randomness.hpp"
#include "rtcf/rsp.hpp"
#include "rtcf/stats.hpp"
#include "rtcf/transcript_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace rtcf;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAssert = 3;

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// JSON config files. Top-level scalars and arrays apply to the subcommand being run; an object
// keyed by a subcommand name applies to that subcommand only.
class JsonConfig : public CLI::Config
{
public:
    explicit JsonConfig(std::shared_ptr<std::string> active) : active_(std::move(active)) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override
    {
        return "{}";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override
    {
        json j;
        try {
            j = json::parse(input);
        } catch (const json::exception& e) {
            throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        flatten(j, active_->empty() ? std::vector<std::string>{} : std::vector<std::string>{*active_}, items, true);
        return items;
    }

private:
    static std::string scalar(const json& v)
    {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    void flatten(const json& obj, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out,
                 bool top) const
    {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (it.value().is_object()) {
                if (top) flatten(it.value(), {it.key()}, out, false);
                else throw CLI::ConversionError("config nests deeper than one subcommand level: " + it.key());
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (it.value().is_array()) {
                for (const auto& v : it.value()) item.inputs.push_back(scalar(v));
            } else {
                item.inputs.push_back(scalar(it.value()));
            }
            out.push_back(std::move(item));
        }
    }

    std::shared_ptr<std::string> active_;
};

struct Common
{
    std::string preset;
    std::optional<long> n;
    std::optional<double> sigma;
    std::optional<std::string> q;
    std::optional<double> c;
    std::optional<double> eps;
    std::string seed;
    std::string csv;
    std::string transcripts;
    unsigned workers = 1;
    bool assert_ = false;
};

void add_param_options(CLI::App* sub, Common& o)
{
    sub->add_option("--preset", o.preset, "Parameter preset: desk or toy (default desk)");
    sub->add_option("--n", o.n, "Explicit LWE dimension (with --sigma/--q or --c/--eps)")->check(CLI::PositiveNumber);
    sub->add_option("--sigma", o.sigma, "Explicit Gaussian width");
    sub->add_option("--q", o.q, "Explicit prime modulus (decimal)");
    sub->add_option("--c", o.c, "Rule-based parameters: sigma = n^c");
    sub->add_option("--eps", o.eps, "Rule-based parameters: q ~ n^{2+eps} sigma");
}

void add_seed_option(CLI::App* sub, Common& o)
{
    sub->add_option("--seed", o.seed, "Master seed, 64 hex characters")->envname("ROTATED_TCF_SEED");
}

Seed resolve_seed(const Common& o)
{
    if (!o.seed.empty()) {
        try {
            return parse_seed_hex(o.seed);
        } catch (const std::exception& e) {
            throw UsageError(std::string("--seed: ") + e.what());
        }
    }
    Seed s{};
    std::random_device rd;
    for (auto& b : s) b = static_cast<std::uint8_t>(rd());
    std::cerr << "no --seed given; using " << seed_hex(s) << "\n";
    return s;
}

Params resolve_params(const Common& o, const Seed& seed)
{
    const bool explicit_set = o.sigma || o.q;
    const bool rule_set = o.c || o.eps;
    const int sources = (!o.preset.empty()) + explicit_set + rule_set;
    if (sources > 1) throw UsageError("give exactly one parameter source: --preset, --n/--sigma/--q or --n/--c/--eps");
    if (sources == 0 && o.n) throw UsageError("--n needs --sigma/--q or --c/--eps");
    try {
        if (explicit_set) {
            if (!o.n || !o.sigma || !o.q) throw UsageError("explicit parameters need all of --n, --sigma and --q");
            return Params::make("custom", *o.n, *o.sigma, std::stoull(*o.q));
        }
        if (rule_set) {
            if (!o.n || !o.c || !o.eps) throw UsageError("rule-based parameters need all of --n, --c and --eps");
            RngStream rng = RngStream::derive(seed, "params", 0);
            return select_params(*o.n, *o.c, *o.eps, rng);
        }
        return preset_by_name(o.preset.empty() ? "desk" : o.preset);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

void print_params_banner(const Params& p)
{
    std::cout << "preset " << p.preset() << ": n=" << p.n() << " sigma=" << p.sigma() << " q=" << p.q() << " Q=" << p.Q()
              << " m=" << p.m();
    if (!p.note().empty()) std::cout << " (" << p.note() << ")";
    std::cout << "\n";
}

void write_csv(const std::string& path, const std::string& preset, const std::string& prover, const Stats& s,
               const Seed& seed)
{
    if (path.empty()) return;
    const std::string header = "preset,prover,trials,successes,estimate,ci_lo,ci_hi,seed\n";
    char row[512];
    std::snprintf(row, sizeof row, "%s,%s,%llu,%llu,%.6f,%.6f,%.6f,%s\n", preset.c_str(), prover.c_str(),
                  static_cast<unsigned long long>(s.trials), static_cast<unsigned long long>(s.successes), s.estimate,
                  s.ci_lo, s.ci_hi, seed_hex(seed).c_str());
    if (path == "-") {
        std::cout << header << row;
        return;
    }
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open " + path);
    if (fresh) out << header;
    out << row;
}

void print_stats(const std::string& label, const Stats& s)
{
    std::printf("%s: %llu/%llu successes, estimate %.6f, 95%% CI [%.6f, %.6f]\n", label.c_str(),
                static_cast<unsigned long long>(s.successes), static_cast<unsigned long long>(s.trials), s.estimate,
                s.ci_lo, s.ci_hi);
}

int report_assert(bool assert_on, const std::vector<std::pair<std::string, bool>>& checks)
{
    if (!assert_on) return kExitOk;
    bool all = true;
    for (const auto& [what, ok] : checks) {
        std::cout << (ok ? "assert ok:   " : "assert FAIL: ") << what << "\n";
        all = all && ok;
    }
    return all ? kExitOk : kExitAssert;
}

std::unique_ptr<Prover> prover_or_usage(const std::string& name)
{
    try {
        return make_prover(name);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

void require_trials(std::uint64_t trials)
{
    if (trials == 0) throw UsageError("--trials must be at least 1");
}

// ---------------------------------------------------------------------------------------------

int cmd_params(const Common& o)
{
    const Seed seed = resolve_seed(o);
    const Params p = resolve_params(o, seed);
    json j{{"preset", p.preset()},
           {"n", p.n()},
           {"sigma", p.sigma()},
           {"q", std::to_string(p.q())},
           {"Q", p.Q()},
           {"m", p.m()},
           {"lambda", p.lambda()},
           {"tau", std::to_string(p.tau().num) + "/" + std::to_string(p.tau().den)},
           {"completeness_bound", p.completeness_bound()},
           {"two_preimage_deficit", p.two_preimage_deficit()},
           {"rsp_accuracy_bound", p.rsp_accuracy_bound()},
           {"supports_rsp", p.supports_rsp()},
           {"note", p.note()}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

struct PoqOpts
{
    std::string prover = "honest";
    std::uint64_t trials = 1000;
    std::string rewind;
};

int cmd_poq(const Common& o, const PoqOpts& p)
{
    require_trials(p.trials);
    const Seed seed = resolve_seed(o);
    const Params params = resolve_params(o, seed);
    const auto prover = prover_or_usage(p.prover);
    print_params_banner(params);

    if (!p.rewind.empty()) {
        RewindVariant v;
        if (p.rewind == "C") v = RewindVariant::C;
        else if (p.rewind == "C'" || p.rewind == "C_prime") v = RewindVariant::C_prime;
        else if (p.rewind == "C''" || p.rewind == "C_double") v = RewindVariant::C_double;
        else throw UsageError("--rewind must be C, C' or C''");
        Stats s;
        try {
            s = rewinding_experiment(v, *prover, params, p.trials, seed);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        print_stats(std::string("rewinding ") + to_string(v) + " with " + prover->name(), s);
        write_csv(o.csv, params.preset(), prover->name() + "+rewind-" + to_string(v), s, seed);
        const double slack = 3.0 * std::sqrt(0.75 * 0.25 / static_cast<double>(s.trials));
        return report_assert(o.assert_, {{"rewinding success <= 3/4 + 3 sd", s.estimate <= 0.75 + slack}});
    }

    ExperimentOptions eo;
    eo.workers = o.workers;
    eo.keep_transcripts = !o.transcripts.empty();
    const ExperimentResult r = run_experiment(params, *prover, p.trials, seed, eo);
    print_stats("prover " + prover->name(), r.stats);
    if (prover->needs_witness()) {
        std::printf("two-preimage trials: %llu, claw inconsistencies: %llu\n",
                    static_cast<unsigned long long>(r.two_preimage), static_cast<unsigned long long>(r.claw_inconsistent));
    }
    write_csv(o.csv, params.preset(), prover->name(), r.stats, seed);
    if (!o.transcripts.empty()) save_transcripts(o.transcripts, r.transcripts, params);

    const double n = static_cast<double>(r.stats.trials);
    if (prover->needs_witness()) {
        const double bound = params.completeness_bound();
        const double slack = 3.0 * std::sqrt(bound * (1.0 - bound) / n);
        return report_assert(o.assert_, {{"honest success >= completeness bound - 3 sd", r.stats.estimate >= bound - slack},
                                         {"claw consistency", r.claw_inconsistent == 0}});
    }
    const double slack = 3.0 * std::sqrt(0.75 * 0.25 / n);
    return report_assert(o.assert_, {{"classical success <= 3/4 + 3 sd", r.stats.estimate <= 0.75 + slack}});
}

struct RspOpts
{
    std::optional<std::string> alpha;
    std::uint64_t trials = 1000;
    bool fig5 = false;
    bool zero_noise = false;
};

int cmd_rsp(const Common& o, const RspOpts& r)
{
    require_trials(r.trials);
    const Seed seed = resolve_seed(o);
    const Params params = resolve_params(o, seed);
    if (!params.supports_rsp()) throw UsageError("these parameters do not satisfy tau >= 2 m sigma");
    std::optional<std::uint64_t> alpha;
    if (r.alpha) {
        try {
            alpha = std::stoull(*r.alpha);
        } catch (const std::exception&) {
            throw UsageError("--alpha must be a decimal integer");
        }
        if (*alpha >= params.q()) throw UsageError("--alpha must be below q");
    }
    print_params_banner(params);
    RspOptions opts;
    opts.fig5_signs = r.fig5;
    opts.force_zero_noise = r.zero_noise;
    const RspReport rep = run_rsp(params, alpha, r.trials, seed, opts);

    const double bound = params.rsp_accuracy_bound();
    const double abort_bound = params.two_preimage_deficit();
    const double l1_bound = 2.0 * static_cast<double>(params.m()) * params.sigma();
    std::printf("runs %llu, aborts %llu (rate %.3g, bound %.3g)\n", static_cast<unsigned long long>(rep.trials),
                static_cast<unsigned long long>(rep.aborts), rep.abort_rate(), abort_bound);
    std::printf("mean trace distance %.6g (max %.6g, bound %.6g), nonzero in %llu runs\n", rep.mean_trace_distance,
                rep.max_trace_distance, bound, static_cast<unsigned long long>(rep.nonzero_distances));
    std::printf("mean ||e||_1 given no abort %.3f (bound %.0f), b mismatches %llu\n", rep.mean_e_l1, l1_bound,
                static_cast<unsigned long long>(rep.b_mismatches));
    if (r.fig5) std::cout << "note: figure sign convention selected; accuracy is expected to fail\n";

    if (!o.transcripts.empty()) {
        std::ofstream out(o.transcripts);
        if (!out) throw std::runtime_error("cannot open " + o.transcripts);
        out << json{{"kind", "rsp-summary"},
                    {"preset", params.preset()},
                    {"seed", seed_hex(seed)},
                    {"alpha", alpha ? json(std::to_string(*alpha)) : json(nullptr)},
                    {"trials", rep.trials},
                    {"aborts", rep.aborts},
                    {"mean_trace_distance", rep.mean_trace_distance},
                    {"max_trace_distance", rep.max_trace_distance},
                    {"mean_e_l1", rep.mean_e_l1},
                    {"fig5_signs", r.fig5},
                    {"zero_noise", r.zero_noise}}
                   .dump()
            << "\n";
    }
    const Stats s = wilson(rep.non_aborts, rep.trials);
    write_csv(o.csv, params.preset(), r.fig5 ? "rsp-fig5" : "rsp", s, seed);

    std::vector<std::pair<std::string, bool>> checks{{"mean trace distance <= 4 pi m sigma / q", rep.mean_trace_distance <= bound},
                                                     {"abort rate <= m sigma / (2 tau)", rep.abort_rate() <= abort_bound},
                                                     {"E[||e||_1 | no abort] <= 2 m sigma", rep.mean_e_l1 <= l1_bound}};
    if (r.zero_noise) checks.emplace_back("trace distance exactly 0 with e = 0", rep.max_trace_distance == 0.0);
    return report_assert(o.assert_, checks);
}

struct PuzzleOpts
{
    int ell = 50;
    double alpha = 0.8;
    std::string solver = "honest";
    std::uint64_t runs = 200;
};

int cmd_puzzle(const Common& o, const PuzzleOpts& p)
{
    require_trials(p.runs);
    const Seed seed = resolve_seed(o);
    const Params params = resolve_params(o, seed);
    Solver solver;
    RepetitionReport rep;
    try {
        solver = solver_from_string(p.solver);
        rep = threshold_repetition(params, p.ell, p.alpha, solver, p.runs, seed);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    print_params_banner(params);
    print_stats("threshold repetition ell=" + std::to_string(p.ell) + " alpha=" + std::to_string(p.alpha) + " solver " +
                    to_string(solver),
                rep.pass);
    std::printf("mean successes per run %.3f, single-instance rate %.4f\n", rep.mean_successes, rep.instance_rate);
    // Predictions assume independent instances.
    const int ell = static_cast<int>(p.ell);
    const int k = static_cast<int>(std::ceil(p.alpha * ell - 1e-9));
    const double quantum = std::pow(std::cos(std::numbers::pi / 8), 2);
    std::printf("binomial prediction Pr[Bin(%d, p) >= %d]: %.4f at p = %.4f, %.4f at p = 0.75\n", ell, k,
                binomial_upper_tail(ell, k, quantum), quantum, binomial_upper_tail(ell, k, 0.75));
    write_csv(o.csv, params.preset(), std::string("puzzle-") + to_string(solver), rep.pass, seed);
    if (solver == Solver::honest) return report_assert(o.assert_, {{"honest pass rate >= 0.99", rep.pass.estimate >= 0.99}});
    return report_assert(o.assert_, {{"classical pass rate <= 0.25", rep.pass.estimate <= 0.25}});
}

struct EntropyOpts
{
    std::string prover = "honest";
    std::uint64_t trials = 1000;
    std::uint64_t contexts = 200;
    std::uint64_t replays = 64;
};

int cmd_entropy(const Common& o, const EntropyOpts& e)
{
    require_trials(e.trials);
    const Seed seed = resolve_seed(o);
    const Params params = resolve_params(o, seed);
    const auto prover = prover_or_usage(e.prover);
    EntropyReport rep;
    try {
        rep = score_entropy_report(*prover, params, e.trials, e.contexts, e.replays, seed);
    } catch (const std::invalid_argument& ex) {
        throw UsageError(ex.what());
    }
    print_params_banner(params);
    print_stats("prover " + prover->name(), rep.success);
    std::printf("H_min(d' | context, b'=0) ~ %.4f bits (guessing %.4f; worst context %.4f bits)%s\n", rep.entropy.h_min,
                rep.entropy.guessing_prob, rep.entropy.worst_h_min, rep.entropy.rewound ? "" : " [independent runs]");
    if (rep.entropy.analytic_guessing_prob >= 0) {
        std::printf("analytic guessing probability %.4f\n", rep.entropy.analytic_guessing_prob);
    }
    if (rep.warning) std::cout << "WARNING: " << rep.message << "\n";
    write_csv(o.csv, params.preset(), prover->name(), rep.success, seed);
    return report_assert(o.assert_, {{"no low-entropy high-score warning", !rep.warning}});
}

struct NetOpts
{
    std::string host = "127.0.0.1";
    int port = 7353;
    std::uint64_t sessions = 1;
    std::uint64_t first_session = 0;
    long timeout_ms = 30000;
    bool no_witness = false;
    bool witness = false;
    std::string prover = "classical-baseline";
};

int cmd_serve(const Common& o, const NetOpts& n)
{
    if (n.sessions == 0) throw UsageError("--sessions must be at least 1");
    const Seed seed = resolve_seed(o);
    const Params params = resolve_params(o, seed);
    print_params_banner(params);
    Listener listener(n.host, static_cast<std::uint16_t>(n.port));
    std::cout << "listening on " << n.host << ":" << listener.port() << std::endl;
    ServeOptions so;
    so.sessions = n.sessions;
    so.first_session = n.first_session;
    so.timeout = std::chrono::milliseconds(n.timeout_ms);
    so.allow_witness_channel = !n.no_witness;

    std::ofstream tout;
    if (!o.transcripts.empty()) {
        tout.open(o.transcripts);
        if (!tout) throw std::runtime_error("cannot open " + o.transcripts);
    }
    std::uint64_t ok = 0, successes = 0, failed = 0;
    std::string prover_name = "network";
    serve_verifier(listener, params, seed, so, [&](const SessionOutcome& s) {
        if (s.ok && s.transcript) {
            ++ok;
            successes += s.transcript->success;
            prover_name = s.transcript->prover;
            if (tout) {
                append_transcript(tout, *s.transcript, params);
                tout.flush();
            }
        } else {
            ++failed;
            std::cerr << "session failed: " << s.error << "\n";
        }
    });
    const Stats s = wilson(successes, ok);
    print_stats("served sessions (" + std::to_string(failed) + " failed)", s);
    write_csv(o.csv, params.preset(), prover_name, s, seed);
    if (failed > 0) return 1;
    return report_assert(o.assert_, {{"every session completed", failed == 0}});
}

int cmd_connect(const Common& o, const NetOpts& n)
{
    if (n.sessions == 0) throw UsageError("--sessions must be at least 1");
    const Seed seed = resolve_seed(o);
    const auto prover = prover_or_usage(n.prover);
    if (prover->needs_witness() && !n.witness) {
        throw UsageError("the simulated honest prover needs --witness-channel over the network");
    }
    std::uint64_t ok = 0, successes = 0, failed = 0;
    for (std::uint64_t i = 0; i < n.sessions; ++i) {
        const ProverOutcome r = connect_prover(n.host, static_cast<std::uint16_t>(n.port), *prover, seed, n.witness,
                                               std::chrono::milliseconds(n.timeout_ms));
        if (r.ok) {
            ++ok;
            successes += r.success;
        } else {
            ++failed;
            std::cerr << "session failed: " << r.error << "\n";
        }
    }
    const Stats s = wilson(successes, ok);
    print_stats("prover " + prover->name() + " over the network (" + std::to_string(failed) + " failed)", s);
    write_csv(o.csv, "remote", prover->name(), s, seed);
    return failed > 0 ? 1 : kExitOk;
}

int cmd_oracle_check(const Common& o)
{
    const Seed seed = o.seed.empty() ? Seed{} : resolve_seed(o);
    bool ok = true;
    for (const OracleCase& c : oracle_equivalence_suite(seed)) {
        const bool pass = c.max_tvd < 1e-9;
        ok = ok && pass;
        std::printf("n=%d q=%llu %s %llu instances, max TVD %.3e %s\n", c.n, static_cast<unsigned long long>(c.q),
                    c.exhaustive ? "exhaustive" : "sampled", static_cast<unsigned long long>(c.instances), c.max_tvd,
                    pass ? "ok" : "FAIL");
    }
    return ok ? kExitOk : kExitAssert;
}

int cmd_rescore(const std::string& path)
{
    const auto loaded = load_transcripts(path);
    const RescoreSummary s = rescore_all(loaded);
    std::printf("%zu transcripts, %zu mismatches\n", s.total, s.mismatched_lines.size());
    for (std::size_t line : s.mismatched_lines) std::printf("mismatch at line %zu\n", line);
    return s.mismatched_lines.empty() ? kExitOk : kExitAssert;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rotated-TCF proof of quantumness: simulator, experiments and wire protocol", "rtcf"};
    app.require_subcommand(1);
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto active = std::make_shared<std::string>();
    app.set_config("--config", "", "JSON file with option values (command-line flags take precedence)");
    app.config_formatter(std::make_shared<JsonConfig>(active));
    app.fallthrough();

    Common common;
    PoqOpts poq;
    RspOpts rsp;
    PuzzleOpts puz;
    EntropyOpts ent;
    NetOpts net;
    std::string rescore_path;

    auto add_common = [&](CLI::App* sub, bool outputs) {
        add_param_options(sub, common);
        add_seed_option(sub, common);
        if (outputs) {
            sub->add_option("--csv", common.csv, "Append a Stats CSV row to this file ('-' for stdout)");
            sub->add_flag("--assert", common.assert_, "Exit 3 when an acceptance threshold fails");
        }
        sub->preparse_callback([active, sub](std::size_t) { *active = sub->get_name(); });
    };

    auto* p_params = app.add_subcommand("params", "Print the derived parameter set");
    add_common(p_params, false);

    auto* p_poq = app.add_subcommand("poq", "Run the proof-of-quantumness protocol");
    add_common(p_poq, true);
    p_poq->add_option("--prover", poq.prover, "honest, classical-baseline, random, bernoulli:<p> or a deterministic strategy");
    p_poq->add_option("--trials", poq.trials, "Number of protocol runs");
    p_poq->add_option("--workers", common.workers, "Worker threads (results do not depend on this)")->check(CLI::PositiveNumber);
    p_poq->add_option("--emit-transcripts", common.transcripts, "Write JSON-lines transcripts to PATH");
    p_poq->add_option("--rewind", poq.rewind, "Run a rewinding experiment instead: C, C' or C''");

    auto* p_rsp = app.add_subcommand("rsp", "Blind remote state preparation");
    add_common(p_rsp, true);
    p_rsp->add_option("--alpha", rsp.alpha, "Target angle numerator in Z_q (uniform per run when absent)");
    p_rsp->add_option("--trials", rsp.trials, "Number of runs");
    p_rsp->add_option("--emit-transcripts", common.transcripts, "Write a JSON-lines run summary to PATH");
    p_rsp->add_flag("--paper-fig5-signs", rsp.fig5, "Negate alpha and w (alternate sign convention; accuracy then fails)");
    p_rsp->add_flag("--zero-noise", rsp.zero_noise, "Draw keys with e = 0 (prepared state is exact)");

    auto* p_puz = app.add_subcommand("puzzle", "Threshold parallel repetition of the 1-of-2 puzzle");
    add_common(p_puz, true);
    p_puz->add_option("--ell", puz.ell, "Instances per run")->check(CLI::PositiveNumber);
    p_puz->add_option("--alpha", puz.alpha, "Pass threshold fraction, 3/4 < alpha < cos^2(pi/8)");
    p_puz->add_option("--solver", puz.solver, "honest or classical-baseline");
    p_puz->add_option("--runs,--trials", puz.runs, "Repetition runs");

    auto* p_ent = app.add_subcommand("entropy", "Score together with the min-entropy of the second answer");
    add_common(p_ent, true);
    p_ent->add_option("--prover", ent.prover, "Prover strategy");
    p_ent->add_option("--trials", ent.trials, "Protocol runs for the score");
    p_ent->add_option("--contexts", ent.contexts, "First-round contexts for the entropy estimate");
    p_ent->add_option("--replays", ent.replays, "Second-round samples per context (>= 10)");

    auto* p_serve = app.add_subcommand("serve", "Run the verifier as a TCP server");
    add_common(p_serve, true);
    p_serve->add_option("--host", net.host, "Bind address");
    p_serve->add_option("--port", net.port, "TCP port (0 picks one)")->check(CLI::Range(0, 65535));
    p_serve->add_option("--sessions", net.sessions, "Sessions to serve before exiting");
    p_serve->add_option("--first-session", net.first_session, "Index of the first session");
    p_serve->add_option("--timeout", net.timeout_ms, "Receive timeout in milliseconds")->check(CLI::PositiveNumber);
    p_serve->add_option("--emit-transcripts", common.transcripts, "Write JSON-lines transcripts to PATH");
    p_serve->add_flag("--no-witness-channel", net.no_witness, "Refuse the simulation witness extension");

    auto* p_conn = app.add_subcommand("connect", "Run a prover against a TCP verifier");
    add_common(p_conn, true);
    p_conn->add_option("--host", net.host, "Verifier address");
    p_conn->add_option("--port", net.port, "Verifier port")->check(CLI::Range(1, 65535));
    p_conn->add_option("--prover", net.prover, "Prover strategy");
    p_conn->add_option("--sessions", net.sessions, "Sessions to run");
    p_conn->add_option("--timeout", net.timeout_ms, "Receive timeout in milliseconds")->check(CLI::PositiveNumber);
    p_conn->add_flag("--witness-channel", net.witness, "Request the simulation-only witness frame (honest prover)");

    auto* p_oracle = app.add_subcommand("oracle-check", "Analytic GHZ simulator against the statevector oracle");
    add_seed_option(p_oracle, common);
    p_oracle->preparse_callback([active, p_oracle](std::size_t) { *active = p_oracle->get_name(); });

    auto* p_rescore = app.add_subcommand("rescore", "Recompute verifier decisions for a transcript file");
    p_rescore->add_option("path", rescore_path, "JSON-lines transcript file")->required();
    p_rescore->preparse_callback([active, p_rescore](std::size_t) { *active = p_rescore->get_name(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*p_params) return cmd_params(common);
        if (*p_poq) return cmd_poq(common, poq);
        if (*p_rsp) return cmd_rsp(common, rsp);
        if (*p_puz) return cmd_puzzle(common, puz);
        if (*p_ent) return cmd_entropy(common, ent);
        if (*p_serve) return cmd_serve(common, net);
        if (*p_conn) return cmd_connect(common, net);
        if (*p_oracle) return cmd_oracle_check(common);
        if (*p_rescore) return cmd_rescore(rescore_path);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TranscriptError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
