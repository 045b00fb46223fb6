#include "rtcf/transcript_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace rtcf {

TranscriptError::TranscriptError(std::size_t l, const std::string& what)
    : std::runtime_error("transcript line " + std::to_string(l) + ": " + what), line(l)
{
}

json transcript_to_json(const Transcript& t, const Params& params)
{
    return json{
        {"params", params_to_json(params)},
        {"prover", t.prover},
        {"seed", t.seed},
        {"trial", t.trial},
        {"pk", {{"A", mat_to_json(t.pk.A)}, {"v", vec_to_json(t.pk.v)}}},
        {"ct", {{"a", vec_to_json(t.ct.a)}, {"w", zq_to_json(t.ct.w)}}},
        {"y", vec_to_json(t.y)},
        {"u", bits_to_json(t.u)},
        {"b", t.b},
        {"b_prime", t.b_prime},
        {"d", t.d},
        {"d_prime", t.d_prime},
        {"success", t.success},
        {"secrets", {{"s", vec_to_json(t.s)}, {"e", vec_to_json(t.e)}, {"f", bits_to_json(t.f)}, {"N", bitmat_to_hex(t.N)}}},
    };
}

std::pair<Transcript, Params> transcript_from_json(const json& j)
{
    try {
        Params p = params_from_json(j.at("params"));
        const Modulus& mod = p.mod();
        Transcript t;
        t.preset = p.preset();
        t.prover = j.at("prover").get<std::string>();
        t.seed = j.at("seed").get<std::string>();
        t.trial = j.at("trial").get<std::uint64_t>();
        t.pk.A = mat_from_json(j.at("pk").at("A"), mod, p.m(), p.n());
        t.pk.v = vec_from_json(j.at("pk").at("v"), mod, p.m());
        t.ct.a = vec_from_json(j.at("ct").at("a"), mod, p.n());
        t.ct.w = zq_from_json(j.at("ct").at("w"), mod);
        t.y = vec_from_json(j.at("y"), mod, p.m());
        t.u = bits_from_json(j.at("u"), p.gadget_rows());
        t.b = bit_from_json(j.at("b"));
        t.b_prime = bit_from_json(j.at("b_prime"));
        t.d = bit_from_json(j.at("d"));
        t.d_prime = bit_from_json(j.at("d_prime"));
        t.success = j.at("success").get<bool>();
        const json& sec = j.at("secrets");
        t.s = vec_from_json(sec.at("s"), mod, p.n());
        t.e = vec_from_json(sec.at("e"), mod, p.m());
        t.f = bits_from_json(sec.at("f"), p.m());
        t.N = bitmat_from_hex(sec.at("N"), p.gadget_rows(), p.uniform_rows());
        return {std::move(t), std::move(p)};
    } catch (const json::exception& e) {
        throw CodecError(e.what());
    }
}

void append_transcript(std::ostream& out, const Transcript& t, const Params& params)
{
    out << transcript_to_json(t, params).dump() << '\n';
}

void write_transcripts(std::ostream& out, const std::vector<Transcript>& ts, const Params& params)
{
    for (const auto& t : ts) append_transcript(out, t, params);
}

std::vector<LoadedTranscript> read_transcripts(std::istream& in)
{
    std::vector<LoadedTranscript> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto [t, p] = transcript_from_json(json::parse(line));
            out.push_back(LoadedTranscript{std::move(t), std::move(p), number});
        } catch (const json::exception& e) {
            throw TranscriptError(number, e.what());
        } catch (const CodecError& e) {
            throw TranscriptError(number, e.what());
        }
    }
    return out;
}

std::vector<LoadedTranscript> load_transcripts(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_transcripts(in);
}

void save_transcripts(const std::filesystem::path& path, const std::vector<Transcript>& ts, const Params& params)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_transcripts(out, ts, params);
}

RescoreSummary rescore_all(const std::vector<LoadedTranscript>& ts)
{
    RescoreSummary sum;
    for (const auto& lt : ts) {
        ++sum.total;
        if (!rescore(lt.transcript, lt.params)) sum.mismatched_lines.push_back(lt.line);
    }
    return sum;
}

}  // namespace rtcf
