#include "rtcf/wire.hpp"

#include <algorithm>
#include <array>

namespace rtcf {

namespace {

constexpr std::array<std::pair<FrameType, const char*>, 8> kTypeNames{{
    {FrameType::hello, "hello"},
    {FrameType::setup, "setup"},
    {FrameType::response1, "response1"},
    {FrameType::challenge, "challenge"},
    {FrameType::response2, "response2"},
    {FrameType::result, "result"},
    {FrameType::error, "error"},
    {FrameType::sim_witness, "x-sim-witness"},
}};

bool scan_keys(const json& j, const std::vector<std::string>& deny)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (std::find(deny.begin(), deny.end(), it.key()) != deny.end()) return true;
            if (scan_keys(it.value(), deny)) return true;
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (scan_keys(v, deny)) return true;
        }
    }
    return false;
}

}  // namespace

const char* to_string(FrameType t)
{
    for (const auto& [type, name] : kTypeNames) {
        if (type == t) return name;
    }
    return "?";
}

std::optional<FrameType> frame_type_from_string(const std::string& s)
{
    for (const auto& [type, name] : kTypeNames) {
        if (s == name) return type;
    }
    return std::nullopt;
}

WireError::WireError(std::string c, const std::string& what) : std::runtime_error(what), code(std::move(c)) {}

json make_frame(FrameType type, json payload)
{
    return json{{"type", to_string(type)}, {"protocol_version", kProtocolVersion}, {"payload", std::move(payload)}};
}

json make_error(const std::string& code, const std::string& message)
{
    return make_frame(FrameType::error, json{{"code", code}, {"message", message}});
}

FrameType frame_type(const json& frame)
{
    if (!frame.is_object() || !frame.contains("type") || !frame["type"].is_string() || !frame.contains("payload") ||
        !frame.contains("protocol_version") || !frame["protocol_version"].is_number_integer()) {
        throw WireError("malformed", "frame envelope must carry type, protocol_version and payload");
    }
    const auto t = frame_type_from_string(frame["type"].get<std::string>());
    if (!t) throw WireError("malformed", "unknown frame type '" + frame["type"].get<std::string>() + "'");
    return *t;
}

std::string encode_frame(const json& frame)
{
    const std::string body = frame.dump();
    if (body.size() > kMaxFrameBytes) throw WireError("oversize", "frame exceeds the size limit");
    std::string out(4, '\0');
    const auto n = static_cast<std::uint32_t>(body.size());
    out[0] = static_cast<char>((n >> 24) & 0xff);
    out[1] = static_cast<char>((n >> 16) & 0xff);
    out[2] = static_cast<char>((n >> 8) & 0xff);
    out[3] = static_cast<char>(n & 0xff);
    return out + body;
}

void FrameReader::feed(const char* data, std::size_t size) { buffer_.append(data, size); }

std::optional<json> FrameReader::next()
{
    if (buffer_.size() < 4) return std::nullopt;
    const auto* p = reinterpret_cast<const unsigned char*>(buffer_.data());
    const std::size_t n = (std::size_t{p[0]} << 24) | (std::size_t{p[1]} << 16) | (std::size_t{p[2]} << 8) | p[3];
    if (n > kMaxFrameBytes) throw WireError("oversize", "incoming frame exceeds the size limit");
    if (buffer_.size() < 4 + n) return std::nullopt;
    const std::string body = buffer_.substr(4, n);
    buffer_.erase(0, 4 + n);
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        throw WireError("malformed", std::string("frame body is not JSON: ") + e.what());
    }
}

const std::vector<std::string>& secret_field_names()
{
    static const std::vector<std::string> names{"s", "t", "e", "f", "b", "trapdoor", "N", "secret", "secrets"};
    return names;
}

bool frame_leaks_secret(const json& frame)
{
    if (frame.is_object() && frame.value("type", "") == to_string(FrameType::sim_witness)) return false;
    return scan_keys(frame, secret_field_names());
}

// ---------------------------------------------------------------------------------------------

VerifierEndpoint::VerifierEndpoint(Params params, Seed master, std::uint64_t session, bool allow_witness_channel)
    : params_(std::move(params)), master_(master), session_(session), allow_witness_(allow_witness_channel)
{
}

std::vector<json> VerifierEndpoint::fail(const std::string& code, const std::string& message)
{
    state_ = State::failed;
    error_ = code + ": " + message;
    return {make_error(code, message)};
}

std::vector<json> VerifierEndpoint::handle(const json& frame)
{
    if (state_ == State::done || state_ == State::failed) return {};
    FrameType type;
    try {
        type = frame_type(frame);
    } catch (const WireError& e) {
        return fail(e.code, e.what());
    }
    if (type == FrameType::error) {
        state_ = State::failed;
        error_ = "peer error: " + frame["payload"].value("code", std::string("?"));
        return {};
    }
    if (frame["protocol_version"].get<int>() != kProtocolVersion) {
        return fail("version-mismatch", "verifier speaks protocol version " + std::to_string(kProtocolVersion));
    }
    const json& payload = frame["payload"];

    try {
        switch (state_) {
        case State::await_hello: {
            if (type != FrameType::hello) return fail("protocol-order", std::string("expected hello, got ") + to_string(type));
            prover_name_ = payload.value("strategy", std::string("unknown"));
            const bool wants_witness = payload.value("witness_channel", false);
            if (wants_witness && !allow_witness_) {
                return fail("witness-refused", "this verifier does not offer the simulation witness channel");
            }
            const RngStream trial = RngStream::derive(master_, "poq", session_);
            rng_.emplace(trial.fork("verifier"));
            VerifierRound1 r1 = verifier_round1(params_, *rng_);
            std::vector<json> out;
            out.push_back(make_frame(FrameType::setup, json{{"session", session_},
                                                            {"params", params_to_json(params_)},
                                                            {"msg", msg1_to_json(r1.msg)}}));
            if (wants_witness) {
                const Witness w = r1.state.witness();
                out.push_back(make_frame(FrameType::sim_witness,
                                         json{{"notice", "SIMULATION ONLY: verifier secrets for a simulated quantum prover"},
                                              {"s", vec_to_json(w.s)},
                                              {"e", vec_to_json(w.e)}}));
            }
            vstate_ = std::move(r1.state);
            state_ = State::await_response1;
            return out;
        }
        case State::await_response1: {
            if (type != FrameType::response1) {
                return fail("protocol-order", std::string("expected response1, got ") + to_string(type));
            }
            response_ = msg2_from_json(payload, params_);
            vstate_->b_prime = rng_->bit();
            state_ = State::await_response2;
            return {make_frame(FrameType::challenge, json{{"b_prime", vstate_->b_prime}})};
        }
        case State::await_response2: {
            if (type != FrameType::response2) {
                return fail("protocol-order", std::string("expected response2, got ") + to_string(type));
            }
            const int d_prime = bit_from_json(payload.at("d_prime"));
            Transcript t = verifier_score(*vstate_, *response_, d_prime, params_);
            t.prover = prover_name_;
            t.seed = seed_hex(master_);
            t.trial = session_;
            const bool ok = t.success;
            transcript_ = std::move(t);
            state_ = State::done;
            return {make_frame(FrameType::result, json{{"session", session_}, {"success", ok}})};
        }
        default: return {};
        }
    } catch (const CodecError& e) {
        return fail("malformed", e.what());
    } catch (const json::exception& e) {
        return fail("malformed", e.what());
    } catch (const std::invalid_argument& e) {
        return fail("malformed", e.what());
    }
}

// ---------------------------------------------------------------------------------------------

ProverEndpoint::ProverEndpoint(const Prover& prover, Seed master, bool witness_channel)
    : prover_(prover), master_(master), witness_channel_(witness_channel)
{
}

json ProverEndpoint::hello() const
{
    return make_frame(FrameType::hello, json{{"role", "prover"},
                                             {"strategy", prover_.name()},
                                             {"witness_channel", witness_channel_}});
}

std::vector<json> ProverEndpoint::fail(const std::string& code, const std::string& message)
{
    state_ = State::failed;
    error_ = code + ": " + message;
    return {make_error(code, message)};
}

std::vector<json> ProverEndpoint::respond1(const Witness* witness)
{
    const RngStream trial = RngStream::derive(master_, "poq", session_);
    session_obj_ = prover_.open(*params_, witness, trial.fork("prover"));
    const Msg2 m2 = session_obj_->respond1(*msg1_);
    state_ = State::await_challenge;
    return {make_frame(FrameType::response1, msg2_to_json(m2))};
}

std::vector<json> ProverEndpoint::handle(const json& frame)
{
    if (state_ == State::done || state_ == State::failed) return {};
    FrameType type;
    try {
        type = frame_type(frame);
    } catch (const WireError& e) {
        return fail(e.code, e.what());
    }
    if (type == FrameType::error) {
        state_ = State::failed;
        error_ = "peer error: " + frame["payload"].value("code", std::string("?"));
        return {};
    }
    if (frame["protocol_version"].get<int>() != kProtocolVersion) {
        return fail("version-mismatch", "prover speaks protocol version " + std::to_string(kProtocolVersion));
    }
    const json& payload = frame["payload"];

    try {
        switch (state_) {
        case State::await_setup: {
            if (type != FrameType::setup) return fail("protocol-order", std::string("expected setup, got ") + to_string(type));
            session_ = payload.at("session").get<std::uint64_t>();
            params_.emplace(params_from_json(payload.at("params")));
            msg1_ = msg1_from_json(payload.at("msg"), *params_);
            if (prover_.needs_witness()) {
                if (!witness_channel_) return fail("witness-required", "simulated quantum prover needs --witness-channel");
                state_ = State::await_witness;
                return {};
            }
            return respond1(nullptr);
        }
        case State::await_witness: {
            if (type != FrameType::sim_witness) {
                return fail("protocol-order", std::string("expected x-sim-witness, got ") + to_string(type));
            }
            const Witness w{vec_from_json(payload.at("s"), params_->mod(), params_->n()),
                            vec_from_json(payload.at("e"), params_->mod(), params_->m())};
            return respond1(&w);
        }
        case State::await_challenge: {
            if (type != FrameType::challenge) {
                return fail("protocol-order", std::string("expected challenge, got ") + to_string(type));
            }
            const int b_prime = bit_from_json(payload.at("b_prime"));
            const int d_prime = session_obj_->respond2(b_prime);
            state_ = State::await_result;
            return {make_frame(FrameType::response2, json{{"d_prime", d_prime}})};
        }
        case State::await_result: {
            if (type != FrameType::result) return fail("protocol-order", std::string("expected result, got ") + to_string(type));
            success_ = payload.at("success").get<bool>();
            state_ = State::done;
            return {};
        }
        default: return {};
        }
    } catch (const CodecError& e) {
        return fail("malformed", e.what());
    } catch (const json::exception& e) {
        return fail("malformed", e.what());
    } catch (const std::invalid_argument& e) {
        return fail("malformed", e.what());
    }
}

}  // namespace rtcf
