#pragma once

// Verifier/prover wire protocol. A frame is a 4-byte big-endian length followed by a UTF-8 JSON
// object {"type", "protocol_version", "payload"}. The endpoints below are transport-free state
// machines: feed them decoded frames, send whatever they return.
//
//   prover                      verifier
//   hello        ------------>
//                <------------  setup  (+ x-sim-witness when requested)
//   response1    ------------>
//                <------------  challenge
//   response2    ------------>
//                <------------  result

#include "rtcf/codec.hpp"
#include "rtcf/protocol_q.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rtcf {

inline constexpr int kProtocolVersion = 1;
inline constexpr std::size_t kMaxFrameBytes = std::size_t{64} << 20;

enum class FrameType
{
    hello,
    setup,
    response1,
    challenge,
    response2,
    result,
    error,
    /// Simulation-only extension carrying (s, e) to a simulated quantum prover.
    sim_witness
};

const char* to_string(FrameType t);
std::optional<FrameType> frame_type_from_string(const std::string& s);

struct WireError : std::runtime_error
{
    WireError(std::string code, const std::string& what);
    std::string code;
};

json make_frame(FrameType type, json payload);
json make_error(const std::string& code, const std::string& message);

/// Validates the envelope and returns the frame type. Throws WireError("malformed", ...).
FrameType frame_type(const json& frame);

std::string encode_frame(const json& frame);

/// Incremental decoder for a byte stream of frames.
class FrameReader
{
public:
    void feed(const char* data, std::size_t size);
    /// Next complete frame, if any. Throws WireError on oversized or non-JSON frames.
    std::optional<json> next();

private:
    std::string buffer_;
};

/// Keys that must never appear in an ordinary frame.
const std::vector<std::string>& secret_field_names();

/// True when `frame` is not a sim_witness frame and some object key at any depth is on the deny-list.
bool frame_leaks_secret(const json& frame);

class VerifierEndpoint
{
public:
    VerifierEndpoint(Params params, Seed master, std::uint64_t session, bool allow_witness_channel = true);

    /// Frames to send in reply. After an error frame is returned the endpoint is failed.
    std::vector<json> handle(const json& frame);

    bool finished() const { return state_ == State::done; }
    bool failed() const { return state_ == State::failed; }
    const std::string& error() const { return error_; }
    const std::optional<Transcript>& transcript() const { return transcript_; }

private:
    enum class State
    {
        await_hello,
        await_response1,
        await_response2,
        done,
        failed
    };

    std::vector<json> fail(const std::string& code, const std::string& message);

    Params params_;
    Seed master_;
    std::uint64_t session_;
    bool allow_witness_;
    State state_ = State::await_hello;
    std::string error_;
    std::string prover_name_;
    std::optional<RngStream> rng_;
    std::optional<VerifierState> vstate_;
    std::optional<Msg2> response_;
    std::optional<Transcript> transcript_;
};

class ProverEndpoint
{
public:
    /// The prover must outlive the endpoint.
    ProverEndpoint(const Prover& prover, Seed master, bool witness_channel);

    json hello() const;
    std::vector<json> handle(const json& frame);

    bool finished() const { return state_ == State::done; }
    bool failed() const { return state_ == State::failed; }
    const std::string& error() const { return error_; }
    bool success() const { return success_; }
    std::uint64_t session() const { return session_; }

private:
    enum class State
    {
        await_setup,
        await_witness,
        await_challenge,
        await_result,
        done,
        failed
    };

    std::vector<json> fail(const std::string& code, const std::string& message);
    std::vector<json> respond1(const Witness* witness);

    const Prover& prover_;
    Seed master_;
    bool witness_channel_;
    State state_ = State::await_setup;
    std::string error_;
    std::uint64_t session_ = 0;
    bool success_ = false;
    std::optional<Params> params_;
    std::optional<Msg1> msg1_;
    std::unique_ptr<ProverSession> session_obj_;
};

}  // namespace rtcf
