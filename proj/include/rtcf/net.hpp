#pragma once

// Blocking TCP transport for the wire endpoints (POSIX sockets).

#include "rtcf/wire.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>

namespace rtcf {

class Socket
{
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    Socket(Socket&& o) noexcept : fd_(o.fd_), reader_(std::move(o.reader_)) { o.fd_ = -1; }
    Socket& operator=(Socket&& o) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket();

    int fd() const { return fd_; }
    bool valid() const { return fd_ >= 0; }

    /// Receive timeout applied to every subsequent read.
    void set_timeout(std::chrono::milliseconds t);

    void send_frame(const json& frame);
    /// Throws WireError("timeout") when nothing arrives in time and WireError("closed") on EOF.
    json recv_frame();

private:
    int fd_ = -1;
    FrameReader reader_;
};

class Listener
{
public:
    /// Port 0 picks an ephemeral port; see port().
    Listener(const std::string& host, std::uint16_t port);

    std::uint16_t port() const { return port_; }
    Socket accept();

private:
    Socket sock_;
    std::uint16_t port_ = 0;
};

Socket connect_to(const std::string& host, std::uint16_t port);

struct ServeOptions
{
    std::uint64_t sessions = 1;
    std::uint64_t first_session = 0;
    std::chrono::milliseconds timeout{30000};
    bool allow_witness_channel = true;
    /// Sees every frame the verifier sends or receives; `outgoing` is true for sent frames.
    std::function<void(const json& frame, bool outgoing)> on_frame;
};

struct SessionOutcome
{
    bool ok = false;
    std::optional<Transcript> transcript;
    std::string error;
};

/// Runs one verifier session over an accepted connection.
SessionOutcome serve_session(Socket& conn, const Params& params, const Seed& master, std::uint64_t session,
                             const ServeOptions& options);

/// Accepts `options.sessions` connections in turn, numbering them from first_session.
std::vector<SessionOutcome> serve_verifier(Listener& listener, const Params& params, const Seed& master,
                                           const ServeOptions& options,
                                           const std::function<void(const SessionOutcome&)>& on_session = {});

struct ProverOutcome
{
    bool ok = false;
    bool success = false;
    std::uint64_t session = 0;
    std::string error;
};

ProverOutcome connect_prover(const std::string& host, std::uint16_t port, const Prover& prover, const Seed& master,
                             bool witness_channel, std::chrono::milliseconds timeout = std::chrono::milliseconds{30000});

}  // namespace rtcf
