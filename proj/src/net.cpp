#include "rtcf/net.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

namespace rtcf {

namespace {

[[noreturn]] void sys_fail(const std::string& what)
{
    throw std::runtime_error(what + ": " + std::strerror(errno));
}

addrinfo* resolve(const std::string& host, std::uint16_t port, bool passive)
{
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    if (passive) hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    const int rc = getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res);
    if (rc != 0) throw std::runtime_error("cannot resolve " + host + ": " + gai_strerror(rc));
    return res;
}

}  // namespace

Socket& Socket::operator=(Socket&& o) noexcept
{
    if (this != &o) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = o.fd_;
        reader_ = std::move(o.reader_);
        o.fd_ = -1;
    }
    return *this;
}

Socket::~Socket()
{
    if (fd_ >= 0) ::close(fd_);
}

void Socket::set_timeout(std::chrono::milliseconds t)
{
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(t.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>((t.count() % 1000) * 1000);
    if (setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv) != 0) sys_fail("setsockopt(SO_RCVTIMEO)");
}

void Socket::send_frame(const json& frame)
{
    const std::string bytes = encode_frame(frame);
    std::size_t sent = 0;
    while (sent < bytes.size()) {
        const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw WireError("closed", std::string("send failed: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
}

json Socket::recv_frame()
{
    char buf[65536];
    for (;;) {
        if (auto frame = reader_.next()) return std::move(*frame);
        const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
        if (n > 0) {
            reader_.feed(buf, static_cast<std::size_t>(n));
            continue;
        }
        if (n == 0) throw WireError("closed", "peer closed the connection");
        if (errno == EINTR) continue;
        if (errno == EAGAIN || errno == EWOULDBLOCK) throw WireError("timeout", "no frame received before the deadline");
        throw WireError("closed", std::string("recv failed: ") + std::strerror(errno));
    }
}

Listener::Listener(const std::string& host, std::uint16_t port)
{
    addrinfo* res = resolve(host, port, true);
    const int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd < 0) {
        freeaddrinfo(res);
        sys_fail("socket");
    }
    sock_ = Socket(fd);
    const int one = 1;
    setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    const int rc = ::bind(fd, res->ai_addr, res->ai_addrlen);
    freeaddrinfo(res);
    if (rc != 0) sys_fail("bind");
    if (::listen(fd, 16) != 0) sys_fail("listen");
    sockaddr_in addr{};
    socklen_t len = sizeof addr;
    if (getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) sys_fail("getsockname");
    port_ = ntohs(addr.sin_port);
}

Socket Listener::accept()
{
    for (;;) {
        const int fd = ::accept(sock_.fd(), nullptr, nullptr);
        if (fd >= 0) {
            const int one = 1;
            setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return Socket(fd);
        }
        if (errno != EINTR) sys_fail("accept");
    }
}

Socket connect_to(const std::string& host, std::uint16_t port)
{
    addrinfo* res = resolve(host, port, false);
    const int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd < 0) {
        freeaddrinfo(res);
        sys_fail("socket");
    }
    Socket s(fd);
    const int rc = ::connect(fd, res->ai_addr, res->ai_addrlen);
    freeaddrinfo(res);
    if (rc != 0) sys_fail("connect to " + host + ":" + std::to_string(port));
    const int one = 1;
    setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return s;
}

SessionOutcome serve_session(Socket& conn, const Params& params, const Seed& master, std::uint64_t session,
                             const ServeOptions& options)
{
    SessionOutcome out;
    VerifierEndpoint ep(params, master, session, options.allow_witness_channel);
    conn.set_timeout(options.timeout);
    try {
        while (!ep.finished() && !ep.failed()) {
            const json in = conn.recv_frame();
            if (options.on_frame) options.on_frame(in, false);
            for (const json& f : ep.handle(in)) {
                if (options.on_frame) options.on_frame(f, true);
                conn.send_frame(f);
            }
        }
    } catch (const WireError& e) {
        if (e.code == "timeout" || e.code == "malformed" || e.code == "oversize") {
            try {
                conn.send_frame(make_error(e.code, e.what()));
            } catch (const WireError&) {
            }
        }
        out.error = e.code + ": " + e.what();
        return out;
    }
    out.ok = ep.finished();
    out.error = ep.error();
    out.transcript = ep.transcript();
    return out;
}

std::vector<SessionOutcome> serve_verifier(Listener& listener, const Params& params, const Seed& master,
                                           const ServeOptions& options,
                                           const std::function<void(const SessionOutcome&)>& on_session)
{
    std::vector<SessionOutcome> outcomes;
    for (std::uint64_t i = 0; i < options.sessions; ++i) {
        Socket conn = listener.accept();
        outcomes.push_back(serve_session(conn, params, master, options.first_session + i, options));
        if (on_session) on_session(outcomes.back());
    }
    return outcomes;
}

ProverOutcome connect_prover(const std::string& host, std::uint16_t port, const Prover& prover, const Seed& master,
                             bool witness_channel, std::chrono::milliseconds timeout)
{
    ProverOutcome out;
    ProverEndpoint ep(prover, master, witness_channel);
    try {
        Socket s = connect_to(host, port);
        s.set_timeout(timeout);
        s.send_frame(ep.hello());
        while (!ep.finished() && !ep.failed()) {
            for (const json& f : ep.handle(s.recv_frame())) s.send_frame(f);
        }
    } catch (const WireError& e) {
        out.error = e.code + ": " + e.what();
        return out;
    }
    out.ok = ep.finished();
    out.success = ep.success();
    out.session = ep.session();
    out.error = ep.error();
    return out;
}

}  // namespace rtcf
