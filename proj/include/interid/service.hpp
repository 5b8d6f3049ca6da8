#pragma once
// HTTP session service. The caller plays the witness: the service runs the
// retrieval/selection/questioning side and applies whatever answers arrive.
//
//   POST   /sessions                {"target"?, "seed"?, "name"?, "config"?}
//                                   -> {"session_id", "initial", "question", "r0"}
//   POST   /sessions/<id>/answer    {"text"?, "observations"?, "unknown"?}
//                                   -> {"rank", "done", "question"?, "end_reason"?}
//   GET    /sessions/<id>           -> {"transcript": [...]} (header + rounds)
//   DELETE /sessions/<id>           -> {"deleted": true}
//
// Sessions idle longer than the configured timeout are evicted lazily.

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "interid/session.hpp"

namespace interid {

class SessionService {
public:
    SessionService(const Gallery& gallery, SessionConfig base_config, double idle_timeout_s = 600.0);
    ~SessionService();

    // Blocks serving until stop() is called from another thread.
    bool listen(const std::string& host, int port);

    // Binds to an ephemeral port and serves on a background thread;
    // returns the port. Used by tests.
    int listen_on_any_port(const std::string& host);

    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Parses "host:port" (ArgumentError on malformed input).
std::pair<std::string, int> parse_bind_address(const std::string& bind);

}  // namespace interid
