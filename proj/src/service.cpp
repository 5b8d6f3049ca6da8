#include "interid/service.hpp"

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "httplib.h"

#include "interid/errors.hpp"
#include "interid/json_io.hpp"
#include "interid/witness.hpp"

namespace interid {

using nlohmann::json;

namespace {

struct ServerSession {
    explicit ServerSession(SessionEngine engine) : engine(std::move(engine)) {}
    std::mutex mutex;
    SessionEngine engine;
    std::chrono::steady_clock::time_point last_access = std::chrono::steady_clock::now();
};

void reply_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

}  // namespace

struct SessionService::Impl {
    const Gallery& gallery;
    SessionConfig base_config;
    double idle_timeout_s;

    httplib::Server server;
    std::thread server_thread;
    std::mutex sessions_mutex;
    std::unordered_map<std::string, std::shared_ptr<ServerSession>> sessions;
    std::atomic<std::uint64_t> next_session = 0;

    Impl(const Gallery& gallery, SessionConfig config, double idle_timeout_s)
        : gallery(gallery), base_config(std::move(config)), idle_timeout_s(idle_timeout_s) {
        register_routes();
    }

    void evict_idle_locked() {
        const auto now = std::chrono::steady_clock::now();
        for (auto it = sessions.begin(); it != sessions.end();) {
            const double idle =
                std::chrono::duration<double>(now - it->second->last_access).count();
            it = idle > idle_timeout_s ? sessions.erase(it) : std::next(it);
        }
    }

    std::shared_ptr<ServerSession> find(const std::string& id) {
        std::lock_guard lock(sessions_mutex);
        evict_idle_locked();
        auto it = sessions.find(id);
        return it == sessions.end() ? nullptr : it->second;
    }

    json pending_question_json(SessionEngine& engine) {
        json out = json::object();
        if (auto question = engine.next_question()) {
            out["question"] = question_to_json(*question);
            out["done"] = false;
        } else {
            out["done"] = true;
            out["end_reason"] = engine.end_reason();
        }
        return out;
    }

    void handle_create(const httplib::Request& req, httplib::Response& res) {
        json body = json::object();
        if (!req.body.empty()) body = json::parse(req.body);

        SessionConfig config = base_config;
        if (body.contains("config")) {
            json merged = config_to_json(base_config);
            merged.update(body["config"]);
            config = config_from_json(merged);
        }

        const std::uint64_t counter = next_session.fetch_add(1);
        const std::uint64_t seed =
            body.contains("seed") ? body["seed"].get<std::uint64_t>()
                                  : derive_seed(config.seed, counter);

        std::size_t target_index;
        if (body.contains("target")) {
            auto idx = gallery.index_of(body["target"].get<std::string>());
            if (!idx) throw NotFoundError("no person with id '" + body["target"].get<std::string>() + "'");
            target_index = *idx;
        } else {
            Rng pick(derive_seed(seed, 0x746172ULL));
            target_index = static_cast<std::size_t>(pick.uniform_int(gallery.size()));
        }

        const std::string session_id =
            body.contains("name") ? body["name"].get<std::string>()
                                  : "http-" + std::to_string(counter);
        auto session = std::make_shared<ServerSession>(
            SessionEngine(gallery, target_index, config, seed, session_id));

        json out = {{"session_id", session_id},
                    {"initial", initial_to_json(session->engine.transcript().initial)},
                    {"r0", session->engine.transcript().r0}};
        out.update(pending_question_json(session->engine));

        {
            std::lock_guard lock(sessions_mutex);
            evict_idle_locked();
            sessions[session_id] = session;
        }
        reply_json(res, 200, out);
    }

    void handle_answer(const httplib::Request& req, httplib::Response& res) {
        auto session = find(req.path_params.at("id"));
        if (!session) {
            reply_json(res, 404, {{"error", "unknown session"}});
            return;
        }
        std::lock_guard lock(session->mutex);
        session->last_access = std::chrono::steady_clock::now();

        auto pending = session->engine.next_question();
        if (!pending) {
            reply_json(res, 409, {{"error", "session already finished"}});
            return;
        }

        const json body = json::parse(req.body);
        Answer answer;
        if (body.contains("observations")) {
            answer.text = body.value("text", std::string{});
            answer.observations = observations_from_json(body["observations"]);
            answer.unknown = body.value("unknown", false);
            for (const Observation& obs : answer.observations)
                (void)gallery.schema.coordinate(obs.slot, obs.value);
        } else if (body.value("unknown", false)) {
            answer.text = body.value("text", std::string("I don't know."));
            answer.unknown = true;
        } else if (body.contains("text")) {
            answer = parse_answer_text(*pending, body["text"].get<std::string>(), gallery.schema);
        } else {
            reply_json(res, 400, {{"error", "answer needs observations, unknown, or text"}});
            return;
        }

        const std::size_t rank = session->engine.apply_answer(answer);
        json out = {{"rank", rank}};
        out.update(pending_question_json(session->engine));
        reply_json(res, 200, out);
    }

    void handle_get(const httplib::Request& req, httplib::Response& res) {
        auto session = find(req.path_params.at("id"));
        if (!session) {
            reply_json(res, 404, {{"error", "unknown session"}});
            return;
        }
        std::lock_guard lock(session->mutex);
        session->last_access = std::chrono::steady_clock::now();

        // Same line objects the JSONL serialization emits.
        json lines = json::array();
        std::istringstream stream(session->engine.transcript().to_jsonl());
        std::string line;
        while (std::getline(stream, line)) {
            if (!line.empty()) lines.push_back(json::parse(line));
        }
        reply_json(res, 200,
                   {{"transcript", lines}, {"done", session->engine.done()}});
    }

    void handle_delete(const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(sessions_mutex);
        const bool erased = sessions.erase(req.path_params.at("id")) > 0;
        if (erased) {
            reply_json(res, 200, {{"deleted", true}});
        } else {
            reply_json(res, 404, {{"error", "unknown session"}});
        }
    }

    void register_routes() {
        auto guarded = [this](void (Impl::*handler)(const httplib::Request&, httplib::Response&)) {
            return [this, handler](const httplib::Request& req, httplib::Response& res) {
                try {
                    (this->*handler)(req, res);
                } catch (const json::exception& e) {
                    reply_json(res, 400, {{"error", e.what()}});
                } catch (const NotFoundError& e) {
                    reply_json(res, 404, {{"error", e.what()}});
                } catch (const SchemaError& e) {
                    reply_json(res, 400, {{"error", e.what()}});
                } catch (const ParseError& e) {
                    reply_json(res, 400, {{"error", e.what()}});
                } catch (const ArgumentError& e) {
                    reply_json(res, 400, {{"error", e.what()}});
                } catch (const std::exception& e) {
                    reply_json(res, 500, {{"error", e.what()}});
                }
            };
        };
        server.Post("/sessions", guarded(&Impl::handle_create));
        server.Post("/sessions/:id/answer", guarded(&Impl::handle_answer));
        server.Get("/sessions/:id", guarded(&Impl::handle_get));
        server.Delete("/sessions/:id", guarded(&Impl::handle_delete));
    }
};

SessionService::SessionService(const Gallery& gallery, SessionConfig base_config,
                               double idle_timeout_s)
    : impl_(std::make_unique<Impl>(gallery, std::move(base_config), idle_timeout_s)) {}

SessionService::~SessionService() { stop(); }

bool SessionService::listen(const std::string& host, int port) {
    return impl_->server.listen(host, port);
}

int SessionService::listen_on_any_port(const std::string& host) {
    const int port = impl_->server.bind_to_any_port(host);
    if (port < 0) throw DataError("cannot bind to " + host);
    impl_->server_thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port;
}

void SessionService::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->server_thread.joinable()) impl_->server_thread.join();
}

std::pair<std::string, int> parse_bind_address(const std::string& bind) {
    const std::size_t colon = bind.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= bind.size())
        throw ArgumentError("bind address must look like host:port");
    int port;
    try {
        port = std::stoi(bind.substr(colon + 1));
    } catch (const std::exception&) {
        throw ArgumentError("bad port in '" + bind + "'");
    }
    return {bind.substr(0, colon), port};
}

}  // namespace interid
