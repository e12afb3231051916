#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "service.hpp"

namespace qboard {

inline int http_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::WrongTurn: return 403;
    case ErrorCode::MatchFinished: return 409;
    default: return 422;
    }
}

// Routes:
//   POST /matches                    create (body: config JSON)
//   GET  /matches/{id}/state
//   POST /matches/{id}/moves         body {"token", "move"}
//   GET  /matches/{id}/legal?species=
//   GET  /matches/{id}/events?after= server-sent events, one per ply
inline void install_routes(httplib::Server& server, SessionService& service, const std::atomic<bool>* stopping = nullptr) {
    const auto send_json = [](httplib::Response& res, int status, const nlohmann::json& j) {
        res.status = status;
        res.set_content(j.dump(), "application/json");
    };
    const auto send_error = [send_json](httplib::Response& res, const Error& e) {
        send_json(res, http_status(e.code()), {{"v", kSchemaVersion}, {"code", std::string(to_string(e.code()))}, {"detail", e.what()}});
    };

    server.Post("/matches", [&service, send_json, send_error](const httplib::Request& req, httplib::Response& res) {
        try {
            const auto body = req.body.empty() ? nlohmann::json::object() : nlohmann::json::parse(req.body);
            const auto created = service.create_match(body);
            send_json(res, 201,
                      {{"v", kSchemaVersion}, {"match_id", created.match_id}, {"tokens", {{"b", created.black_token}, {"w", created.white_token}}}});
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const nlohmann::json::exception& e) {
            send_error(res, Error(ErrorCode::ParseError, e.what()));
        }
    });

    server.Get(R"(/matches/([0-9a-f]+)/state)", [&service, send_json, send_error](const httplib::Request& req, httplib::Response& res) {
        try {
            send_json(res, 200, service.get_state(req.matches[1]));
        } catch (const Error& e) {
            send_error(res, e);
        }
    });

    server.Post(R"(/matches/([0-9a-f]+)/moves)", [&service, send_json, send_error](const httplib::Request& req, httplib::Response& res) {
        try {
            const auto body = nlohmann::json::parse(req.body);
            const auto result = service.post_move(req.matches[1], body.value("token", std::string{}), body.at("move").get<std::string>());
            send_json(res, result.rejection ? http_status(result.rejection->code) : 200, result.body);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const nlohmann::json::exception& e) {
            send_error(res, Error(ErrorCode::ParseError, e.what()));
        }
    });

    server.Get(R"(/matches/([0-9a-f]+)/legal)", [&service, send_json, send_error](const httplib::Request& req, httplib::Response& res) {
        try {
            send_json(res, 200, service.list_legal(req.matches[1], req.get_param_value("species")));
        } catch (const Error& e) {
            send_error(res, e);
        }
    });

    server.Get(R"(/matches/([0-9a-f]+)/events)", [&service, send_error, stopping](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        try {
            (void)service.find(id);
        } catch (const Error& e) {
            send_error(res, e);
            return;
        }
        int after = 0;
        if (req.has_param("after")) after = std::atoi(req.get_param_value("after").c_str());
        if (req.has_header("Last-Event-ID")) after = std::atoi(req.get_header_value("Last-Event-ID").c_str());
        auto cursor = std::make_shared<int>(after);
        res.set_chunked_content_provider("text/event-stream", [&service, id, cursor, stopping](std::size_t, httplib::DataSink& sink) {
            if (stopping && stopping->load()) {
                sink.done();
                return true;
            }
            for (const auto& ev : service.events_after(id, *cursor, std::chrono::milliseconds(500))) {
                *cursor = ev.at("ply").get<int>();
                const std::string frame = "id: " + std::to_string(*cursor) + "\nevent: ply\ndata: " + ev.dump() + "\n\n";
                if (!sink.write(frame.data(), frame.size())) return false;
            }
            if (service.finished(id) && static_cast<int>(service.events_after(id, *cursor, std::chrono::milliseconds(0)).size()) == 0) {
                sink.done();
                return true;
            }
            const std::string keepalive = ": keepalive\n\n";
            return sink.write(keepalive.data(), keepalive.size());
        });
    });
}

struct ServeOptions {
    std::string bind = "127.0.0.1";
    int port = 8080;
    std::optional<std::filesystem::path> data_dir;
};

// BIND_ADDR is host:port (or just host); DATA_DIR enables persistence.
inline ServeOptions serve_options_from_env() {
    ServeOptions o;
    if (const char* b = std::getenv("BIND_ADDR")) {
        const std::string s = b;
        const auto colon = s.rfind(':');
        if (colon == std::string::npos) {
            o.bind = s;
        } else {
            o.bind = s.substr(0, colon);
            o.port = std::atoi(s.c_str() + colon + 1);
        }
    }
    if (const char* d = std::getenv("DATA_DIR")) o.data_dir = std::filesystem::path(d);
    return o;
}

} // namespace qboard
