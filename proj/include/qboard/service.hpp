#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bots.hpp"
#include "record.hpp"

namespace qboard {

inline constexpr int kSchemaVersion = 1;

struct Session {
    std::string id;
    std::string black_token;
    std::string white_token;
    Match match;
    std::int64_t created = 0; // unix seconds
    std::int64_t updated = 0;
    std::vector<nlohmann::json> events; // events[i] is ply i + 1
    mutable std::shared_mutex mu;
    std::condition_variable_any changed;

    explicit Session(MatchConfig c) : match(std::move(c)) {}
};

struct CreatedMatch {
    std::string match_id;
    std::string black_token;
    std::string white_token;
};

struct MoveResult {
    std::optional<Rejection> rejection;
    nlohmann::json body;
};

inline std::int64_t unix_now() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

inline nlohmann::json ply_event(const Match& m, const PlyRecord& p) {
    nlohmann::json j = {{"v", kSchemaVersion},
                        {"ply", p.ply},
                        {"player", std::string(1, color_char(p.player))},
                        {"move", to_notation(p.move)},
                        {"state_hash", p.state_hash},
                        {"term_count", m.state().state.term_count()},
                        {"outcome", to_json(m.state().outcome)}};
    if (p.injected) j["captures"] = to_notation(*p.injected);
    return j;
}

// Holds live matches. With a data directory, each match is kept as an
// append-only <id>.qbg record plus <id>.session.json, and reloaded by replay.
class SessionService {
public:
    explicit SessionService(std::optional<std::filesystem::path> data_dir = std::nullopt, std::uint64_t seed = std::random_device{}())
        : data_dir_(std::move(data_dir)), rng_(seed) {
        if (data_dir_) {
            std::filesystem::create_directories(*data_dir_);
            load_all();
        }
    }

    CreatedMatch create_match(const nlohmann::json& config_json) {
        MatchConfig config;
        try {
            config = match_config_from_json(config_json);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::InvalidConfig, e.what());
        }
        auto s = std::make_shared<Session>(config);
        {
            std::lock_guard lock(mu_);
            s->id = token(8);
            s->black_token = token(16);
            s->white_token = token(16);
        }
        s->created = s->updated = unix_now();
        if (data_dir_) {
            save_record(record_of(s->match), record_path(s->id).string());
            write_session_file(*s);
        }
        std::lock_guard lock(mu_);
        sessions_[s->id] = s;
        return {s->id, s->black_token, s->white_token};
    }

    std::shared_ptr<Session> find(const std::string& id) const {
        std::lock_guard lock(mu_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "no match with id " + id);
        return it->second;
    }

    std::vector<std::string> ids() const {
        std::lock_guard lock(mu_);
        std::vector<std::string> out;
        for (const auto& [id, s] : sessions_) out.push_back(id);
        return out;
    }

    nlohmann::json get_state(const std::string& id) const {
        auto s = find(id);
        std::shared_lock lock(s->mu);
        return state_payload(*s);
    }

    MoveResult post_move(const std::string& id, const std::string& player_token, const std::string& notation) {
        auto s = find(id);
        std::unique_lock lock(s->mu);
        const Match& m = s->match;
        std::optional<Color> who;
        if (player_token == s->black_token) who = Color::Black;
        if (player_token == s->white_token) who = Color::White;
        if (m.state().outcome.status != MatchStatus::Ongoing) return reject(ErrorCode::MatchFinished, "the match is over");
        if (!who || *who != m.state().to_move) return reject(ErrorCode::WrongTurn, "token does not belong to the player to move");
        Move move;
        try {
            move = parse_move(notation, *who);
        } catch (const Error& e) {
            return reject(e.code(), e.what());
        }
        if (auto r = s->match.submit(move)) return {r, rejection_json(*r)};

        const PlyRecord& p = s->match.plies().back();
        s->events.push_back(ply_event(s->match, p));
        s->updated = unix_now();
        if (data_dir_) persist_ply(*s, p);
        s->changed.notify_all();
        nlohmann::json body = {{"v", kSchemaVersion}, {"accepted", true}, {"event", s->events.back()}};
        body["state"] = state_payload(*s);
        return {std::nullopt, std::move(body)};
    }

    nlohmann::json list_legal(const std::string& id, const std::string& species_filter, std::size_t cap = 64) const {
        auto s = find(id);
        std::shared_lock lock(s->mu);
        EnumerationOptions opts;
        opts.cap = cap;
        if (!species_filter.empty()) {
            opts.filter = parse_species(species_filter);
            if (!opts.filter) throw Error(ErrorCode::InvalidConfig, "unknown species '" + species_filter + "'");
        }
        nlohmann::json moves = nlohmann::json::array();
        for (const auto& mv : enumerate_legal(s->match, opts)) moves.push_back(to_notation(mv));
        return {{"v", kSchemaVersion},
                {"species", species_filter.empty() ? "all" : species_filter},
                {"to_move", std::string(1, color_char(s->match.state().to_move))},
                {"moves", std::move(moves)}};
    }

    // Events with ply > after_ply; waits up to `timeout` for one to appear.
    std::vector<nlohmann::json> events_after(const std::string& id, int after_ply, std::chrono::milliseconds timeout) const {
        auto s = find(id);
        std::shared_lock lock(s->mu);
        s->changed.wait_for(lock, timeout, [&] { return static_cast<int>(s->events.size()) > after_ply; });
        std::vector<nlohmann::json> out;
        for (std::size_t i = static_cast<std::size_t>(std::max(after_ply, 0)); i < s->events.size(); ++i) out.push_back(s->events[i]);
        return out;
    }

    bool finished(const std::string& id) const {
        auto s = find(id);
        std::shared_lock lock(s->mu);
        return s->match.state().outcome.status != MatchStatus::Ongoing;
    }

private:
    static MoveResult reject(ErrorCode code, std::string detail) {
        Rejection r{code, std::move(detail)};
        return {r, rejection_json(r)};
    }

    static nlohmann::json rejection_json(const Rejection& r) {
        return {{"v", kSchemaVersion}, {"accepted", false}, {"code", std::string(to_string(r.code))}, {"detail", r.detail}};
    }

    static nlohmann::json state_payload(const Session& s) {
        const MatchState& ms = s.match.state();
        const auto marg = marginals(ms.state);
        for (const auto& p : marg)
            if (std::abs(p[0] + p[1] + p[2] - 1.0) > kStateTolerance) throw Error(ErrorCode::InvalidConfig, "marginals do not sum to one");
        nlohmann::json last = nlohmann::json::array();
        for (const auto& p : ms.last_written) last.push_back(p.notation());
        nlohmann::json branches = nlohmann::json::array();
        for (const auto& t : ms.state.terms()) branches.push_back(board_hash(t.board));
        return {{"v", kSchemaVersion},
                {"match_id", s.id},
                {"config", to_json(s.match.config())},
                {"ply", ms.ply},
                {"to_move", std::string(1, color_char(ms.to_move))},
                {"term_count", ms.state.term_count()},
                {"game_wise_allowed", ms.game_wise_allowed},
                {"last_written", std::move(last)},
                {"branch_hashes", std::move(branches)},
                {"state", to_json(ms.state)},
                {"state_hash", state_hash(ms.state)},
                {"marginals", marginals_json(marg)},
                {"outcome", to_json(ms.outcome)}};
    }

    std::string token(int bytes) {
        static constexpr char hex[] = "0123456789abcdef";
        std::string out;
        for (int i = 0; i < bytes; ++i) {
            const auto b = static_cast<unsigned>(rng_() & 0xff);
            out += hex[b >> 4];
            out += hex[b & 0xf];
        }
        return out;
    }

    std::filesystem::path record_path(const std::string& id) const { return *data_dir_ / (id + ".qbg"); }
    std::filesystem::path session_path(const std::string& id) const { return *data_dir_ / (id + ".session.json"); }

    void write_session_file(const Session& s) const {
        const nlohmann::json j = {{"v", kSchemaVersion}, {"match_id", s.id},   {"black_token", s.black_token},
                                  {"white_token", s.white_token}, {"created", s.created}, {"updated", s.updated}};
        std::ofstream f(session_path(s.id), std::ios::trunc);
        f << j.dump() << "\n";
    }

    void persist_ply(const Session& s, const PlyRecord& p) const {
        std::ofstream f(record_path(s.id), std::ios::app);
        f << ply_line(p).dump() << "\n";
        if (s.match.state().outcome.status != MatchStatus::Ongoing) f << outcome_line(s.match.state().outcome).dump() << "\n";
        write_session_file(s);
    }

    void load_all() {
        for (const auto& entry : std::filesystem::directory_iterator(*data_dir_)) {
            const auto& path = entry.path();
            if (path.extension() != ".qbg") continue;
            const std::string id = path.stem().string();
            if (!std::filesystem::exists(session_path(id))) continue;
            std::ifstream sf(session_path(id));
            const nlohmann::json meta = nlohmann::json::parse(sf);
            const GameRecord record = load_record(path.string());
            (void)replay(record); // verifies every recorded hash
            auto s = std::make_shared<Session>(record.config);
            for (const auto& p : record.plies) {
                (void)s->match.submit(p.move);
                s->events.push_back(ply_event(s->match, s->match.plies().back()));
            }
            s->id = id;
            s->black_token = meta.at("black_token").get<std::string>();
            s->white_token = meta.at("white_token").get<std::string>();
            s->created = meta.value("created", std::int64_t{0});
            s->updated = meta.value("updated", std::int64_t{0});
            sessions_[id] = s;
        }
    }

    std::optional<std::filesystem::path> data_dir_;
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mt19937_64 rng_;
};

} // namespace qboard
