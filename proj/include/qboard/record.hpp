#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "match.hpp"

namespace qboard {

// The classical coding of a match: configuration plus the move sequence.
// Stored as JSON lines (.qbg): a header, one line per ply, and an optional
// trailing outcome line.
struct GameRecord {
    MatchConfig config;
    std::vector<PlyRecord> plies;
    std::optional<MatchOutcome> outcome;
};

inline GameRecord record_of(const Match& m) {
    return {m.config(), m.plies(), m.state().outcome};
}

inline nlohmann::json header_line(const MatchConfig& c) { return {{"v", 1}, {"kind", "header"}, {"config", to_json(c)}}; }

inline nlohmann::json ply_line(const PlyRecord& p) {
    nlohmann::json j = {{"v", 1}, {"kind", "ply"}, {"ply", p.ply}, {"player", std::string(1, color_char(p.player))},
                        {"move", to_notation(p.move)}, {"state_hash", p.state_hash}};
    if (p.injected) j["captures"] = to_notation(*p.injected);
    if (!p.audit.empty()) j["audit"] = p.audit;
    return j;
}

inline nlohmann::json outcome_line(const MatchOutcome& o) {
    nlohmann::json j = to_json(o);
    j["v"] = 1;
    j["kind"] = "outcome";
    return j;
}

inline std::string write_record(const GameRecord& r) {
    std::string out = header_line(r.config).dump() + "\n";
    for (const auto& p : r.plies) out += ply_line(p).dump() + "\n";
    if (r.outcome && r.outcome->status != MatchStatus::Ongoing) out += outcome_line(*r.outcome).dump() + "\n";
    return out;
}

inline GameRecord parse_record(const std::string& text) {
    GameRecord r;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ParseError, "record line " + std::to_string(line_no) + ": " + e.what());
        }
        const std::string kind = j.value("kind", std::string{});
        if (kind == "header") {
            r.config = match_config_from_json(j.at("config"));
            have_header = true;
        } else if (kind == "ply") {
            if (!have_header) throw Error(ErrorCode::ParseError, "ply before header");
            PlyRecord p;
            p.ply = j.at("ply").get<int>();
            p.player = parse_color(j.at("player").get<std::string>());
            p.move = parse_move(j.at("move").get<std::string>());
            if (j.contains("captures")) {
                Move mc = parse_move(j.at("captures").get<std::string>());
                if (!std::holds_alternative<MandatoryCapture>(mc)) throw Error(ErrorCode::ParseError, "captures field is not MC notation");
                p.injected = std::get<MandatoryCapture>(mc);
            }
            p.state_hash = j.value("state_hash", std::string{});
            p.audit = j.value("audit", std::string{});
            r.plies.push_back(std::move(p));
        } else if (kind == "outcome") {
            MatchOutcome o;
            const std::string status = j.at("status").get<std::string>();
            for (MatchStatus s : {MatchStatus::Ongoing, MatchStatus::BlackWins, MatchStatus::WhiteWins, MatchStatus::Unfinished,
                                  MatchStatus::UnfinishedByAgreement})
                if (to_string(s) == status) o.status = s;
            o.reason = j.value("reason", std::string{});
            r.outcome = o;
        } else {
            throw Error(ErrorCode::ParseError, "record line " + std::to_string(line_no) + " has unknown kind");
        }
    }
    if (!have_header) throw Error(ErrorCode::ParseError, "record has no header");
    return r;
}

inline GameRecord load_record(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::NotFound, "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_record(ss.str());
}

inline void save_record(const GameRecord& r, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Error(ErrorCode::NotFound, "cannot write " + path);
    f << write_record(r);
}

class ReplayMismatch : public Error {
public:
    ReplayMismatch(int ply, const std::string& why) : Error(ErrorCode::ReplayMismatch, "ply " + std::to_string(ply) + ": " + why), ply_(ply) {}
    int ply() const { return ply_; }

private:
    int ply_;
};

// Rebuilds the match from the empty board. Every recorded hash and
// injected capture is checked; the first divergence throws ReplayMismatch.
inline Match replay(const GameRecord& record) {
    Match m(record.config);
    for (const auto& p : record.plies) {
        if (p.ply != m.state().ply + 1) throw ReplayMismatch(p.ply, "ply numbers out of sequence");
        if (auto r = m.submit(p.move)) throw ReplayMismatch(p.ply, "move rejected: " + r->detail);
        const PlyRecord& live = m.plies().back();
        if (live.player != p.player) throw ReplayMismatch(p.ply, "player differs");
        if (!p.state_hash.empty() && live.state_hash != p.state_hash) throw ReplayMismatch(p.ply, "state hash differs");
        if (live.injected != p.injected) throw ReplayMismatch(p.ply, "injected capture differs");
    }
    if (record.outcome && record.outcome->status != m.state().outcome.status)
        throw ReplayMismatch(m.state().ply, "outcome differs");
    return m;
}

} // namespace qboard
