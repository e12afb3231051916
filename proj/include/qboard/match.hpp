#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fir_rules.hpp"
#include "legality.hpp"
#include "move_kernel.hpp"
#include "superposition.hpp"
#include "weiqi_rules.hpp"

namespace qboard {

struct MatchConfig {
    Game game = Game::FIR;
    Geometry geometry{15, 15};
    int j_limit = 8;
    CaptureApproach capture_approach = CaptureApproach::BroadcastX;
    int p2_budget = kDefaultP2Budget;
    int max_moves = 0; // 0 selects 4 * points
    std::uint64_t seed = 0;
    ForbiddenAggregate forbidden_mode = ForbiddenAggregate::AnyBranch;
    std::size_t term_ceiling = kDefaultTermCeiling;
    // Permits boards below 5x5 and rectangular boards, for oracle runs.
    bool small_board = false;

    int effective_max_moves() const { return max_moves > 0 ? max_moves : 4 * geometry.points(); }

    void validate() const {
        const int lo = small_board ? 1 : 5;
        if (geometry.width < lo || geometry.height < lo || geometry.width > kMaxDimension || geometry.height > kMaxDimension)
            throw Error(ErrorCode::InvalidConfig, "board size must be between " + std::to_string(lo) + " and " + std::to_string(kMaxDimension));
        if (!small_board && !geometry.square()) throw Error(ErrorCode::InvalidConfig, "board must be square");
        if (j_limit < 1) throw Error(ErrorCode::InvalidConfig, "j_limit must be at least 1");
        if (static_cast<std::size_t>(j_limit) > term_ceiling) throw Error(ErrorCode::InvalidConfig, "j_limit exceeds the term ceiling");
        if (p2_budget < 1) throw Error(ErrorCode::InvalidConfig, "p2_budget must be at least 1");
        if (max_moves < 0) throw Error(ErrorCode::InvalidConfig, "max_moves must not be negative");
    }
};

inline nlohmann::json to_json(const MatchConfig& c) {
    nlohmann::json j = {
        {"game", std::string(to_string(c.game))},
        {"board_size", c.geometry.width},
        {"j_limit", c.j_limit},
        {"capture", std::string(to_string(c.capture_approach))},
        {"p2_budget", c.p2_budget},
        {"max_moves", c.effective_max_moves()},
        {"seed", c.seed},
        {"forbidden", c.forbidden_mode == ForbiddenAggregate::AnyBranch ? "any" : "all"},
        {"term_ceiling", c.term_ceiling},
    };
    if (!c.geometry.square()) j["height"] = c.geometry.height;
    if (c.small_board) j["small_board"] = true;
    return j;
}

inline MatchConfig match_config_from_json(const nlohmann::json& j) {
    MatchConfig c;
    c.game = parse_game(j.value("game", std::string("fir")));
    const int w = j.value("board_size", 15);
    c.geometry = {w, j.value("height", w)};
    c.j_limit = j.value("j_limit", 8);
    c.capture_approach = parse_capture_approach(j.value("capture", std::string("broadcast")));
    c.p2_budget = j.value("p2_budget", kDefaultP2Budget);
    c.max_moves = j.value("max_moves", 0);
    c.seed = j.value("seed", std::uint64_t{0});
    const std::string forbidden = j.value("forbidden", std::string("any"));
    if (forbidden != "any" && forbidden != "all") throw Error(ErrorCode::InvalidConfig, "forbidden must be 'any' or 'all'");
    c.forbidden_mode = forbidden == "any" ? ForbiddenAggregate::AnyBranch : ForbiddenAggregate::AllBranches;
    c.term_ceiling = j.value("term_ceiling", kDefaultTermCeiling);
    c.small_board = j.value("small_board", false);
    c.validate();
    return c;
}

enum class MatchStatus { Ongoing, BlackWins, WhiteWins, Unfinished, UnfinishedByAgreement };

inline std::string_view to_string(MatchStatus s) {
    switch (s) {
    case MatchStatus::Ongoing: return "Ongoing";
    case MatchStatus::BlackWins: return "BlackWins";
    case MatchStatus::WhiteWins: return "WhiteWins";
    case MatchStatus::Unfinished: return "Unfinished";
    case MatchStatus::UnfinishedByAgreement: return "UnfinishedByAgreement";
    }
    return "?";
}

struct MatchOutcome {
    MatchStatus status = MatchStatus::Ongoing;
    std::optional<FirWitness> witness;
    std::string reason;
};

inline nlohmann::json to_json(const MatchOutcome& o) {
    nlohmann::json j = {{"status", std::string(to_string(o.status))}};
    if (!o.reason.empty()) j["reason"] = o.reason;
    if (o.witness) {
        nlohmann::json line = nlohmann::json::array();
        for (const auto& p : o.witness->line) line.push_back(p.notation());
        j["witness"] = {{"branch", o.witness->branch}, {"line", std::move(line)}};
    }
    return j;
}

struct PlyRecord {
    int ply = 0;
    Color player = Color::Black;
    Move move;
    std::optional<MandatoryCapture> injected;
    std::string state_hash;
    std::string audit; // set when the correlation budget was bypassed
};

struct MatchState {
    Superposition state;
    Color to_move = Color::Black;
    int ply = 0;
    bool game_wise_allowed = false;
    KoLedger ko_ledger;
    MatchOutcome outcome;
    std::vector<PointIndex> last_written;
    int merge_total = 0;
    int branching_moves = 0;
    int consecutive_passes = 0;
};

// Applies a game-wise move: each listed branch gains one stone; unlisted
// branches are untouched. Fails rather than letting two branches coincide,
// since summing them would not preserve the norm.
inline Superposition execute_game_wise(const Superposition& state, const GameWise& move) {
    std::vector<Term> terms = state.terms();
    const Geometry& g = state.geometry();
    for (const auto& e : move.entries) {
        if (!e.point.on(g)) throw Error(ErrorCode::InvalidMoveGeometry, "point off the board");
        auto it = std::find_if(terms.begin(), terms.end(), [&](const Term& t) { return board_hash(t.board) == e.branch_hash; });
        if (it == terms.end()) throw Error(ErrorCode::BadBranchRef, "no branch with hash " + e.branch_hash);
        if (it->board.at(e.point) != CellState::Unoccupied) throw Error(ErrorCode::Occupied, e.point.notation() + " is occupied");
    }
    // Resolve hashes before editing so entries always refer to pre-move boards.
    std::vector<std::size_t> targets;
    for (const auto& e : move.entries)
        for (std::size_t i = 0; i < state.terms().size(); ++i)
            if (board_hash(state.terms()[i].board) == e.branch_hash) targets.push_back(i);
    for (std::size_t k = 0; k < move.entries.size(); ++k) terms[targets[k]].board.set(move.entries[k].point, stone(move.color));
    int merges = 0;
    Superposition next = Superposition::from_terms(g, std::move(terms), &merges);
    if (merges > 0) throw Error(ErrorCode::InvalidMoveGeometry, "game-wise move would make two branches identical");
    return next;
}

class Match {
public:
    explicit Match(MatchConfig config) : config_(std::move(config)) {
        config_.validate();
        state_.state = Superposition::empty_board(config_.geometry);
        state_.ko_ledger.record(state_hash(state_.state));
    }

    const MatchConfig& config() const { return config_; }
    const MatchState& state() const { return state_; }
    const std::vector<PlyRecord>& plies() const { return plies_; }

    RuleContext rule_context() const {
        return {config_.game, state_.to_move, state_.last_written, state_.game_wise_allowed, config_.forbidden_mode};
    }

    // Result of running the pipeline on a move without committing it.
    struct Prepared {
        Move move;
        Color who = Color::Black;
        Superposition state;
        int merges = 0;
        std::optional<MandatoryCapture> injected;
        std::string audit;
        std::string hash;
    };

    // Runs the full move pipeline. On rejection the match is unchanged.
    std::optional<Rejection> submit(const Move& move) {
        auto prepared = prepare(move);
        if (auto* r = std::get_if<Rejection>(&prepared)) return *r;
        commit(std::move(std::get<Prepared>(prepared)));
        return std::nullopt;
    }

    // Dry run: the rejection submit() would return, if any.
    std::optional<Rejection> check(const Move& move) const {
        auto prepared = prepare(move);
        if (auto* r = std::get_if<Rejection>(&prepared)) return *r;
        return std::nullopt;
    }

    // legality -> post-limit species rule -> correlation budget -> apply -> J-limit ->
    // capture resolution -> ko.
    std::variant<Rejection, Prepared> prepare(const Move& move) const {
        if (state_.outcome.status != MatchStatus::Ongoing) return Rejection{ErrorCode::MatchFinished, "the match is over"};
        if (auto r = LegalityChecker(state_.state, rule_context()).check(move)) return *r;

        const Species sp = species(move);
        const bool quantum = sp == Species::Superposition || sp == Species::Counter || sp == Species::Entangled;
        if (state_.game_wise_allowed && quantum)
            return Rejection{ErrorCode::JLimitExceeded, "branch limit reached; only classical and game-wise moves remain"};

        Prepared out{move, *mover(move), state_.state, 0, std::nullopt, {}, {}};
        const GateProgram program = compile(move, config_.geometry);
        if (program.kind == ProgramKind::PerBranch) {
            out.audit = "correlation budget bypassed: game-wise move after branch limit";
        } else {
            const P2Report report = validate_p2(program, config_.p2_budget);
            if (!report.ok) return Rejection{ErrorCode::P2Violation, report.reason};
        }

        try {
            if (const auto* gw = std::get_if<GameWise>(&move)) {
                out.state = execute_game_wise(state_.state, *gw);
            } else {
                for (const auto& step : program.steps)
                    out.state = apply_local(out.state, step.gate, step.points, &out.merges, config_.term_ceiling);
            }
        } catch (const Error& e) {
            return Rejection{e.code() == ErrorCode::TermExplosion ? ErrorCode::JLimitExceeded : e.code(), e.what()};
        }

        if (!state_.game_wise_allowed && out.state.term_count() > static_cast<std::size_t>(config_.j_limit))
            return Rejection{ErrorCode::JLimitExceeded, "move would create " + std::to_string(out.state.term_count()) +
                                                            " branches; limit is " + std::to_string(config_.j_limit)};

        std::vector<int> written;
        for (const auto& p : written_points(move)) written.push_back(p.flat(config_.geometry));

        if (config_.game == Game::Weiqi && !written.empty()) {
            try {
                auto cap = quantum_capture(out.state, written, out.who, config_.capture_approach, state_.game_wise_allowed);
                if (!cap.capture.entries.empty()) {
                    out.state = std::move(cap.state);
                    out.merges += cap.merges;
                    out.injected = std::move(cap.capture);
                }
            } catch (const Error& e) {
                return Rejection{e.code(), e.what()};
            }
            if (out.injected)
                if (auto r = ko_check(state_.ko_ledger, *out.injected, out.state)) return *r;
        }
        out.hash = state_hash(out.state);
        return out;
    }

    void commit(Prepared p) {
        MatchState& s = state_;
        const std::size_t before = s.state.term_count();
        const Species sp = species(p.move);
        s.state = std::move(p.state);
        s.merge_total += p.merges;
        if (s.state.term_count() > before) ++s.branching_moves;
        s.ko_ledger.record(p.hash);
        s.ply += 1;
        s.to_move = opposite(s.to_move);
        s.last_written = written_points(p.move);
        s.consecutive_passes = sp == Species::Pass ? s.consecutive_passes + 1 : 0;
        s.game_wise_allowed = s.game_wise_allowed || s.state.term_count() >= static_cast<std::size_t>(config_.j_limit);
        s.outcome = adjudicate(s, p.move, p.who);
        plies_.push_back({s.ply, p.who, std::move(p.move), std::move(p.injected), std::move(p.hash), std::move(p.audit)});
    }

private:
    MatchOutcome adjudicate(const MatchState& s, const Move& move, Color who) const {
        if (std::holds_alternative<Resign>(move))
            return {who == Color::Black ? MatchStatus::WhiteWins : MatchStatus::BlackWins, std::nullopt, "resignation"};
        if (config_.game == Game::FIR) {
            const FirOutcome fo = fir_outcome(s.state, who);
            if (fo.status != FirStatus::Ongoing)
                return {fo.status == FirStatus::BlackWins ? MatchStatus::BlackWins : MatchStatus::WhiteWins, fo.witness, "five in a row"};
        } else if (s.consecutive_passes >= 2) {
            return {MatchStatus::UnfinishedByAgreement, std::nullopt, "two consecutive passes"};
        }
        if (s.ply >= config_.effective_max_moves()) return {MatchStatus::Unfinished, std::nullopt, "move cap reached"};
        return {};
    }

    MatchConfig config_;
    MatchState state_;
    std::vector<PlyRecord> plies_;
};

} // namespace qboard
