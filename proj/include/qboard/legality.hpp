#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "move_kernel.hpp"
#include "superposition.hpp"
#include "weiqi_rules.hpp"

namespace qboard {

enum class Game { FIR, Weiqi };

inline std::string_view to_string(Game g) { return g == Game::FIR ? "fir" : "weiqi"; }

inline Game parse_game(std::string_view s) {
    if (s == "fir") return Game::FIR;
    if (s == "weiqi") return Game::Weiqi;
    throw Error(ErrorCode::InvalidConfig, "unknown game '" + std::string(s) + "'");
}

struct RuleContext {
    Game game = Game::FIR;
    Color to_move = Color::Black;
    // Points written by the opponent's immediately preceding move; the only
    // legal control points for counter and entangled moves.
    std::vector<PointIndex> last_written;
    bool game_wise_allowed = false;
    ForbiddenAggregate forbidden_mode = ForbiddenAggregate::AnyBranch;
};

// Move legality against one fixed state. Per-state work (occupancy and
// suicide tables) is computed once, so checking many candidates is cheap.
class LegalityChecker {
public:
    LegalityChecker(const Superposition& state, RuleContext ctx) : state_(state), ctx_(std::move(ctx)) {
        const int n = state_.geometry().points();
        free_everywhere_.assign(static_cast<std::size_t>(n), 1);
        for (const auto& t : state_.terms())
            for (int p = 0; p < n; ++p)
                if (t.board.at(p) != CellState::Unoccupied) free_everywhere_[static_cast<std::size_t>(p)] = 0;
        for (std::size_t b = 0; b < state_.term_count(); ++b) branch_index_[board_hash(state_.terms()[b].board)] = b;
    }

    const Superposition& state() const { return state_; }
    const RuleContext& context() const { return ctx_; }

    bool free_everywhere(int flat) const { return free_everywhere_[static_cast<std::size_t>(flat)] != 0; }

    std::optional<std::size_t> branch_of(const std::string& hash) const {
        auto it = branch_index_.find(hash);
        if (it == branch_index_.end()) return std::nullopt;
        return it->second;
    }

    // Suicide for the mover at `flat` in branch `b` (weiqi only).
    bool suicide_in(std::size_t b, int flat) const {
        if (ctx_.game != Game::Weiqi) return false;
        if (forbidden_.empty()) forbidden_ = forbidden_by_branch(state_, ctx_.to_move);
        return forbidden_[b][static_cast<std::size_t>(flat)] != 0;
    }

    // Aggregate forbidden status for a placement on every branch.
    bool forbidden_aggregate(int flat) const {
        if (ctx_.game != Game::Weiqi) return false;
        int empty = 0;
        int suicide = 0;
        for (std::size_t b = 0; b < state_.term_count(); ++b) {
            if (state_.terms()[b].board.at(flat) != CellState::Unoccupied) continue;
            ++empty;
            suicide += suicide_in(b, flat) ? 1 : 0;
        }
        return ctx_.forbidden_mode == ForbiddenAggregate::AnyBranch ? suicide > 0 : (empty > 0 && suicide == empty);
    }

    std::optional<Rejection> check(const Move& move) const {
        if (std::holds_alternative<MandatoryCapture>(move))
            return Rejection{ErrorCode::InvalidMoveGeometry, "mandatory captures are injected by the engine"};
        const auto who = mover(move);
        if (!who || *who != ctx_.to_move)
            return Rejection{ErrorCode::WrongTurn, std::string("it is ") + (ctx_.to_move == Color::Black ? "black" : "white") + "'s turn"};
        try {
            (void)compile(move, state_.geometry());
        } catch (const Error& e) {
            return Rejection{e.code(), e.what()};
        }
        return std::visit(overloaded{
                              [&](const ClassicalMove& m) { return check_placement({m.point}); },
                              [&](const SuperpositionMove& m) { return check_placement({m.first, m.second}); },
                              [&](const CounterOne& m) { return check_legs(m.countered, {&m.leg}, {}); },
                              [&](const CounterTwo& m) { return check_legs(m.countered, {}, {&m.leg}); },
                              [&](const EntangledE& m) { return check_legs(m.countered, {&m.first, &m.second}, {}); },
                              [&](const EntangledT& m) { return check_legs(m.countered, {&m.first}, {&m.second}); },
                              [&](const EntangledF& m) { return check_legs(m.countered, {}, {&m.first, &m.second}); },
                              [&](const GameWise& m) { return check_game_wise(m); },
                              [&](const MandatoryCapture&) -> std::optional<Rejection> { return std::nullopt; },
                              [&](const Pass&) -> std::optional<Rejection> {
                                  if (ctx_.game != Game::Weiqi)
                                      return Rejection{ErrorCode::InvalidMoveGeometry, "pass is only available in weiqi"};
                                  return std::nullopt;
                              },
                              [&](const Resign&) -> std::optional<Rejection> { return std::nullopt; },
                          },
                          move);
    }

private:
    std::optional<Rejection> check_placement(std::initializer_list<PointIndex> points) const {
        const Geometry& g = state_.geometry();
        for (const auto& p : points)
            if (!free_everywhere(p.flat(g))) return Rejection{ErrorCode::Occupied, p.notation() + " is occupied in at least one branch"};
        for (const auto& p : points)
            if (forbidden_aggregate(p.flat(g))) return Rejection{ErrorCode::Forbidden, p.notation() + " is a forbidden point"};
        return std::nullopt;
    }

    std::optional<Rejection> check_control(const PointIndex& control) const {
        if (std::find(ctx_.last_written.begin(), ctx_.last_written.end(), control) == ctx_.last_written.end())
            return Rejection{ErrorCode::BadControl, control.notation() + " was not written by the opponent's last move"};
        return std::nullopt;
    }

    std::optional<Rejection> check_targets(Color countered, const PointIndex& control, std::initializer_list<PointIndex> targets) const {
        const Geometry& g = state_.geometry();
        const int c = control.flat(g);
        for (std::size_t b = 0; b < state_.term_count(); ++b) {
            const Board& board = state_.terms()[b].board;
            if (!holds(board.at(c), countered)) continue;
            for (const auto& t : targets) {
                const int tf = t.flat(g);
                if (board.at(tf) != CellState::Unoccupied)
                    return Rejection{ErrorCode::Occupied, t.notation() + " is occupied in a branch where " + control.notation() + " fires"};
                if (suicide_in(b, tf)) return Rejection{ErrorCode::Forbidden, t.notation() + " is a forbidden point in a firing branch"};
            }
        }
        return std::nullopt;
    }

    std::optional<Rejection> check_legs(Color countered, std::initializer_list<const CounterOneLeg*> ones,
                                        std::initializer_list<const CounterTwoLeg*> twos) const {
        for (const auto* l : ones)
            if (auto r = check_control(l->control)) return r;
        for (const auto* l : twos)
            if (auto r = check_control(l->control)) return r;
        for (const auto* l : ones)
            if (auto r = check_targets(countered, l->control, {l->target})) return r;
        for (const auto* l : twos)
            if (auto r = check_targets(countered, l->control, {l->first, l->second})) return r;
        return std::nullopt;
    }

    std::optional<Rejection> check_game_wise(const GameWise& m) const {
        if (!ctx_.game_wise_allowed)
            return Rejection{ErrorCode::GameWiseNotAllowed, "game-wise moves are allowed only once the branch limit is reached"};
        if (m.entries.empty()) return Rejection{ErrorCode::InvalidMoveGeometry, "game-wise move lists no branches"};
        const Geometry& g = state_.geometry();
        for (const auto& e : m.entries) {
            const auto b = branch_of(e.branch_hash);
            if (!b) return Rejection{ErrorCode::BadBranchRef, "no branch with hash " + e.branch_hash};
            const int p = e.point.flat(g);
            if (state_.terms()[*b].board.at(p) != CellState::Unoccupied)
                return Rejection{ErrorCode::Occupied, e.point.notation() + " is occupied in branch " + e.branch_hash};
            if (suicide_in(*b, p)) return Rejection{ErrorCode::Forbidden, e.point.notation() + " is forbidden in branch " + e.branch_hash};
        }
        return std::nullopt;
    }

    const Superposition& state_;
    RuleContext ctx_;
    std::vector<char> free_everywhere_;
    std::unordered_map<std::string, std::size_t> branch_index_;
    mutable std::vector<std::vector<char>> forbidden_;
};

inline std::optional<Rejection> legality(const Move& move, const Superposition& state, const RuleContext& ctx) {
    return LegalityChecker(state, ctx).check(move);
}

} // namespace qboard
