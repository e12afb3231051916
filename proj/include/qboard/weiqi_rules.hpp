#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "board.hpp"
#include "move.hpp"
#include "superposition.hpp"

namespace qboard {

struct Group {
    Color color;
    std::vector<int> members; // flat indices, ascending
    int liberties = 0;
};

struct GroupReport {
    std::vector<Group> groups; // ordered by smallest member
};

// Connected same-colored stones containing `flat`, with distinct empty
// orthogonal neighbours counted once.
inline Group group_at(const Board& board, int flat) {
    const Geometry& g = board.geometry();
    const CellState s = board.at(flat);
    Group grp{s == CellState::Black ? Color::Black : Color::White, {}, 0};
    std::vector<char> seen(static_cast<std::size_t>(g.points()), 0);
    std::vector<char> lib(static_cast<std::size_t>(g.points()), 0);
    std::vector<int> stack{flat};
    seen[static_cast<std::size_t>(flat)] = 1;
    while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        grp.members.push_back(cur);
        for_each_neighbor(g, cur, [&](int n) {
            const CellState ns = board.at(n);
            if (ns == CellState::Unoccupied) {
                if (!lib[static_cast<std::size_t>(n)]) {
                    lib[static_cast<std::size_t>(n)] = 1;
                    ++grp.liberties;
                }
            } else if (ns == s && !seen[static_cast<std::size_t>(n)]) {
                seen[static_cast<std::size_t>(n)] = 1;
                stack.push_back(n);
            }
        });
    }
    std::sort(grp.members.begin(), grp.members.end());
    return grp;
}

inline GroupReport analyze_groups(const Board& board) {
    GroupReport report;
    std::vector<char> done(static_cast<std::size_t>(board.points()), 0);
    for (int i = 0; i < board.points(); ++i) {
        if (board.at(i) == CellState::Unoccupied || done[static_cast<std::size_t>(i)]) continue;
        Group grp = group_at(board, i);
        for (int m : grp.members) done[static_cast<std::size_t>(m)] = 1;
        report.groups.push_back(std::move(grp));
    }
    return report;
}

// Opponent stones left without liberties next to `flat` (which holds a
// stone of `color`), as capture entries sorted by point.
inline std::vector<CaptureEntry> dead_neighbors(const Board& board, int flat, Color color) {
    const Geometry& g = board.geometry();
    const Color opp = opposite(color);
    std::set<CaptureEntry> dead;
    for_each_neighbor(g, flat, [&](int n) {
        if (!holds(board.at(n), opp)) return;
        const Group grp = group_at(board, n);
        if (grp.liberties == 0)
            for (int m : grp.members) dead.insert({PointIndex::from_flat(m, g), opp});
    });
    return {dead.begin(), dead.end()};
}

struct ClassicalCaptureResult {
    Board board;
    std::vector<CaptureEntry> captured;
};

// Places a stone and removes every adjacent opponent group left with no
// liberties. Suicide (no capture and own group without liberties) throws
// Forbidden.
inline ClassicalCaptureResult classical_capture(const Board& board, int placed, Color color) {
    if (board.at(placed) != CellState::Unoccupied)
        throw Error(ErrorCode::Occupied, PointIndex::from_flat(placed, board.geometry()).notation() + " is occupied");
    Board next = board;
    next.set(placed, stone(color));
    auto dead = dead_neighbors(next, placed, color);
    for (const auto& e : dead) next.set(e.point, CellState::Unoccupied);
    if (dead.empty() && group_at(next, placed).liberties == 0)
        throw Error(ErrorCode::Forbidden, PointIndex::from_flat(placed, board.geometry()).notation() + " is suicide");
    return {std::move(next), std::move(dead)};
}

inline bool is_suicide(const Board& board, int flat, Color color) {
    Board next = board;
    next.set(flat, stone(color));
    if (!dead_neighbors(next, flat, color).empty()) return false;
    return group_at(next, flat).liberties == 0;
}

enum class CaptureApproach { BroadcastX, RemoveEverywhere, PerBranch };

inline std::string_view to_string(CaptureApproach a) {
    switch (a) {
    case CaptureApproach::BroadcastX: return "broadcast";
    case CaptureApproach::RemoveEverywhere: return "remove-everywhere";
    case CaptureApproach::PerBranch: return "per-branch";
    }
    return "?";
}

inline CaptureApproach parse_capture_approach(std::string_view s) {
    if (s == "broadcast") return CaptureApproach::BroadcastX;
    if (s == "remove-everywhere") return CaptureApproach::RemoveEverywhere;
    if (s == "per-branch") return CaptureApproach::PerBranch;
    throw Error(ErrorCode::InvalidConfig, "unknown capture approach '" + std::string(s) + "'");
}

struct QuantumCaptureResult {
    Superposition state;
    MandatoryCapture capture; // empty entries when nothing was captured
    int merges = 0;
};

// Runs capture once for a move whose candidate written points are
// `written` (flat). Stones inserted by the broadcast do not trigger
// further captures within the same move.
inline QuantumCaptureResult quantum_capture(const Superposition& state, const std::vector<int>& written, Color mover,
                                            CaptureApproach approach, bool game_wise_allowed) {
    const Geometry& g = state.geometry();
    std::vector<std::set<CaptureEntry>> per_branch(state.term_count());
    std::set<CaptureEntry> all;
    for (std::size_t b = 0; b < state.term_count(); ++b) {
        const Board& board = state.terms()[b].board;
        for (int p : written) {
            if (!holds(board.at(p), mover)) continue;
            for (const auto& e : dead_neighbors(board, p, mover)) {
                per_branch[b].insert(e);
                all.insert(e);
            }
        }
    }
    QuantumCaptureResult result{state, {}, 0};
    if (all.empty()) return result;
    result.capture.entries.assign(all.begin(), all.end());

    switch (approach) {
    case CaptureApproach::RemoveEverywhere:
        for (const auto& e : all)
            for (const auto& t : state.terms())
                if (!holds(t.board.at(e.point), e.color))
                    throw Error(ErrorCode::CaptureApproachInapplicable,
                                e.point.notation() + " does not hold the captured stone in every branch");
        [[fallthrough]];
    case CaptureApproach::BroadcastX: {
        Superposition s = state;
        for (const auto& e : all) {
            const int p = e.point.flat(g);
            s = apply_local(s, gate_x(e.color), std::span<const int>(&p, 1), &result.merges);
        }
        result.state = std::move(s);
        return result;
    }
    case CaptureApproach::PerBranch: {
        if (!game_wise_allowed)
            throw Error(ErrorCode::GameWiseNotAllowed, "per-branch capture needs game-wise moves, which are not yet allowed");
        result.capture.per_branch = true;
        std::vector<Term> terms = state.terms();
        for (std::size_t b = 0; b < terms.size(); ++b)
            for (const auto& e : per_branch[b]) terms[b].board.set(e.point, CellState::Unoccupied);
        result.state = Superposition::from_terms(g, std::move(terms), &result.merges);
        return result;
    }
    }
    return result;
}

// Re-applies a recorded capture to a state (used by replay checks and the
// dense oracle path).
inline Superposition apply_capture(const Superposition& state, const MandatoryCapture& mc, int* merges = nullptr) {
    Superposition s = state;
    for (const auto& e : mc.entries) {
        const int p = e.point.flat(state.geometry());
        s = apply_local(s, gate_x(e.color), std::span<const int>(&p, 1), merges);
    }
    return s;
}

enum class ForbiddenAggregate { AnyBranch, AllBranches };

// Per branch, the empty points where a `color` stone would be suicide.
inline std::vector<std::vector<char>> forbidden_by_branch(const Superposition& state, Color color) {
    std::vector<std::vector<char>> out;
    out.reserve(state.term_count());
    for (const auto& t : state.terms()) {
        std::vector<char> f(static_cast<std::size_t>(t.board.points()), 0);
        for (int p = 0; p < t.board.points(); ++p)
            if (t.board.at(p) == CellState::Unoccupied && is_suicide(t.board, p, color)) f[static_cast<std::size_t>(p)] = 1;
        out.push_back(std::move(f));
    }
    return out;
}

inline std::vector<PointIndex> forbidden_points(const Superposition& state, Color color,
                                                ForbiddenAggregate mode = ForbiddenAggregate::AnyBranch) {
    const auto table = forbidden_by_branch(state, color);
    const Geometry& g = state.geometry();
    std::vector<PointIndex> out;
    for (int p = 0; p < g.points(); ++p) {
        int empty = 0;
        int suicide = 0;
        for (std::size_t b = 0; b < state.term_count(); ++b) {
            if (state.terms()[b].board.at(p) != CellState::Unoccupied) continue;
            ++empty;
            suicide += table[b][static_cast<std::size_t>(p)];
        }
        const bool forbidden = mode == ForbiddenAggregate::AnyBranch ? suicide > 0 : (empty > 0 && suicide == empty);
        if (forbidden) out.push_back(PointIndex::from_flat(p, g));
    }
    return out;
}

// Positions (whole-superposition hashes) seen so far in a match. A
// capturing move may not recreate any of them.
class KoLedger {
public:
    void record(const std::string& position_hash) {
        history_.push_back(position_hash);
        seen_.insert(position_hash);
    }
    bool seen(const std::string& position_hash) const { return seen_.contains(position_hash); }
    const std::vector<std::string>& history() const { return history_; }

private:
    std::vector<std::string> history_;
    std::unordered_set<std::string> seen_;
};

inline std::optional<Rejection> ko_check(const KoLedger& ledger, const MandatoryCapture& injected, const Superposition& state_after) {
    if (injected.entries.empty()) return std::nullopt;
    if (ledger.seen(state_hash(state_after)))
        return Rejection{ErrorCode::KoViolation, "capture recreates an earlier position; play elsewhere first"};
    return std::nullopt;
}

} // namespace qboard
