#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "gate.hpp"
#include "move.hpp"

namespace qboard {

inline constexpr int kDefaultP2Budget = 6;

struct GateStep {
    Gate gate;
    std::vector<int> points; // flat indices, first is most significant
    friend bool operator==(const GateStep&, const GateStep&) = default;
};

enum class ProgramKind {
    Gates,          // ordinary local unitary
    Uncorrelated,   // product of one-qutrit gates (mandatory capture)
    PerBranch,      // engine-executed per-branch edit (game-wise, per-branch capture)
    Empty,          // pass / resign
};

struct GateProgram {
    ProgramKind kind = ProgramKind::Gates;
    std::vector<GateStep> steps;
    friend bool operator==(const GateProgram&, const GateProgram&) = default;
};

namespace kernel_detail {

inline int flat_checked(const PointIndex& p, const Geometry& g) {
    if (!p.on(g)) throw Error(ErrorCode::InvalidMoveGeometry, p.notation() + " is off the board");
    return p.flat(g);
}

inline void require_distinct(const std::vector<PointIndex>& pts) {
    std::set<PointIndex> seen;
    for (const auto& p : pts)
        if (!seen.insert(p).second) throw Error(ErrorCode::InvalidMoveGeometry, "point " + p.notation() + " used twice in one move");
}

inline GateStep counter_one_step(Color countered, const CounterOneLeg& leg, const Geometry& g) {
    return {gate_controlled_x(ControlCondition::is_stone_of(countered), opposite(countered)),
            {flat_checked(leg.control, g), flat_checked(leg.target, g)}};
}

inline GateStep counter_two_step(Color countered, const CounterTwoLeg& leg, const Geometry& g) {
    const Color placed = opposite(countered);
    Gate s = gate_superposition(placed, leg.sign == Sign::Plus);
    std::string label = std::string("D") + color_char(placed) + sign_char(leg.sign);
    return {controlled(s, ControlCondition::is_stone_of(countered), std::move(label)),
            {flat_checked(leg.control, g), flat_checked(leg.first, g), flat_checked(leg.second, g)}};
}

inline std::vector<PointIndex> leg_points(const CounterOneLeg& l) { return {l.control, l.target}; }
inline std::vector<PointIndex> leg_points(const CounterTwoLeg& l) { return {l.control, l.first, l.second}; }

template <typename A, typename B>
std::vector<PointIndex> join(const A& a, const B& b) {
    auto out = leg_points(a);
    auto more = leg_points(b);
    out.insert(out.end(), more.begin(), more.end());
    return out;
}

} // namespace kernel_detail

// Compiles a move into gate steps in application order. Pure; throws
// InvalidMoveGeometry for off-board or repeated points.
inline GateProgram compile(const Move& move, const Geometry& g) {
    using namespace kernel_detail;
    return std::visit(
        overloaded{
            [&](const ClassicalMove& m) {
                return GateProgram{ProgramKind::Gates, {{gate_x(m.color), {flat_checked(m.point, g)}}}};
            },
            [&](const SuperpositionMove& m) {
                require_distinct({m.first, m.second});
                const int p = flat_checked(m.first, g);
                const int q = flat_checked(m.second, g);
                GateProgram prog;
                if (m.sign == Sign::Plus) prog.steps.push_back({gate_x(m.color), {p}});
                prog.steps.push_back({gate_h(m.color), {p}});
                prog.steps.push_back({gate_controlled_x(ControlCondition::is_unoccupied(), m.color), {p, q}});
                return prog;
            },
            [&](const CounterOne& m) {
                require_distinct(leg_points(m.leg));
                return GateProgram{ProgramKind::Gates, {counter_one_step(m.countered, m.leg, g)}};
            },
            [&](const CounterTwo& m) {
                require_distinct(leg_points(m.leg));
                return GateProgram{ProgramKind::Gates, {counter_two_step(m.countered, m.leg, g)}};
            },
            [&](const EntangledE& m) {
                require_distinct(join(m.first, m.second));
                return GateProgram{ProgramKind::Gates,
                                   {counter_one_step(m.countered, m.first, g), counter_one_step(m.countered, m.second, g)}};
            },
            [&](const EntangledT& m) {
                require_distinct(join(m.first, m.second));
                return GateProgram{ProgramKind::Gates,
                                   {counter_one_step(m.countered, m.first, g), counter_two_step(m.countered, m.second, g)}};
            },
            [&](const EntangledF& m) {
                require_distinct(join(m.first, m.second));
                return GateProgram{ProgramKind::Gates,
                                   {counter_two_step(m.countered, m.first, g), counter_two_step(m.countered, m.second, g)}};
            },
            [&](const GameWise& m) {
                std::set<std::string> seen;
                for (const auto& e : m.entries) {
                    flat_checked(e.point, g);
                    if (!seen.insert(e.branch_hash).second)
                        throw Error(ErrorCode::InvalidMoveGeometry, "branch " + e.branch_hash + " listed twice");
                }
                return GateProgram{ProgramKind::PerBranch, {}};
            },
            [&](const MandatoryCapture& m) {
                std::vector<PointIndex> pts;
                for (const auto& e : m.entries) pts.push_back(e.point);
                require_distinct(pts);
                GateProgram prog{m.per_branch ? ProgramKind::PerBranch : ProgramKind::Uncorrelated, {}};
                for (const auto& e : m.entries) prog.steps.push_back({gate_x(e.color), {flat_checked(e.point, g)}});
                return prog;
            },
            [&](const Pass&) { return GateProgram{ProgramKind::Empty, {}}; },
            [&](const Resign&) { return GateProgram{ProgramKind::Empty, {}}; },
        },
        move);
}

// Points the move can place a stone on (controls excluded).
inline std::vector<PointIndex> written_points(const Move& move) {
    return std::visit(overloaded{
                          [](const ClassicalMove& m) { return std::vector<PointIndex>{m.point}; },
                          [](const SuperpositionMove& m) { return std::vector<PointIndex>{m.first, m.second}; },
                          [](const CounterOne& m) { return std::vector<PointIndex>{m.leg.target}; },
                          [](const CounterTwo& m) { return std::vector<PointIndex>{m.leg.first, m.leg.second}; },
                          [](const EntangledE& m) { return std::vector<PointIndex>{m.first.target, m.second.target}; },
                          [](const EntangledT& m) {
                              return std::vector<PointIndex>{m.first.target, m.second.first, m.second.second};
                          },
                          [](const EntangledF& m) {
                              return std::vector<PointIndex>{m.first.first, m.first.second, m.second.first, m.second.second};
                          },
                          [](const GameWise& m) {
                              std::vector<PointIndex> out;
                              for (const auto& e : m.entries)
                                  if (std::find(out.begin(), out.end(), e.point) == out.end()) out.push_back(e.point);
                              return out;
                          },
                          [](const MandatoryCapture&) { return std::vector<PointIndex>{}; },
                          [](const Pass&) { return std::vector<PointIndex>{}; },
                          [](const Resign&) { return std::vector<PointIndex>{}; },
                      },
                      move);
}

struct P2Report {
    bool ok = true;
    int correlated_points = 0;
    std::string reason;
};

// Correlated points are those touched by any multi-qutrit step. One-qutrit
// gates on other points are uncorrelated and never count against budget.
inline P2Report validate_p2(const GateProgram& program, int budget = kDefaultP2Budget) {
    if (program.kind == ProgramKind::PerBranch)
        return {false, -1, "per-branch move inspects every branch; outside the correlation budget"};
    std::set<int> correlated;
    for (const auto& step : program.steps)
        if (step.gate.arity() >= 2) correlated.insert(step.points.begin(), step.points.end());
    P2Report r;
    r.correlated_points = correlated.empty() ? (program.steps.empty() ? 0 : 1) : static_cast<int>(correlated.size());
    if (r.correlated_points > budget) {
        r.ok = false;
        r.reason = std::to_string(r.correlated_points) + " correlated points exceeds budget " + std::to_string(budget);
    }
    return r;
}

// Distinct points of a program in order of first use.
inline std::vector<int> program_points(const GateProgram& program) {
    std::vector<int> pts;
    for (const auto& s : program.steps)
        for (int p : s.points)
            if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    return pts;
}

// Multiplies a program into one gate over program_points(). Used to audit
// composite moves (E is 4-qutrit, T 5-qutrit, F 6-qutrit).
inline Gate fuse(const GateProgram& program) {
    const auto pts = program_points(program);
    const int arity = static_cast<int>(pts.size());
    if (arity < 1 || arity > kMaxGateArity) throw Error(ErrorCode::InvalidMoveGeometry, "program spans too many points to fuse");
    Gate total = Gate::identity(arity);
    std::string label;
    for (const auto& s : program.steps) {
        std::vector<int> pos;
        for (int p : s.points) pos.push_back(static_cast<int>(std::find(pts.begin(), pts.end(), p) - pts.begin()));
        total = multiply(lift(s.gate, pos, arity), total);
        label = label.empty() ? s.gate.label() : s.gate.label() + "." + label;
    }
    return total.with_label(label);
}

} // namespace qboard
