#include <random>

#include <gtest/gtest.h>

#include "support/harness.hpp"

using namespace qboard;
using harness::kHalf;

namespace {

const Geometry k15{15, 15};

RuleContext ctx(Color to_move, std::vector<std::string> last = {}, bool game_wise = false) {
    RuleContext c;
    c.to_move = to_move;
    for (const auto& p : last) c.last_written.push_back(parse_point(p));
    c.game_wise_allowed = game_wise;
    return c;
}

Superposition after_g3_g4() {
    return apply_local(Superposition::empty_board(k15), gate_superposition(Color::Black, true),
                       {parse_point("G3").flat(k15), parse_point("G4").flat(k15)});
}

} // namespace

TEST(Notation, RoundTrip) {
    for (const char* text : {"X b G3", "X w A1", "B+ G3 G4", "W- C7 H2", "C w [G3>C7]", "D b [G3+C7,C8]",
                             "D w [G3-C7,C8]", "E w [G3>C7][G4>C3]", "T b [G3>C7][G4+C3,D3]",
                             "F w [G3-C7,D7][G4+C3,D3]", "GW b {1a2b3c4d5e6f7a8b:C3,ffffffffffffffff:D4}",
                             "MC {b G4}", "MC {w D5,w D6,w E5}", "MC* {b A1}", "PASS w", "RESIGN b"}) {
        const Move m = parse_move(text);
        EXPECT_EQ(parse_move(to_notation(m)), m) << text;
        EXPECT_EQ(move_from_json(to_json(m)), m) << text;
    }
}

TEST(Notation, DefaultColor) {
    EXPECT_EQ(parse_move("E [G3>C7][G4>C3]", Color::White), parse_move("E w [G3>C7][G4>C3]"));
    EXPECT_EQ(parse_move("PASS", Color::Black), Move(Pass{Color::Black}));
}

TEST(Notation, Errors) {
    for (const char* text : {"", "Q b A1", "X b", "X b A1 B2", "B+ G3", "E w [G3>C7]", "X q A1", "GW b {x:}"}) {
        try {
            parse_move(text);
            ADD_FAILURE() << "accepted '" << text << "'";
        } catch (const Error& e) {
            EXPECT_TRUE(e.code() == ErrorCode::ParseError || e.code() == ErrorCode::BadPoint) << text;
        }
    }
}

TEST(Compile, SuperpositionSteps) {
    const auto plus = compile(parse_move("B+ G3 G4"), k15);
    ASSERT_EQ(plus.steps.size(), 3u);
    EXPECT_EQ(plus.steps[0].gate, gate_x(Color::Black));
    EXPECT_EQ(plus.steps[1].gate, gate_h(Color::Black));
    EXPECT_EQ(plus.steps[2].points, (std::vector<int>{parse_point("G3").flat(k15), parse_point("G4").flat(k15)}));
    EXPECT_EQ(compile(parse_move("B- G3 G4"), k15).steps.size(), 2u);
    // The fused program equals the named superposition gate.
    EXPECT_LE(max_abs_diff(fuse(plus), gate_superposition(Color::Black, true)), 1e-12);
}

TEST(Compile, IsPure) {
    const Move m = parse_move("F w [G3-C7,D7][G4+C3,D3]");
    EXPECT_EQ(compile(m, k15), compile(m, k15));
}

TEST(Compile, GeometryErrors) {
    const Geometry g{5, 5};
    for (const char* text : {"X b F1", "B+ A1 A1", "E w [A1>B1][A2>B1]", "D w [A1+A1,B1]", "MC {b A1,w A1}"}) {
        try {
            compile(parse_move(text), g);
            ADD_FAILURE() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidMoveGeometry) << text;
        }
    }
}

TEST(Compile, CompositeMovesAreUnitary) {
    for (const char* text : {"E w [A1>A2][B1>B2]", "T w [A1>A2][B1+B2,B3]", "F w [A1-A2,A3][B1+B2,B3]"}) {
        const Gate u = fuse(compile(parse_move(text), k15));
        EXPECT_LE(unitarity_error(u), 1e-12) << text;
    }
}

TEST(CorrelationBudget, Examples) {
    EXPECT_EQ(validate_p2(compile(parse_move("X b A1"), k15)).correlated_points, 1);
    EXPECT_EQ(validate_p2(compile(parse_move("B+ A1 A2"), k15)).correlated_points, 2);
    EXPECT_EQ(validate_p2(compile(parse_move("E w [A1>A2][B1>B2]"), k15)).correlated_points, 4);
    EXPECT_EQ(validate_p2(compile(parse_move("T w [A1>A2][B1+B2,B3]"), k15)).correlated_points, 5);
    const auto f = validate_p2(compile(parse_move("F w [A1-A2,A3][B1+B2,B3]"), k15));
    EXPECT_TRUE(f.ok);
    EXPECT_EQ(f.correlated_points, 6);
    EXPECT_FALSE(validate_p2(compile(parse_move("F w [A1-A2,A3][B1+B2,B3]"), k15), 5).ok);
    // Capture is a product of one-qutrit gates: uncorrelated however large.
    EXPECT_TRUE(validate_p2(compile(parse_move("MC {b A1,b A2,b A3,b A4,b A5,b A6,b A7}"), k15)).ok);
    EXPECT_FALSE(validate_p2(compile(parse_move("GW b {0000000000000000:A1}"), k15)).ok);
}

TEST(Legality, OccupiedInOneBranch) {
    const auto s = after_g3_g4();
    const auto r = legality(parse_move("X w G3"), s, ctx(Color::White));
    ASSERT_TRUE(r);
    EXPECT_EQ(r->code, ErrorCode::Occupied);
    EXPECT_FALSE(legality(parse_move("X w H8"), s, ctx(Color::White)));
}

TEST(Legality, EntangledResponse) {
    const auto s = after_g3_g4();
    EXPECT_FALSE(legality(parse_move("E w [G3>C7][G4>C3]"), s, ctx(Color::White, {"G3", "G4"})));
    const auto bad = legality(parse_move("E w [G3>C7][H4>C3]"), s, ctx(Color::White, {"G3", "G4"}));
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->code, ErrorCode::BadControl);
}

TEST(Legality, EntangledResponseState) {
    auto s = after_g3_g4();
    for (const auto& step : compile(parse_move("E w [G3>C7][G4>C3]"), k15).steps) s = apply_local(s, step.gate, step.points);
    EXPECT_EQ(harness::compare_ket(s, {{kHalf, {"b G3", "w C7"}}, {kHalf, {"b G4", "w C3"}}}), "");
}

TEST(Legality, WrongTurn) {
    const auto r = legality(parse_move("X b A1"), after_g3_g4(), ctx(Color::White));
    ASSERT_TRUE(r);
    EXPECT_EQ(r->code, ErrorCode::WrongTurn);
}

TEST(Legality, GameWiseGate) {
    const auto s = after_g3_g4();
    const std::string h = board_hash(s.terms()[0].board);
    const Move gw = parse_move("GW w {" + h + ":A1}");
    const auto before = legality(gw, s, ctx(Color::White));
    ASSERT_TRUE(before);
    EXPECT_EQ(before->code, ErrorCode::GameWiseNotAllowed);
    EXPECT_FALSE(legality(gw, s, ctx(Color::White, {}, true)));
    const auto unknown = legality(parse_move("GW w {0123456789abcdef:A1}"), s, ctx(Color::White, {}, true));
    ASSERT_TRUE(unknown);
    EXPECT_EQ(unknown->code, ErrorCode::BadBranchRef);
}

TEST(Legality, CounterTargetOccupiedWhereControlFires) {
    auto s = after_g3_g4();
    const auto r = legality(parse_move("C w [G3>G4]"), s, ctx(Color::White, {"G3", "G4"}));
    // G4 is empty in the branch where G3 holds black, so this is allowed.
    EXPECT_FALSE(r);
    s = apply_local(s, gate_x(Color::Black), {parse_point("H8").flat(k15)});
    const auto r2 = legality(parse_move("C w [G3>H8]"), s, ctx(Color::White, {"G3"}));
    ASSERT_TRUE(r2);
    EXPECT_EQ(r2->code, ErrorCode::Occupied);
}

TEST(Legality, PassOnlyInWeiqi) {
    const auto s = Superposition::empty_board({9, 9});
    auto c = ctx(Color::Black);
    EXPECT_TRUE(legality(Pass{Color::Black}, s, c));
    c.game = Game::Weiqi;
    EXPECT_FALSE(legality(Pass{Color::Black}, s, c));
}

// Random moves through the kernel stay unitary against the dense oracle.
TEST(Kernel, RandomProgramsPreserveNorm) {
    std::mt19937_64 rng(99);
    const Geometry g{3, 3};
    for (int trial = 0; trial < 100; ++trial) {
        MatchConfig c;
        c.game = Game::FIR;
        c.geometry = g;
        c.small_board = true;
        c.j_limit = 64;
        Match m(c);
        DenseState d = to_dense(m.state().state);
        for (int ply = 0; ply < 4 && m.state().outcome.status == MatchStatus::Ongoing; ++ply) {
            const Move mv = sample_move(m, rng, {Species::Classical, Species::Superposition, Species::Counter, Species::Entangled}, 4);
            if (std::holds_alternative<Resign>(mv)) break;
            for (const auto& st : compile(mv, g).steps) d = embed(st.gate, st.points, g.points())(d);
            ASSERT_FALSE(m.submit(mv)) << to_notation(mv);
            EXPECT_NEAR(m.state().state.norm_squared(), 1.0, 1e-9);
            EXPECT_GE(fidelity(to_dense(m.state().state), d), 1 - 1e-9) << to_notation(mv);
        }
    }
}
