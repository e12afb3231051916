#include <random>

#include <gtest/gtest.h>

#include "support/harness.hpp"

using namespace qboard;

namespace {

MatchConfig fir5(int j_limit = 2) {
    MatchConfig c;
    c.game = Game::FIR;
    c.geometry = {5, 5};
    c.j_limit = j_limit;
    return c;
}

} // namespace

TEST(Config, Validation) {
    MatchConfig c;
    c.geometry = {4, 4};
    EXPECT_THROW(Match{c}, Error);
    c.small_board = true;
    EXPECT_NO_THROW(Match{c});
    c = MatchConfig{};
    c.j_limit = 0;
    EXPECT_THROW(Match{c}, Error);
    c = MatchConfig{};
    c.geometry = {50, 50};
    EXPECT_THROW(Match{c}, Error);
}

TEST(Config, JsonRoundTrip) {
    MatchConfig c = harness::weiqi9();
    c.j_limit = 16;
    c.capture_approach = CaptureApproach::PerBranch;
    c.forbidden_mode = ForbiddenAggregate::AllBranches;
    const MatchConfig back = match_config_from_json(to_json(c));
    EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Pipeline, RejectionLeavesMatchUnchanged) {
    Match m(harness::fir15());
    ASSERT_FALSE(m.submit(parse_move("B+ G3 G4")));
    const std::string before = serialize(m.state().state);
    const auto r = m.submit(parse_move("X w G3"));
    ASSERT_TRUE(r);
    EXPECT_EQ(r->code, ErrorCode::Occupied);
    EXPECT_EQ(serialize(m.state().state), before);
    EXPECT_EQ(m.state().ply, 1);
    EXPECT_EQ(m.state().to_move, Color::White);
    EXPECT_EQ(m.plies().size(), 1u);
}

TEST(Pipeline, CheckMatchesSubmit) {
    std::mt19937_64 rng(2);
    Match m(harness::weiqi9());
    for (int i = 0; i < 60 && m.state().outcome.status == MatchStatus::Ongoing; ++i) {
        const Move mv = bot_move(m, BotPolicy::RandomLegal, rng);
        EXPECT_FALSE(m.check(mv)) << to_notation(mv);
        m.submit(mv);
    }
}

TEST(Pipeline, LastWrittenTracksMove) {
    Match m(harness::fir15());
    m.submit(parse_move("B+ G3 G4"));
    EXPECT_EQ(m.state().last_written, (std::vector<PointIndex>{parse_point("G3"), parse_point("G4")}));
    const auto r = m.submit(parse_move("C w [H8>C7]"));
    ASSERT_TRUE(r);
    EXPECT_EQ(r->code, ErrorCode::BadControl);
}

TEST(JLimit, GameWiseAfterLimit) {
    Match m(fir5());
    ASSERT_FALSE(m.submit(parse_move("B+ A1 B1")));
    EXPECT_TRUE(m.state().game_wise_allowed);
    // Quantum moves are closed once the limit is reached.
    const auto q = m.submit(parse_move("W+ C3 D3"));
    ASSERT_TRUE(q);
    EXPECT_EQ(q->code, ErrorCode::JLimitExceeded);
    const auto& terms = m.state().state.terms();
    GameWise gw{Color::White, {{board_hash(terms[0].board), parse_point("C3")}, {board_hash(terms[1].board), parse_point("D4")}}};
    ASSERT_FALSE(m.submit(gw));
    EXPECT_EQ(m.plies().back().audit, "correlation budget bypassed: game-wise move after branch limit");
    EXPECT_EQ(m.state().state.term_count(), 2u);
    for (const auto& t : m.state().state.terms()) {
        const bool has_c3 = t.board.at(parse_point("C3")) == CellState::White;
        const bool has_d4 = t.board.at(parse_point("D4")) == CellState::White;
        EXPECT_NE(has_c3, has_d4);
    }
    EXPECT_NEAR(m.state().state.norm_squared(), 1.0, 1e-12);
}

TEST(JLimit, GameWiseMayNotMergeBranches) {
    Match m(fir5());
    m.submit(parse_move("B+ A1 B1"));
    m.submit(parse_move("X w E5"));
    // Black fills the other point in each branch: both would become the same board.
    const auto& terms = m.state().state.terms();
    const bool a1_first = terms[0].board.at(parse_point("A1")) == CellState::Black;
    GameWise merge{Color::Black,
                   {{board_hash(terms[0].board), parse_point(a1_first ? "B1" : "A1")},
                    {board_hash(terms[1].board), parse_point(a1_first ? "A1" : "B1")}}};
    const auto r = m.check(merge);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->code, ErrorCode::InvalidMoveGeometry);
    GameWise dup{Color::Black, {{board_hash(terms[0].board), parse_point("E4")}, {board_hash(terms[0].board), parse_point("E3")}}};
    const auto d = m.check(dup);
    ASSERT_TRUE(d);
    EXPECT_EQ(d->code, ErrorCode::InvalidMoveGeometry);
    GameWise one{Color::Black, {{board_hash(terms[0].board), parse_point("E4")}}};
    EXPECT_FALSE(m.check(one));
}

TEST(JLimit, ClassicalStillAllowed) {
    Match m(fir5());
    m.submit(parse_move("B+ A1 B1"));
    EXPECT_FALSE(m.submit(parse_move("X w E5")));
    EXPECT_TRUE(m.state().game_wise_allowed);
}

TEST(Replay, RecordRoundTrip) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        MatchConfig c = seed % 2 ? harness::weiqi9() : harness::fir15();
        c.max_moves = 60;
        EXPECT_EQ(harness::replay_roundtrip(c, seed), std::nullopt) << "seed " << seed;
    }
}

TEST(Replay, TamperedHashDetected) {
    GameRecord r = load_record(harness::golden("records/broadcast_capture.qbg"));
    ASSERT_GE(r.plies.size(), 4u);
    r.plies[3].state_hash = "0000000000000000";
    try {
        replay(r);
        FAIL();
    } catch (const ReplayMismatch& e) {
        EXPECT_EQ(e.code(), ErrorCode::ReplayMismatch);
        EXPECT_EQ(e.ply(), 4);
    }
}

TEST(Replay, TamperedCaptureDetected) {
    GameRecord r = load_record(harness::golden("records/single_stone_capture.qbg"));
    r.plies.back().injected.reset();
    EXPECT_THROW(replay(r), ReplayMismatch);
}

TEST(Replay, ParseErrors) {
    EXPECT_THROW(parse_record("not json\n"), Error);
    EXPECT_THROW(parse_record("{\"kind\":\"ply\",\"v\":1,\"ply\":1,\"player\":\"b\",\"move\":\"X b A1\"}\n"), Error);
}

TEST(Bots, Deterministic) {
    for (auto policy : {BotPolicy::RandomLegal, BotPolicy::GreedyBranch}) {
        Match a(harness::fir15()), b(harness::fir15());
        std::mt19937_64 ra(77), rb(77);
        for (int i = 0; i < 30 && a.state().outcome.status == MatchStatus::Ongoing; ++i) {
            const Move ma = bot_move(a, policy, ra);
            const Move mb = bot_move(b, policy, rb);
            ASSERT_EQ(ma, mb);
            a.submit(ma);
            b.submit(mb);
        }
        EXPECT_EQ(serialize(a.state().state), serialize(b.state().state));
    }
}

TEST(Bots, GreedyCompletesFive) {
    Match m = harness::play_script(harness::fir15(), {"X b A1", "X w A5", "X b B1", "X w B5", "X b C1", "X w C5", "X b D1", "X w O15"});
    const Move mv = bot_move(m, BotPolicy::GreedyBranch, 1);
    ASSERT_FALSE(m.submit(mv));
    EXPECT_EQ(m.state().outcome.status, MatchStatus::BlackWins);
}

TEST(Bots, SelfPlayTerminates) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        for (Game game : {Game::FIR, Game::Weiqi}) {
            MatchConfig c;
            c.game = game;
            c.geometry = {7, 7};
            Match m(c);
            std::mt19937_64 rng(seed);
            int guard = 0;
            while (m.state().outcome.status == MatchStatus::Ongoing && guard++ < 1000) {
                const Move mv = bot_move(m, seed % 2 ? BotPolicy::GreedyBranch : BotPolicy::RandomLegal, rng);
                ASSERT_FALSE(m.submit(mv)) << to_notation(mv);
            }
            EXPECT_NE(m.state().outcome.status, MatchStatus::Ongoing);
            EXPECT_LE(m.state().ply, c.effective_max_moves());
        }
    }
}

TEST(Enumeration, EveryCandidateIsLegal) {
    std::mt19937_64 rng(6);
    Match m(harness::weiqi9());
    for (int i = 0; i < 40 && m.state().outcome.status == MatchStatus::Ongoing; ++i) {
        EnumerationOptions o;
        o.cap = 12;
        o.rng = &rng;
        for (const auto& mv : enumerate_legal(m, o)) EXPECT_FALSE(m.check(mv)) << to_notation(mv);
        m.submit(sample_move(m, rng, {Species::Classical, Species::Superposition, Species::Counter, Species::Entangled, Species::GameWise}));
    }
}

TEST(Termination, TwoPasses) {
    Match m(harness::weiqi9());
    m.submit(parse_move("PASS b"));
    EXPECT_EQ(m.state().outcome.status, MatchStatus::Ongoing);
    m.submit(parse_move("PASS w"));
    EXPECT_EQ(m.state().outcome.status, MatchStatus::UnfinishedByAgreement);
}

TEST(Termination, PassResetByMove) {
    Match m(harness::weiqi9());
    m.submit(parse_move("PASS b"));
    m.submit(parse_move("X w E5"));
    m.submit(parse_move("PASS b"));
    EXPECT_EQ(m.state().outcome.status, MatchStatus::Ongoing);
}

TEST(Termination, Resign) {
    Match m(harness::fir15());
    m.submit(parse_move("RESIGN b"));
    EXPECT_EQ(m.state().outcome.status, MatchStatus::WhiteWins);
}

TEST(Termination, MoveCap) {
    MatchConfig c = harness::fir15();
    c.max_moves = 3;
    Match m(c);
    for (const char* s : {"X b A1", "X w O15", "X b H8"}) ASSERT_FALSE(m.submit(parse_move(s)));
    EXPECT_EQ(m.state().outcome.status, MatchStatus::Unfinished);
    const auto r = m.submit(parse_move("X w A2"));
    ASSERT_TRUE(r);
    EXPECT_EQ(r->code, ErrorCode::MatchFinished);
}
