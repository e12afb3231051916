#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "support/harness.hpp"

using namespace qboard;

namespace {

Gate golden_gate(const std::string& name) {
    std::ifstream f(harness::golden("gates/" + name + ".json"));
    EXPECT_TRUE(f.good()) << name;
    return from_golden_json(nlohmann::json::parse(f));
}

std::vector<Amplitude> column(const Gate& g, std::size_t c) {
    std::vector<Amplitude> v(g.dim());
    for (std::size_t r = 0; r < g.dim(); ++r) v[r] = g(r, c);
    return v;
}

Gate random_unitary_1q(std::mt19937_64& rng) {
    // Random product of the move gates, which keeps entries exact enough.
    const Gate pool[] = {gate_x(Color::Black), gate_x(Color::White), gate_h(Color::Black), gate_h(Color::White)};
    Gate g = Gate::identity(1);
    for (int i = 0; i < 5; ++i) g = multiply(pool[rng() % 4], g);
    return g;
}

DenseState random_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    std::vector<Amplitude> a(pow3(n));
    double norm = 0.0;
    for (auto& x : a) {
        x = {d(rng), d(rng)};
        norm += std::norm(x);
    }
    for (auto& x : a) x /= std::sqrt(norm);
    return DenseState(n, std::move(a));
}

constexpr std::size_t kB = 0, kU = 1, kW = 2;

} // namespace

TEST(GateX, BlackPlacesAndRemoves) {
    const Gate x = gate_x(Color::Black);
    EXPECT_EQ(column(x, kU), (std::vector<Amplitude>{1, 0, 0}));
    EXPECT_EQ(column(x, kB), (std::vector<Amplitude>{0, 1, 0}));
}

TEST(GateX, WhiteFixesBlack) { EXPECT_EQ(column(gate_x(Color::White), kB), (std::vector<Amplitude>{1, 0, 0})); }

TEST(GateX, SelfInverse) {
    for (Color c : {Color::Black, Color::White}) EXPECT_EQ(multiply(gate_x(c), gate_x(c)), Gate::identity(1));
}

TEST(GateH, BlackOnUnoccupied) {
    const auto v = column(gate_h(Color::Black), kU);
    EXPECT_NEAR(v[kB].real(), M_SQRT1_2, 1e-15);
    EXPECT_NEAR(v[kU].real(), -M_SQRT1_2, 1e-15);
    EXPECT_EQ(v[kW], Amplitude(0));
}

TEST(GateH, WhiteOnWhite) {
    const auto v = column(gate_h(Color::White), kW);
    EXPECT_NEAR(v[kW].real(), M_SQRT1_2, 1e-15);
    EXPECT_NEAR(v[kU].real(), M_SQRT1_2, 1e-15);
    EXPECT_EQ(v[kB], Amplitude(0));
}

TEST(GateH, BlackFixesWhite) { EXPECT_EQ(column(gate_h(Color::Black), kW), (std::vector<Amplitude>{0, 0, 1})); }

TEST(GateH, Involution) {
    for (Color c : {Color::Black, Color::White}) EXPECT_LT(max_abs_diff(multiply(gate_h(c), gate_h(c)), Gate::identity(1)), 1e-15);
}

TEST(ControlledX, MatchesGoldenMatrices) {
    EXPECT_EQ(gate_controlled_x(ControlCondition::is_unoccupied(), Color::Black), golden_gate("B"));
    EXPECT_EQ(gate_controlled_x(ControlCondition::is_unoccupied(), Color::White), golden_gate("W"));
}

TEST(ControlledX, GoldenRowsSwapped) {
    const Gate b = golden_gate("B");
    // Rows 4 and 5 (1-indexed) exchanged relative to the identity.
    for (std::size_t r = 0; r < 9; ++r) {
        const std::size_t c = r == 3 ? 4 : r == 4 ? 3 : r;
        EXPECT_EQ(b(r, c), Amplitude(1)) << r;
    }
    const Gate w = golden_gate("W");
    for (std::size_t r = 0; r < 9; ++r) {
        const std::size_t c = r == 4 ? 5 : r == 5 ? 4 : r;
        EXPECT_EQ(w(r, c), Amplitude(1)) << r;
    }
}

TEST(ControlledX, SingleQutritGoldens) {
    EXPECT_LT(max_abs_diff(gate_x(Color::Black), golden_gate("Xb")), 1e-15);
    EXPECT_LT(max_abs_diff(gate_x(Color::White), golden_gate("Xw")), 1e-15);
    EXPECT_LT(max_abs_diff(gate_h(Color::Black), golden_gate("Hb")), 1e-15);
    EXPECT_LT(max_abs_diff(gate_h(Color::White), golden_gate("Hw")), 1e-15);
}

TEST(ControlledX, ExhaustiveBasisAction) {
    const ControlCondition conds[] = {ControlCondition::is_unoccupied(), ControlCondition::is_black(), ControlCondition::is_white(),
                                      ControlCondition::is_any_stone()};
    for (auto cond : conds)
        for (Color action : {Color::Black, Color::White}) {
            const Gate g = gate_controlled_x(cond, action);
            const Gate x = gate_x(action);
            EXPECT_LT(unitarity_error(g), 1e-12);
            for (std::size_t ctl = 0; ctl < 3; ++ctl)
                for (std::size_t tgt = 0; tgt < 3; ++tgt) {
                    const auto col = column(g, ctl * 3 + tgt);
                    for (std::size_t r = 0; r < 9; ++r) {
                        Amplitude want = 0;
                        if (r / 3 == ctl) want = cond.fires(static_cast<CellState>(ctl)) ? x(r % 3, tgt) : Amplitude(r % 3 == tgt);
                        EXPECT_EQ(col[r], want) << ctl << tgt << r;
                    }
                }
        }
}

TEST(ControlledX, BlackControlPlacesWhite) {
    const Gate g = gate_controlled_x(ControlCondition::is_black(), Color::White);
    // |B>|U> (index 0*3+1) goes to |B>|W> (index 2).
    EXPECT_EQ(g(2, 1), Amplitude(1));
}

TEST(GoldenJson, RoundTrip) {
    for (const Gate& g : {gate_h(Color::White), gate_superposition(Color::Black, true)})
        EXPECT_EQ(from_golden_json(to_golden_json(g)), g);
}

TEST(Embed, PlacesStoneAtPoint) {
    const int n = 4;
    const DenseState psi = DenseState::empty_board(n);
    const DenseState out = embed(gate_x(Color::Black), {2}, n)(psi);
    Board want({2, 2});
    want.set(2, CellState::Black);
    EXPECT_EQ(out.amplitudes()[want.basis_index()], Amplitude(1));
}

TEST(Embed, HadamardOnTwoPoints) {
    const DenseState out = embed(gate_h(Color::Black), {0}, 2)(DenseState::empty_board(2));
    // |U,U> is index 1*3+1 = 4; |B,U> is 0*3+1 = 1.
    EXPECT_NEAR(out.amplitudes()[1].real(), M_SQRT1_2, 1e-15);
    EXPECT_NEAR(out.amplitudes()[4].real(), -M_SQRT1_2, 1e-15);
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-15);
}

TEST(Embed, FirstPointIsMostSignificant) {
    const DenseState out = embed(gate_x(Color::White), {0}, 3)(DenseState::empty_board(3));
    EXPECT_EQ(out.amplitudes()[2 * 9 + 1 * 3 + 1], Amplitude(1));
}

TEST(Embed, Errors) {
    try {
        embed(gate_controlled_x(ControlCondition::is_black(), Color::White), {1, 1}, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidMoveGeometry);
    }
    try {
        embed(gate_x(Color::Black), {3}, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadPoint);
    }
}

TEST(Embed, NormPreservedOnRandomStates) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        DenseState psi = random_state(n, rng);
        const int k = 1 + static_cast<int>(rng() % std::min(n, 3));
        std::vector<int> pts(static_cast<std::size_t>(n));
        std::iota(pts.begin(), pts.end(), 0);
        std::shuffle(pts.begin(), pts.end(), rng);
        pts.resize(static_cast<std::size_t>(k));
        Gate g = random_unitary_1q(rng);
        if (k == 2)
            g = rng() % 2 ? gate_superposition(Color::Black, true) : gate_controlled_x(ControlCondition::is_any_stone(), Color::White);
        if (k == 3) g = controlled(gate_superposition(Color::Black, false), ControlCondition::is_white(), "D");
        psi = embed(g, pts, n)(psi);
        EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-12);
    }
}

TEST(Embed, DisjointGatesCommute) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 5;
        const DenseState psi = random_state(n, rng);
        const auto a = embed(gate_superposition(Color::Black, true), {0, 3}, n);
        const auto b = embed(random_unitary_1q(rng), {2}, n);
        const DenseState ab = a(b(psi));
        const DenseState ba = b(a(psi));
        double diff = 0.0;
        for (std::size_t i = 0; i < ab.amplitudes().size(); ++i) diff = std::max(diff, std::abs(ab.amplitudes()[i] - ba.amplitudes()[i]));
        EXPECT_LT(diff, 1e-12);
    }
}

TEST(DenseFromTerms, SingleEmptyBoard) {
    const Board b({3, 3});
    const std::vector<std::pair<Amplitude, Board>> terms{{1.0, b}};
    const DenseState d = dense_from_terms(terms);
    EXPECT_EQ(d.amplitudes()[b.basis_index()], Amplitude(1));
    EXPECT_NEAR(d.norm_squared(), 1.0, 1e-15);
}

TEST(DenseFromTerms, TwoBranchState) {
    const Geometry g{3, 4};
    Board a(g), b(g);
    a.set(PointIndex{0, 0}, CellState::Black);
    b.set(PointIndex{1, 0}, CellState::Black);
    const std::vector<std::pair<Amplitude, Board>> terms{{M_SQRT1_2, a}, {M_SQRT1_2, b}};
    const auto back = dense_nonzeros(dense_from_terms(terms), g);
    ASSERT_EQ(back.size(), 2u);
    for (const auto& [amp, board] : back) EXPECT_NEAR(amp.real(), M_SQRT1_2, 1e-15);
}

TEST(DenseFromTerms, RoundTripRandom) {
    std::mt19937_64 rng(9);
    const Geometry g{3, 3};
    for (int trial = 0; trial < 50; ++trial) {
        std::map<std::vector<CellState>, Amplitude> want;
        std::vector<std::pair<Amplitude, Board>> terms;
        const int count = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < count; ++i) {
            Board b(g);
            for (int p = 0; p < 9; ++p) b.set(p, static_cast<CellState>(rng() % 3));
            if (want.count(b.cells())) continue;
            const Amplitude a(1.0 + static_cast<double>(i), -0.5);
            want[b.cells()] = a;
            terms.emplace_back(a, b);
        }
        const auto back = dense_nonzeros(dense_from_terms(terms), g);
        ASSERT_EQ(back.size(), want.size());
        for (const auto& [amp, board] : back) EXPECT_EQ(amp, want.at(board.cells()));
    }
}

TEST(DenseFromTerms, CapExceeded) {
    const Board b({4, 4});
    const std::vector<std::pair<Amplitude, Board>> terms{{1.0, b}};
    try {
        dense_from_terms(terms);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OracleTooLarge);
    }
}

TEST(Points, NotationRoundTrip) {
    const Geometry g{19, 19};
    for (int p = 0; p < g.points(); ++p) {
        const PointIndex pi = PointIndex::from_flat(p, g);
        EXPECT_EQ(parse_point(pi.notation(), g), pi);
        EXPECT_EQ(pi.flat(g), p);
    }
    EXPECT_EQ(parse_point("G3"), (PointIndex{6, 2}));
    EXPECT_EQ(parse_point("i9"), (PointIndex{8, 8}));
}

TEST(Points, OffBoard) {
    try {
        parse_point("K1", Geometry{9, 9});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadPoint);
    }
}
