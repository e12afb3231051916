#pragma once

#include <array>
#include <optional>

#include "board.hpp"
#include "superposition.hpp"

namespace qboard {

using FiveLine = std::array<PointIndex, 5>;

// Scan directions in (dcolumn, drow): along a row, along a column, and the
// two diagonals.
inline constexpr std::array<std::array<int, 2>, 4> kLineDirections{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};

// First five-in-a-row of `color`, scanning start points in row-major order
// and directions in kLineDirections order. Overlines contain a five and
// therefore count.
inline std::optional<FiveLine> line_win(const Board& board, Color color) {
    const Geometry& g = board.geometry();
    const CellState want = stone(color);
    for (int flat = 0; flat < g.points(); ++flat) {
        if (board.at(flat) != want) continue;
        const PointIndex start = PointIndex::from_flat(flat, g);
        for (const auto& d : kLineDirections) {
            FiveLine line;
            bool ok = true;
            for (int k = 0; k < 5 && ok; ++k) {
                const PointIndex p{start.column + k * d[0], start.row + k * d[1]};
                ok = p.on(g) && board.at(p) == want;
                if (ok) line[static_cast<std::size_t>(k)] = p;
            }
            if (ok) return line;
        }
    }
    return std::nullopt;
}

enum class FirStatus { Ongoing, BlackWins, WhiteWins };

struct FirWitness {
    std::size_t branch = 0; // index into the canonical term list
    FiveLine line{};
};

struct FirOutcome {
    FirStatus status = FirStatus::Ongoing;
    std::optional<FirWitness> witness;
};

// A color wins when any branch holds five in a row; amplitudes play no
// part. When branches disagree the mover's color takes precedence; with no
// mover given, black is checked first.
inline FirOutcome fir_outcome(const Superposition& state, std::optional<Color> mover = std::nullopt) {
    const Color first = mover.value_or(Color::Black);
    for (Color c : {first, opposite(first)}) {
        for (std::size_t i = 0; i < state.terms().size(); ++i) {
            if (auto line = line_win(state.terms()[i].board, c)) {
                return {c == Color::Black ? FirStatus::BlackWins : FirStatus::WhiteWins, FirWitness{i, *line}};
            }
        }
    }
    return {};
}

} // namespace qboard
