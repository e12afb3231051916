#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace qboard {

// Basis order of one qutrit. The numeric values are the basis indices of
// the 3-vectors |black> = (1,0,0), |U> = (0,1,0), |white> = (0,0,1).
enum class CellState : std::uint8_t { Black = 0, Unoccupied = 1, White = 2 };

enum class Color : std::uint8_t { Black = 0, White = 2 };

constexpr CellState stone(Color c) { return static_cast<CellState>(c); }
constexpr Color opposite(Color c) { return c == Color::Black ? Color::White : Color::Black; }
constexpr bool holds(CellState s, Color c) { return s == stone(c); }

constexpr char color_char(Color c) { return c == Color::Black ? 'b' : 'w'; }

inline Color parse_color(std::string_view s) {
    if (s == "b" || s == "B" || s == "black") return Color::Black;
    if (s == "w" || s == "W" || s == "white") return Color::White;
    throw Error(ErrorCode::ParseError, "unknown color '" + std::string(s) + "'");
}

constexpr char cell_char(CellState s) {
    return s == CellState::Black ? '0' : s == CellState::Unoccupied ? '1' : '2';
}

// Rectangular grid dimensions. Matches use square boards; the dense
// oracle also runs on tiny rectangular ones such as 3x4.
struct Geometry {
    int width = 15;
    int height = 15;

    constexpr int points() const { return width * height; }
    constexpr bool square() const { return width == height; }
    friend constexpr bool operator==(const Geometry&, const Geometry&) = default;
};

inline constexpr int kMaxDimension = 19;

// A board point. Columns are lettered A, B, C, ... (no skipped letters),
// rows numbered from 1. Flat index is row-major: row * width + column.
struct PointIndex {
    int column = 0;
    int row = 0;

    constexpr int flat(const Geometry& g) const { return row * g.width + column; }
    static constexpr PointIndex from_flat(int index, const Geometry& g) {
        return {index % g.width, index / g.width};
    }
    constexpr bool on(const Geometry& g) const {
        return column >= 0 && row >= 0 && column < g.width && row < g.height;
    }

    std::string notation() const {
        return std::string(1, static_cast<char>('A' + column)) + std::to_string(row + 1);
    }

    friend constexpr auto operator<=>(const PointIndex&, const PointIndex&) = default;
};

inline PointIndex parse_point(std::string_view s) {
    if (s.size() < 2 || s.size() > 3)
        throw Error(ErrorCode::ParseError, "bad point '" + std::string(s) + "'");
    char letter = s[0];
    if (letter >= 'a' && letter <= 'z') letter = static_cast<char>(letter - 'a' + 'A');
    if (letter < 'A' || letter > 'Z')
        throw Error(ErrorCode::ParseError, "bad point '" + std::string(s) + "'");
    int row = 0;
    for (char c : s.substr(1)) {
        if (c < '0' || c > '9') throw Error(ErrorCode::ParseError, "bad point '" + std::string(s) + "'");
        row = row * 10 + (c - '0');
    }
    if (row < 1) throw Error(ErrorCode::ParseError, "bad point '" + std::string(s) + "'");
    return {letter - 'A', row - 1};
}

inline PointIndex parse_point(std::string_view s, const Geometry& g) {
    PointIndex p = parse_point(s);
    if (!p.on(g)) throw Error(ErrorCode::BadPoint, std::string(s) + " is off the board");
    return p;
}

} // namespace qboard
