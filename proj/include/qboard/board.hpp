#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cell.hpp"
#include "errors.hpp"

namespace qboard {

// One classical configuration: a qutrit basis state of the whole board.
class Board {
public:
    Board() = default;
    explicit Board(Geometry g) : geometry_(g), cells_(static_cast<std::size_t>(g.points()), CellState::Unoccupied) {
        if (g.width < 1 || g.height < 1 || g.width > kMaxDimension || g.height > kMaxDimension)
            throw Error(ErrorCode::InvalidConfig, "board dimensions out of range");
    }
    explicit Board(int size) : Board(Geometry{size, size}) {}

    const Geometry& geometry() const { return geometry_; }
    int points() const { return static_cast<int>(cells_.size()); }

    CellState at(int flat) const { return cells_[static_cast<std::size_t>(flat)]; }
    CellState at(PointIndex p) const { return at(p.flat(geometry_)); }
    void set(int flat, CellState s) { cells_[static_cast<std::size_t>(flat)] = s; }
    void set(PointIndex p, CellState s) { set(p.flat(geometry_), s); }

    const std::vector<CellState>& cells() const { return cells_; }

    bool empty() const {
        for (CellState s : cells_)
            if (s != CellState::Unoccupied) return false;
        return true;
    }

    // Base-3 big-endian digits over row-major cells. Lexicographic order on
    // this string equals numeric order of the base-3 integer.
    std::string encoding() const {
        std::string s(cells_.size(), '1');
        for (std::size_t i = 0; i < cells_.size(); ++i) s[i] = cell_char(cells_[i]);
        return s;
    }

    static Board from_encoding(Geometry g, std::string_view digits) {
        if (digits.size() != static_cast<std::size_t>(g.points()))
            throw Error(ErrorCode::ParseError, "cell string length does not match board");
        Board b(g);
        for (std::size_t i = 0; i < digits.size(); ++i) {
            const char c = digits[i];
            if (c < '0' || c > '2') throw Error(ErrorCode::ParseError, "cell digit must be 0, 1 or 2");
            b.cells_[i] = static_cast<CellState>(c - '0');
        }
        return b;
    }

    // Basis index in the dense statevector (cell 0 most significant).
    std::uint64_t basis_index() const {
        std::uint64_t idx = 0;
        for (CellState s : cells_) idx = idx * 3 + static_cast<std::uint64_t>(s);
        return idx;
    }

    static Board from_basis_index(Geometry g, std::uint64_t idx) {
        Board b(g);
        for (int i = g.points() - 1; i >= 0; --i) {
            b.cells_[static_cast<std::size_t>(i)] = static_cast<CellState>(idx % 3);
            idx /= 3;
        }
        return b;
    }

    friend bool operator==(const Board& a, const Board& b) {
        return a.geometry_ == b.geometry_ && a.cells_ == b.cells_;
    }
    friend auto operator<=>(const Board& a, const Board& b) { return a.cells_ <=> b.cells_; }

private:
    Geometry geometry_{};
    std::vector<CellState> cells_;
};

// FNV-1a 64, printed as 16 lowercase hex digits. Used for branch
// references and record state hashes, so it must be stable across builds.
inline std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string board_hash(const Board& b) { return fnv1a_hex(b.encoding()); }

// Orthogonal neighbours of a flat index.
template <typename F>
void for_each_neighbor(const Geometry& g, int flat, F&& f) {
    const int c = flat % g.width;
    const int r = flat / g.width;
    if (c > 0) f(flat - 1);
    if (c + 1 < g.width) f(flat + 1);
    if (r > 0) f(flat - g.width);
    if (r + 1 < g.height) f(flat + g.width);
}

inline std::string render(const Board& b) {
    const Geometry& g = b.geometry();
    std::string out = "   ";
    for (int c = 0; c < g.width; ++c) {
        out += ' ';
        out += static_cast<char>('A' + c);
    }
    out += '\n';
    for (int r = g.height - 1; r >= 0; --r) {
        const std::string label = std::to_string(r + 1);
        out += std::string(3 - label.size(), ' ') + label;
        for (int c = 0; c < g.width; ++c) {
            const CellState s = b.at(PointIndex{c, r});
            out += ' ';
            out += s == CellState::Black ? 'X' : s == CellState::White ? 'O' : '.';
        }
        out += '\n';
    }
    return out;
}

} // namespace qboard
