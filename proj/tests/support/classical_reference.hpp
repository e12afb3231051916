#pragma once

// Plain classical gomoku / go rules on an int grid. Deliberately shares no
// code with the engine: it is the reference the one-branch case is held to.

#include <set>
#include <string>
#include <vector>

namespace ref {

enum { EMPTY = 0, BLACK = 1, WHITE = 2 };

class Classical {
public:
    Classical(int w, int h, bool go) : w_(w), h_(h), go_(go), grid_(static_cast<std::size_t>(w * h), EMPTY) { seen_.insert(key()); }

    int to_move() const { return to_move_; }
    int at(int x, int y) const { return grid_[static_cast<std::size_t>(y * w_ + x)]; }
    bool over() const { return winner_ != 0 || passes_ >= 2; }
    int winner() const { return winner_; }

    bool legal(int x, int y) const {
        if (over() || at(x, y) != EMPTY) return false;
        if (!go_) return true;
        Classical copy = *this;
        return copy.place(x, y, false);
    }

    // Returns false (leaving the position unchanged) on an illegal move.
    bool play(int x, int y) { return legal(x, y) && place(x, y, true); }

    void pass() {
        ++passes_;
        to_move_ = 3 - to_move_;
    }

    int last_captures() const { return last_captures_; }

    // Same bytes as the engine's canonical serialization of a one-term state.
    std::string serialize() const {
        std::string cells;
        for (int v : grid_) cells += v == BLACK ? '0' : v == WHITE ? '2' : '1';
        std::string s = "{\"board_size\":" + std::to_string(w_);
        if (w_ != h_) s += ",\"height\":" + std::to_string(h_);
        s += ",\"terms\":[{\"cells\":\"" + cells + "\",\"im\":0.0,\"re\":1.0}],\"v\":1}";
        return s;
    }

private:
    int& cell(int x, int y) { return grid_[static_cast<std::size_t>(y * w_ + x)]; }

    void flood(int x, int y, int color, std::vector<int>& stones, std::set<int>& libs, std::vector<char>& mark) const {
        if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
        const int i = y * w_ + x;
        if (at(x, y) == EMPTY) {
            libs.insert(i);
            return;
        }
        if (at(x, y) != color || mark[static_cast<std::size_t>(i)]) return;
        mark[static_cast<std::size_t>(i)] = 1;
        stones.push_back(i);
        flood(x + 1, y, color, stones, libs, mark);
        flood(x - 1, y, color, stones, libs, mark);
        flood(x, y + 1, color, stones, libs, mark);
        flood(x, y - 1, color, stones, libs, mark);
    }

    bool place(int x, int y, bool commit) {
        const int me = to_move_;
        const int them = 3 - me;
        const std::vector<int> before = grid_;
        cell(x, y) = me;
        int captured = 0;
        if (go_) {
            const int dx[] = {1, -1, 0, 0};
            const int dy[] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                const int nx = x + dx[k], ny = y + dy[k];
                if (nx < 0 || ny < 0 || nx >= w_ || ny >= h_ || at(nx, ny) != them) continue;
                std::vector<int> stones;
                std::set<int> libs;
                std::vector<char> mark(grid_.size(), 0);
                flood(nx, ny, them, stones, libs, mark);
                if (libs.empty())
                    for (int i : stones) {
                        grid_[static_cast<std::size_t>(i)] = EMPTY;
                        ++captured;
                    }
            }
            std::vector<int> stones;
            std::set<int> libs;
            std::vector<char> mark(grid_.size(), 0);
            flood(x, y, me, stones, libs, mark);
            const bool suicide = captured == 0 && libs.empty();
            const bool ko = captured > 0 && seen_.count(key()) > 0;
            if (suicide || ko) {
                grid_ = before;
                return false;
            }
        } else if (five(x, y, me)) {
            winner_ = me;
        }
        if (!commit) {
            grid_ = before;
            return true;
        }
        last_captures_ = captured;
        passes_ = 0;
        to_move_ = them;
        seen_.insert(key());
        return true;
    }

    bool five(int x, int y, int color) const {
        const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
        for (const auto& d : dirs) {
            int run = 1;
            for (int s : {1, -1})
                for (int k = 1;; ++k) {
                    const int nx = x + s * k * d[0], ny = y + s * k * d[1];
                    if (nx < 0 || ny < 0 || nx >= w_ || ny >= h_ || at(nx, ny) != color) break;
                    ++run;
                }
            if (run >= 5) return true;
        }
        return false;
    }

    std::string key() const { return std::string(grid_.begin(), grid_.end()); }

    int w_, h_;
    bool go_;
    std::vector<int> grid_;
    int to_move_ = BLACK;
    int winner_ = 0;
    int passes_ = 0;
    int last_captures_ = 0;
    std::set<std::string> seen_;
};

} // namespace ref
