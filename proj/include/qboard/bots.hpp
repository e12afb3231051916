#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "match.hpp"

namespace qboard {

struct EnumerationOptions {
    std::optional<Species> filter;
    // Cap per non-classical species. Classical moves are always listed in full.
    std::size_t cap = 64;
    // When set, non-classical candidates are sampled at random instead of
    // taken in board order.
    std::mt19937_64* rng = nullptr;
};

namespace bots_detail {

// Points within Chebyshev distance 2 of a stone in any branch, or of the
// centre on an empty board, that are empty in every branch.
inline std::vector<PointIndex> near_free_points(const Superposition& state, const LegalityChecker& checker) {
    const Geometry& g = state.geometry();
    std::vector<char> stone_any(static_cast<std::size_t>(g.points()), 0);
    bool any = false;
    for (const auto& t : state.terms())
        for (int p = 0; p < g.points(); ++p)
            if (t.board.at(p) != CellState::Unoccupied) {
                stone_any[static_cast<std::size_t>(p)] = 1;
                any = true;
            }
    if (!any) stone_any[static_cast<std::size_t>(PointIndex{g.width / 2, g.height / 2}.flat(g))] = 1;
    std::vector<PointIndex> out;
    for (int p = 0; p < g.points(); ++p) {
        if (!checker.free_everywhere(p)) continue;
        const PointIndex pi = PointIndex::from_flat(p, g);
        bool near = false;
        for (int dr = -2; dr <= 2 && !near; ++dr)
            for (int dc = -2; dc <= 2 && !near; ++dc) {
                const PointIndex q{pi.column + dc, pi.row + dr};
                near = q.on(g) && stone_any[static_cast<std::size_t>(q.flat(g))];
            }
        if (near) out.push_back(pi);
    }
    return out;
}

// Upper bound on branches after a counter/entangled move: each branch
// splits in two for every D leg whose control fires there.
inline std::size_t predicted_terms(const Superposition& state, Color countered, const std::vector<PointIndex>& d_controls) {
    std::size_t total = 0;
    for (const auto& t : state.terms()) {
        std::size_t f = 1;
        for (const auto& c : d_controls)
            if (holds(t.board.at(c), countered)) f *= 2;
        total += f;
    }
    return total;
}

// Draws candidates either in a fixed order (index 0, 1, ...) or at random.
class Picker {
public:
    Picker(std::mt19937_64* rng, std::size_t cap) : rng_(rng), cap_(cap) {}
    std::size_t attempts() const { return rng_ ? cap_ * 8 : SIZE_MAX; }
    bool random() const { return rng_ != nullptr; }
    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(*rng_); }
    Sign sign() { return pick(2) == 0 ? Sign::Plus : Sign::Minus; }

private:
    std::mt19937_64* rng_;
    std::size_t cap_;
};

} // namespace bots_detail

// Candidate moves for the player to move, every one of which passes the
// engine's full pipeline (including J-limit and ko) at the time of listing.
inline std::vector<Move> enumerate_legal(const Match& match, const EnumerationOptions& opts = {}) {
    using namespace bots_detail;
    std::vector<Move> out;
    const MatchState& ms = match.state();
    if (ms.outcome.status != MatchStatus::Ongoing) return out;
    const Superposition& state = ms.state;
    const Geometry& g = state.geometry();
    const Color me = ms.to_move;
    const Color them = opposite(me);
    const LegalityChecker checker(state, match.rule_context());
    const auto wants = [&](Species s) { return !opts.filter || *opts.filter == s; };
    const std::size_t j_limit = static_cast<std::size_t>(match.config().j_limit);

    if (wants(Species::Classical)) {
        for (int p = 0; p < g.points(); ++p) {
            if (!checker.free_everywhere(p)) continue;
            Move m = ClassicalMove{me, PointIndex::from_flat(p, g)};
            if (!match.check(m)) out.push_back(std::move(m));
        }
    }
    if (ms.game_wise_allowed) {
        if (wants(Species::GameWise)) {
            // One candidate per offset k: each branch takes its k-th (or a
            // random) free point.
            Picker pick(opts.rng, opts.cap);
            std::set<std::string> seen;
            for (std::size_t k = 0; k < opts.cap * 2 && seen.size() < opts.cap; ++k) {
                GameWise gw{me, {}};
                for (const auto& t : state.terms()) {
                    std::vector<int> free;
                    for (int p = 0; p < g.points(); ++p)
                        if (t.board.at(p) == CellState::Unoccupied) free.push_back(p);
                    if (free.empty()) continue;
                    const std::size_t idx = pick.random() ? pick.pick(free.size()) : k % free.size();
                    gw.entries.push_back({board_hash(t.board), PointIndex::from_flat(free[idx], g)});
                }
                if (gw.entries.empty()) break;
                Move m = gw;
                const std::string key = to_notation(m);
                if (!seen.insert(key).second) continue;
                if (!match.check(m)) out.push_back(std::move(m));
            }
        }
        return out;
    }

    const auto near = near_free_points(state, checker);
    const std::size_t n = near.size();

    if (wants(Species::Superposition) && n >= 2 && state.term_count() * 2 <= j_limit) {
        Picker pick(opts.rng, opts.cap);
        std::size_t found = 0;
        std::set<std::string> seen;
        std::size_t tries = 0;
        for (std::size_t i = 0; i < n && found < opts.cap && tries < pick.attempts(); ++i)
            for (std::size_t j = 0; j < n && found < opts.cap && tries < pick.attempts(); ++j)
                for (int s = 0; s < 2 && found < opts.cap && tries < pick.attempts(); ++s) {
                    ++tries;
                    std::size_t a = i, b = j;
                    Sign sg = s == 0 ? Sign::Plus : Sign::Minus;
                    if (pick.random()) {
                        a = pick.pick(n);
                        b = pick.pick(n);
                        sg = pick.sign();
                    }
                    if (a == b) continue;
                    Move m = SuperpositionMove{me, sg, near[a], near[b]};
                    if (!seen.insert(to_notation(m)).second) continue;
                    if (!match.check(m)) {
                        out.push_back(std::move(m));
                        ++found;
                    }
                }
    }

    const auto& controls = ms.last_written;
    const std::size_t nc = controls.size();
    if (nc == 0 || n == 0) return out;

    auto try_add = [&](Move m, std::set<std::string>& seen, std::size_t& found) {
        if (!seen.insert(to_notation(m)).second) return;
        if (!match.check(m)) {
            out.push_back(std::move(m));
            ++found;
        }
    };

    if (wants(Species::Counter)) {
        Picker pick(opts.rng, opts.cap);
        std::set<std::string> seen;
        std::size_t found = 0;
        std::size_t tries = 0;
        for (std::size_t c = 0; c < nc && found < opts.cap; ++c)
            for (std::size_t t = 0; t < n && found < opts.cap && tries < pick.attempts(); ++t, ++tries) {
                const std::size_t ci = pick.random() ? pick.pick(nc) : c;
                const std::size_t ti = pick.random() ? pick.pick(n) : t;
                try_add(CounterOne{them, {controls[ci], near[ti]}}, seen, found);
            }
        for (std::size_t c = 0; c < nc && found < opts.cap; ++c) {
            if (predicted_terms(state, them, {controls[c]}) > j_limit) continue;
            for (std::size_t t = 0; t < n && found < opts.cap * 2 && tries < pick.attempts() * 2; ++t)
                for (std::size_t u = t + 1; u < n && found < opts.cap * 2 && tries < pick.attempts() * 2; ++u, ++tries) {
                    std::size_t a = t, b = u;
                    Sign sg = Sign::Plus;
                    if (pick.random()) {
                        a = pick.pick(n);
                        b = pick.pick(n);
                        sg = pick.sign();
                        if (a == b) continue;
                    }
                    try_add(CounterTwo{them, {sg, controls[c], near[a], near[b]}}, seen, found);
                }
        }
    }

    if (wants(Species::Entangled) && nc >= 2) {
        Picker pick(opts.rng, opts.cap);
        std::set<std::string> seen;
        std::size_t found = 0;
        std::size_t tries = 0;
        const std::size_t limit = pick.random() ? pick.attempts() : opts.cap * 64;
        // E moves, ordered by control pair then targets.
        for (std::size_t c1 = 0; c1 < nc; ++c1)
            for (std::size_t c2 = c1 + 1; c2 < nc; ++c2)
                for (std::size_t t1 = 0; t1 < n && found < opts.cap && tries < limit; ++t1)
                    for (std::size_t t2 = 0; t2 < n && found < opts.cap && tries < limit; ++t2, ++tries) {
                        std::size_t a = t1, b = t2;
                        if (pick.random()) {
                            a = pick.pick(n);
                            b = pick.pick(n);
                        }
                        if (a == b) continue;
                        try_add(EntangledE{them, {controls[c1], near[a]}, {controls[c2], near[b]}}, seen, found);
                    }
        // T and F moves, sampled only while the J budget allows the split.
        std::size_t extra = 0;
        tries = 0;
        for (std::size_t c1 = 0; c1 < nc; ++c1)
            for (std::size_t c2 = 0; c2 < nc; ++c2) {
                if (c1 == c2) continue;
                const bool t_ok = predicted_terms(state, them, {controls[c2]}) <= j_limit;
                const bool f_ok = c1 < c2 && predicted_terms(state, them, {controls[c1], controls[c2]}) <= j_limit;
                for (std::size_t k = 0; k < n * n && extra < opts.cap && tries < limit; ++k, ++tries) {
                    std::size_t a = k % n, b = (k / n) % n, c = (k * 7 + 3) % n, d = (k * 13 + 5) % n;
                    Sign s1 = Sign::Plus, s2 = Sign::Minus;
                    if (pick.random()) {
                        a = pick.pick(n);
                        b = pick.pick(n);
                        c = pick.pick(n);
                        d = pick.pick(n);
                        s1 = pick.sign();
                        s2 = pick.sign();
                    }
                    const std::set<std::size_t> abc{a, b, c};
                    if (t_ok && abc.size() == 3)
                        try_add(EntangledT{them, {controls[c1], near[a]}, {s2, controls[c2], near[b], near[c]}}, seen, extra);
                    const std::set<std::size_t> abcd{a, b, c, d};
                    if (f_ok && abcd.size() == 4)
                        try_add(EntangledF{them, {s1, controls[c1], near[a], near[b]}, {s2, controls[c2], near[c], near[d]}}, seen, extra);
                }
            }
    }
    return out;
}

enum class BotPolicy { RandomLegal, GreedyBranch };

inline BotPolicy parse_policy(std::string_view s) {
    if (s == "random") return BotPolicy::RandomLegal;
    if (s == "greedy") return BotPolicy::GreedyBranch;
    throw Error(ErrorCode::InvalidConfig, "unknown policy '" + std::string(s) + "'");
}

// Longest run of `color` through `flat` if a stone of that color were
// placed there.
inline int line_length_through(const Board& b, int flat, Color color) {
    const Geometry& g = b.geometry();
    const PointIndex p = PointIndex::from_flat(flat, g);
    int best = 1;
    for (const auto& d : kLineDirections) {
        int run = 1;
        for (int sgn : {1, -1})
            for (int k = 1;; ++k) {
                const PointIndex q{p.column + sgn * k * d[0], p.row + sgn * k * d[1]};
                if (!q.on(g) || !holds(b.at(q), color)) break;
                ++run;
            }
        best = std::max(best, run);
    }
    return best;
}

namespace bots_detail {

inline Move no_move(const Match& match) {
    const Color me = match.state().to_move;
    if (match.config().game == Game::Weiqi) return Pass{me};
    return Resign{me};
}

// Best classical point by longest own line over all branches; ties broken
// by the rng.
inline std::optional<Move> greedy_classical(const Match& match, std::mt19937_64& rng) {
    const auto& state = match.state().state;
    const Color me = match.state().to_move;
    const Geometry& g = state.geometry();
    std::vector<int> best_points;
    int best = -1;
    for (const auto& m : enumerate_legal(match, {Species::Classical, 0, nullptr})) {
        const int p = std::get<ClassicalMove>(m).point.flat(g);
        int score = 0;
        for (const auto& t : state.terms()) score = std::max(score, line_length_through(t.board, p, me));
        if (score > best) {
            best = score;
            best_points.clear();
        }
        if (score == best) best_points.push_back(p);
    }
    if (best_points.empty()) return std::nullopt;
    const int p = best_points[std::uniform_int_distribution<std::size_t>(0, best_points.size() - 1)(rng)];
    return ClassicalMove{me, PointIndex::from_flat(p, g)};
}

// After the branch limit: every branch takes its own best point.
inline std::optional<Move> greedy_game_wise(const Match& match, std::mt19937_64& rng) {
    const auto& state = match.state().state;
    const Color me = match.state().to_move;
    const Geometry& g = state.geometry();
    GameWise gw{me, {}};
    const LegalityChecker checker(state, match.rule_context());
    for (std::size_t b = 0; b < state.term_count(); ++b) {
        const Board& board = state.terms()[b].board;
        std::vector<int> best_points;
        int best = -1;
        for (int p = 0; p < g.points(); ++p) {
            if (board.at(p) != CellState::Unoccupied || checker.suicide_in(b, p)) continue;
            const int score = line_length_through(board, p, me);
            if (score > best) {
                best = score;
                best_points.clear();
            }
            if (score == best) best_points.push_back(p);
        }
        if (best_points.empty()) continue;
        const int p = best_points[std::uniform_int_distribution<std::size_t>(0, best_points.size() - 1)(rng)];
        gw.entries.push_back({board_hash(board), PointIndex::from_flat(p, g)});
    }
    if (gw.entries.empty()) return std::nullopt;
    Move m = gw;
    if (match.check(m)) return std::nullopt;
    return m;
}

} // namespace bots_detail

// Harness-grade players. Deterministic for a given match state and rng.
inline Move bot_move(const Match& match, BotPolicy policy, std::mt19937_64& rng) {
    using namespace bots_detail;
    if (policy == BotPolicy::GreedyBranch) {
        if (match.state().game_wise_allowed && match.state().state.term_count() > 1)
            if (auto m = greedy_game_wise(match, rng)) return *m;
        if (auto m = greedy_classical(match, rng)) return *m;
        return no_move(match);
    }
    EnumerationOptions opts;
    opts.cap = 16;
    opts.rng = &rng;
    auto moves = enumerate_legal(match, opts);
    if (moves.empty()) return no_move(match);
    return moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
}

// Picks a species uniformly among those with a legal candidate, then a
// candidate uniformly. Used by the randomized harnesses so that rare
// species are exercised as often as classical play.
inline Move sample_move(const Match& match, std::mt19937_64& rng, const std::vector<Species>& allowed, std::size_t cap = 8) {
    std::vector<std::vector<Move>> buckets;
    for (Species sp : allowed) {
        EnumerationOptions opts;
        opts.filter = sp;
        opts.cap = cap;
        opts.rng = &rng;
        auto moves = enumerate_legal(match, opts);
        if (!moves.empty()) buckets.push_back(std::move(moves));
    }
    if (buckets.empty()) return bots_detail::no_move(match);
    auto& bucket = buckets[std::uniform_int_distribution<std::size_t>(0, buckets.size() - 1)(rng)];
    return bucket[std::uniform_int_distribution<std::size_t>(0, bucket.size() - 1)(rng)];
}

inline Move bot_move(const Match& match, BotPolicy policy, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return bot_move(match, policy, rng);
}

} // namespace qboard
