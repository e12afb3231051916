#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "board.hpp"
#include "dense_state.hpp"
#include "gate.hpp"

namespace qboard {

inline constexpr double kZeroAmplitude = 1e-12;
inline constexpr double kStateTolerance = 1e-9;
inline constexpr std::size_t kDefaultTermCeiling = 4096;

struct Term {
    Amplitude amplitude;
    Board board;
};

struct MergeResult;

// Sparse board wavefunction: distinct classical boards with nonzero
// amplitudes, kept sorted by board encoding.
class Superposition {
public:
    Superposition() = default;

    static Superposition empty_board(Geometry g) {
        Superposition s;
        s.geometry_ = g;
        s.terms_.push_back({1.0, Board(g)});
        return s;
    }

    static Superposition classical(Board b) {
        Superposition s;
        s.geometry_ = b.geometry();
        s.terms_.push_back({1.0, std::move(b)});
        return s;
    }

    // Canonicalizes: merges equal boards, drops zero amplitudes, sorts.
    static Superposition from_terms(Geometry g, std::vector<Term> terms, int* merges = nullptr);

    const Geometry& geometry() const { return geometry_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& t : terms_) s += std::norm(t.amplitude);
        return s;
    }
    bool normalized(double tol = kStateTolerance) const { return std::abs(norm_squared() - 1.0) < tol; }

    // Canonical list of (amplitude, board).
    std::vector<std::pair<Amplitude, Board>> branch_boards() const {
        std::vector<std::pair<Amplitude, Board>> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) out.emplace_back(t.amplitude, t.board);
        return out;
    }

    friend bool operator==(const Superposition& a, const Superposition& b) {
        if (!(a.geometry_ == b.geometry_) || a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].amplitude != b.terms_[i].amplitude || !(a.terms_[i].board == b.terms_[i].board)) return false;
        return true;
    }

private:
    friend MergeResult merge_terms(Superposition state);

    Geometry geometry_{};
    std::vector<Term> terms_;
};

struct MergeResult {
    Superposition state;
    int merge_count = 0;
};

// Sums amplitudes of equal boards. merge_count counts coalesced pairs, so
// it doubles as an interference detector.
inline MergeResult merge_terms(Superposition state) {
    auto& terms = state.terms_;
    std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.board.cells() < b.board.cells(); });
    std::vector<Term> merged;
    merged.reserve(terms.size());
    int merges = 0;
    for (auto& t : terms) {
        if (!merged.empty() && merged.back().board.cells() == t.board.cells()) {
            merged.back().amplitude += t.amplitude;
            ++merges;
        } else {
            merged.push_back(std::move(t));
        }
    }
    std::erase_if(merged, [](const Term& t) { return std::abs(t.amplitude) < kZeroAmplitude; });
    terms = std::move(merged);
    return {std::move(state), merges};
}

inline Superposition Superposition::from_terms(Geometry g, std::vector<Term> terms, int* merges) {
    Superposition s;
    s.geometry_ = g;
    for (const auto& t : terms)
        if (!(t.board.geometry() == g)) throw Error(ErrorCode::InvalidMoveGeometry, "term board size mismatch");
    s.terms_ = std::move(terms);
    auto r = merge_terms(std::move(s));
    if (merges) *merges = r.merge_count;
    return std::move(r.state);
}

inline void check_points(const Geometry& g, std::span<const int> points) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i] < 0 || points[i] >= g.points()) throw Error(ErrorCode::InvalidMoveGeometry, "point off the board");
        for (std::size_t j = 0; j < i; ++j)
            if (points[i] == points[j]) throw Error(ErrorCode::InvalidMoveGeometry, "duplicate point in gate placement");
    }
}

// Expands every term over the gate's column for its local cells, then
// merges. `merges` accumulates the merge count when non-null.
inline Superposition apply_local(const Superposition& state, const Gate& gate, std::span<const int> points,
                                 int* merges = nullptr, std::size_t term_ceiling = kDefaultTermCeiling) {
    if (static_cast<int>(points.size()) != gate.arity())
        throw Error(ErrorCode::InvalidMoveGeometry, "point count does not match gate arity");
    check_points(state.geometry(), points);
    std::vector<Term> out;
    out.reserve(state.term_count() * 2);
    for (const auto& t : state.terms()) {
        std::size_t col = 0;
        for (int p : points) col = col * 3 + static_cast<std::size_t>(t.board.at(p));
        for (std::size_t row = 0; row < gate.dim(); ++row) {
            const Amplitude a = gate(row, col);
            if (a == 0.0) continue;
            Board b = t.board;
            std::size_t rem = row;
            for (int k = gate.arity() - 1; k >= 0; --k) {
                b.set(points[static_cast<std::size_t>(k)], static_cast<CellState>(rem % 3));
                rem /= 3;
            }
            out.push_back({t.amplitude * a, std::move(b)});
        }
    }
    int m = 0;
    Superposition next = Superposition::from_terms(state.geometry(), std::move(out), &m);
    if (merges) *merges += m;
    if (next.term_count() > term_ceiling)
        throw Error(ErrorCode::TermExplosion, std::to_string(next.term_count()) + " terms exceeds ceiling " + std::to_string(term_ceiling));
    return next;
}

inline Superposition apply_local(const Superposition& state, const Gate& gate, std::initializer_list<int> points,
                                 int* merges = nullptr) {
    return apply_local(state, gate, std::span<const int>(points.begin(), points.size()), merges);
}

using PointMarginal = std::array<double, 3>; // indexed by CellState

inline std::vector<PointMarginal> marginals(const Superposition& state) {
    std::vector<PointMarginal> out(static_cast<std::size_t>(state.geometry().points()), PointMarginal{0.0, 0.0, 0.0});
    for (const auto& t : state.terms()) {
        const double p = std::norm(t.amplitude);
        for (int i = 0; i < t.board.points(); ++i) out[static_cast<std::size_t>(i)][static_cast<int>(t.board.at(i))] += p;
    }
    return out;
}

inline DenseState to_dense(const Superposition& s, int cap = kDefaultOracleCap) {
    auto terms = s.branch_boards();
    return dense_from_terms(terms, cap);
}

inline nlohmann::json to_json(const Superposition& s) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : s.terms())
        terms.push_back({{"re", t.amplitude.real()}, {"im", t.amplitude.imag()}, {"cells", t.board.encoding()}});
    nlohmann::json j = {{"v", 1}, {"board_size", s.geometry().width}, {"terms", std::move(terms)}};
    if (!s.geometry().square()) j["height"] = s.geometry().height;
    return j;
}

// Canonical bytes; identical states serialize identically.
inline std::string serialize(const Superposition& s) { return to_json(s).dump(); }

inline std::string state_hash(const Superposition& s) { return fnv1a_hex(serialize(s)); }

inline Superposition superposition_from_json(const nlohmann::json& j) {
    const int width = j.at("board_size").get<int>();
    const Geometry g{width, j.value("height", width)};
    std::vector<Term> terms;
    for (const auto& t : j.at("terms"))
        terms.push_back({Amplitude(t.at("re").get<double>(), t.at("im").get<double>()), Board::from_encoding(g, t.at("cells").get<std::string>())});
    return Superposition::from_terms(g, std::move(terms));
}

inline nlohmann::json marginals_json(const std::vector<PointMarginal>& m) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : m) out.push_back({p[0], p[1], p[2]});
    return out;
}

} // namespace qboard
