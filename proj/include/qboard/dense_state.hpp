#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "board.hpp"
#include "gate.hpp"

namespace qboard {

inline constexpr int kDefaultOracleCap = 12;

// Full 3^n statevector over n board points. Only meant for tiny boards:
// it is the reference the sparse engine is checked against.
class DenseState {
public:
    DenseState() = default;
    DenseState(int points, std::vector<Amplitude> amplitudes, int cap = kDefaultOracleCap)
        : points_(points), amplitudes_(std::move(amplitudes)) {
        check_cap(points, cap);
        if (amplitudes_.size() != pow3(points)) throw Error(ErrorCode::InvalidMoveGeometry, "amplitude vector has wrong length");
    }

    // Basis state |U...U>.
    static DenseState empty_board(int points, int cap = kDefaultOracleCap) {
        check_cap(points, cap);
        std::vector<Amplitude> a(pow3(points));
        std::uint64_t idx = 0;
        for (int i = 0; i < points; ++i) idx = idx * 3 + 1;
        a[idx] = 1.0;
        return DenseState(points, std::move(a), cap);
    }

    int points() const { return points_; }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    std::span<Amplitude> amplitudes() { return amplitudes_; }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amplitudes_) s += std::norm(a);
        return s;
    }

    static void check_cap(int points, int cap) {
        if (points < 1 || points > cap)
            throw Error(ErrorCode::OracleTooLarge, std::to_string(points) + " points exceeds dense oracle cap " + std::to_string(cap));
    }

private:
    int points_ = 0;
    std::vector<Amplitude> amplitudes_;
};

// A local gate lifted onto an n-point register without materialising the
// 3^n x 3^n operator.
class EmbeddedGate {
public:
    EmbeddedGate(Gate gate, std::vector<int> points, int n) : gate_(std::move(gate)), points_(std::move(points)), n_(n) {
        if (static_cast<int>(points_.size()) != gate_.arity())
            throw Error(ErrorCode::InvalidMoveGeometry, "point count does not match gate arity");
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (points_[i] < 0 || points_[i] >= n_) throw Error(ErrorCode::BadPoint, "gate point out of range");
            for (std::size_t j = 0; j < i; ++j)
                if (points_[i] == points_[j]) throw Error(ErrorCode::InvalidMoveGeometry, "duplicate gate point");
        }
        offsets_.resize(gate_.dim());
        for (std::size_t local = 0; local < gate_.dim(); ++local) {
            std::size_t rem = local;
            std::size_t off = 0;
            for (int k = gate_.arity() - 1; k >= 0; --k) {
                off += (rem % 3) * pow3(n_ - 1 - points_[static_cast<std::size_t>(k)]);
                rem /= 3;
            }
            offsets_[local] = off;
        }
        rows_.resize(gate_.dim());
        for (std::size_t r = 0; r < gate_.dim(); ++r)
            for (std::size_t c = 0; c < gate_.dim(); ++c)
                if (gate_(r, c) != Amplitude{}) rows_[r].emplace_back(c, gate_(r, c));
    }

    DenseState operator()(const DenseState& in) const {
        if (in.points() != n_) throw Error(ErrorCode::InvalidMoveGeometry, "state size does not match embedding");
        const auto& amps = in.amplitudes();
        std::vector<Amplitude> out(amps.begin(), amps.end());
        const std::size_t d = gate_.dim();
        std::vector<Amplitude> local(d);
        // Odometer over the trits not touched by the gate.
        std::vector<std::size_t> strides;
        for (int p = 0; p < n_; ++p)
            if (std::find(points_.begin(), points_.end(), p) == points_.end()) strides.push_back(pow3(n_ - 1 - p));
        std::vector<int> digit(strides.size(), 0);
        std::size_t base = 0;
        while (true) {
            bool any = false;
            for (std::size_t l = 0; l < d; ++l) {
                local[l] = amps[base + offsets_[l]];
                any = any || local[l] != Amplitude{};
            }
            if (any)
                for (std::size_t r = 0; r < d; ++r) {
                    Amplitude acc = 0.0;
                    for (const auto& [c, v] : rows_[r]) acc += v * local[c];
                    out[base + offsets_[r]] = acc;
                }
            std::size_t k = 0;
            for (; k < strides.size(); ++k) {
                if (digit[k] < 2) {
                    ++digit[k];
                    base += strides[k];
                    break;
                }
                digit[k] = 0;
                base -= 2 * strides[k];
            }
            if (k == strides.size()) break;
        }
        return DenseState(n_, std::move(out), n_);
    }

private:
    Gate gate_;
    std::vector<int> points_;
    int n_;
    std::vector<std::size_t> offsets_;
    std::vector<std::vector<std::pair<std::size_t, Amplitude>>> rows_;
};

inline EmbeddedGate embed(Gate gate, std::vector<int> points, int n) { return EmbeddedGate(std::move(gate), std::move(points), n); }

inline DenseState dense_from_terms(std::span<const std::pair<Amplitude, Board>> terms, int cap = kDefaultOracleCap) {
    if (terms.empty()) throw Error(ErrorCode::InvalidMoveGeometry, "no terms");
    const Geometry g = terms.front().second.geometry();
    DenseState::check_cap(g.points(), cap);
    std::vector<Amplitude> a(pow3(g.points()));
    for (const auto& [amp, board] : terms) {
        if (!(board.geometry() == g)) throw Error(ErrorCode::InvalidMoveGeometry, "boards differ in size");
        a[board.basis_index()] += amp;
    }
    return DenseState(g.points(), std::move(a), cap);
}

// Nonzero entries as (amplitude, board), in basis-index order.
inline std::vector<std::pair<Amplitude, Board>> dense_nonzeros(const DenseState& s, Geometry g, double threshold = 1e-12) {
    std::vector<std::pair<Amplitude, Board>> out;
    for (std::size_t i = 0; i < s.amplitudes().size(); ++i)
        if (std::abs(s.amplitudes()[i]) > threshold) out.emplace_back(s.amplitudes()[i], Board::from_basis_index(g, i));
    return out;
}

inline Amplitude inner_product(const DenseState& a, const DenseState& b) {
    Amplitude s = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    return s;
}

inline double fidelity(const DenseState& a, const DenseState& b) { return std::abs(inner_product(a, b)); }

} // namespace qboard
