#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cell.hpp"
#include "errors.hpp"

namespace qboard {

using Amplitude = std::complex<double>;

inline constexpr double kMatrixTolerance = 1e-12;
inline constexpr int kMaxGateArity = 6;

constexpr std::size_t pow3(int k) {
    std::size_t r = 1;
    for (int i = 0; i < k; ++i) r *= 3;
    return r;
}

// Dense unitary on `arity` qutrits, row-major, dimension 3^arity.
// Multi-qutrit index convention: the first qutrit is the most
// significant trit.
class Gate {
public:
    Gate() = default;
    Gate(int arity, std::vector<Amplitude> matrix, std::string label)
        : arity_(arity), dim_(pow3(arity)), matrix_(std::move(matrix)), label_(std::move(label)) {
        if (arity < 1 || arity > kMaxGateArity)
            throw Error(ErrorCode::InvalidMoveGeometry, "gate arity out of range: " + std::to_string(arity));
        if (matrix_.size() != dim_ * dim_)
            throw Error(ErrorCode::InvalidMoveGeometry, "gate matrix has wrong size");
    }

    static Gate identity(int arity, std::string label = "I") {
        const std::size_t d = pow3(arity);
        std::vector<Amplitude> m(d * d);
        for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0;
        return Gate(arity, std::move(m), std::move(label));
    }

    int arity() const { return arity_; }
    std::size_t dim() const { return dim_; }
    const std::string& label() const { return label_; }
    std::span<const Amplitude> matrix() const { return matrix_; }

    const Amplitude& operator()(std::size_t row, std::size_t col) const { return matrix_[row * dim_ + col]; }
    Amplitude& operator()(std::size_t row, std::size_t col) { return matrix_[row * dim_ + col]; }

    Gate with_label(std::string label) const {
        Gate g = *this;
        g.label_ = std::move(label);
        return g;
    }

    friend bool operator==(const Gate& a, const Gate& b) {
        return a.arity_ == b.arity_ && a.matrix_ == b.matrix_;
    }

private:
    int arity_ = 0;
    std::size_t dim_ = 0;
    std::vector<Amplitude> matrix_;
    std::string label_;
};

// Product a * b (b acts first).
inline Gate multiply(const Gate& a, const Gate& b, std::string label = {}) {
    if (a.arity() != b.arity()) throw Error(ErrorCode::InvalidMoveGeometry, "arity mismatch in gate product");
    const std::size_t d = a.dim();
    std::vector<Amplitude> m(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            const Amplitude aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < d; ++j) m[i * d + j] += aik * b(k, j);
        }
    return Gate(a.arity(), std::move(m), label.empty() ? a.label() + "*" + b.label() : std::move(label));
}

inline Gate adjoint(const Gate& g) {
    const std::size_t d = g.dim();
    std::vector<Amplitude> m(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m[j * d + i] = std::conj(g(i, j));
    return Gate(g.arity(), std::move(m), g.label() + "^dag");
}

// Places `g` on the qutrits `positions` (indices into a register of
// `arity` qutrits) and identity elsewhere.
inline Gate lift(const Gate& g, std::span<const int> positions, int arity) {
    if (static_cast<int>(positions.size()) != g.arity())
        throw Error(ErrorCode::InvalidMoveGeometry, "lift: position count != gate arity");
    const std::size_t d = pow3(arity);
    std::vector<std::size_t> stride(arity);
    for (int q = 0; q < arity; ++q) stride[q] = pow3(arity - 1 - q);
    std::vector<Amplitude> m(d * d);
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t local_col = 0;
        std::size_t base = col;
        for (int p : positions) {
            const std::size_t digit = (col / stride[p]) % 3;
            local_col = local_col * 3 + digit;
            base -= digit * stride[p];
        }
        for (std::size_t local_row = 0; local_row < g.dim(); ++local_row) {
            const Amplitude a = g(local_row, local_col);
            if (a == 0.0) continue;
            std::size_t row = base;
            std::size_t rem = local_row;
            for (int k = g.arity() - 1; k >= 0; --k) {
                row += (rem % 3) * stride[positions[k]];
                rem /= 3;
            }
            m[row * d + col] = a;
        }
    }
    return Gate(arity, std::move(m), g.label());
}

// max |(U^dag U - I)_ij|, exploiting sparsity of the move gates.
inline double unitarity_error(const Gate& g) {
    const std::size_t d = g.dim();
    std::vector<std::vector<std::pair<std::size_t, Amplitude>>> rows(d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t j = 0; j < d; ++j)
            if (g(k, j) != 0.0) rows[k].emplace_back(j, g(k, j));
    std::vector<Amplitude> prod(d * d);
    for (std::size_t k = 0; k < d; ++k)
        for (const auto& [i, uki] : rows[k])
            for (const auto& [j, ukj] : rows[k]) prod[i * d + j] += std::conj(uki) * ukj;
    double err = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            err = std::max(err, std::abs(prod[i * d + j] - (i == j ? Amplitude(1.0) : Amplitude(0.0))));
    return err;
}

inline bool is_unitary(const Gate& g, double tol = kMatrixTolerance) { return unitarity_error(g) < tol; }

inline double max_abs_diff(const Gate& a, const Gate& b) {
    if (a.dim() != b.dim()) return INFINITY;
    double err = 0.0;
    for (std::size_t i = 0; i < a.matrix().size(); ++i) err = std::max(err, std::abs(a.matrix()[i] - b.matrix()[i]));
    return err;
}

// X^b swaps |black> and |U>; X^w swaps |U> and |white>. Both fix the
// other stone color.
inline Gate gate_x(Color c) {
    std::vector<Amplitude> m(9);
    const std::size_t stone_index = static_cast<std::size_t>(c);
    const std::size_t other = c == Color::Black ? 2 : 0;
    m[stone_index * 3 + 1] = 1.0;
    m[1 * 3 + stone_index] = 1.0;
    m[other * 3 + other] = 1.0;
    return Gate(1, std::move(m), c == Color::Black ? "Xb" : "Xw");
}

// Ternary Hadamards: H^b mixes |black>,|U>; H^w mixes |U>,|white>.
inline Gate gate_h(Color c) {
    const double r = M_SQRT1_2;
    std::vector<Amplitude> m;
    if (c == Color::Black)
        m = {r, r, 0, r, -r, 0, 0, 0, 1};
    else
        m = {1, 0, 0, 0, -r, r, 0, r, r};
    return Gate(1, std::move(m), c == Color::Black ? "Hb" : "Hw");
}

// Set of control-qutrit basis values on which a controlled gate fires.
struct ControlCondition {
    std::uint8_t mask = 0;

    static constexpr ControlCondition is_unoccupied() { return {1u << 1}; }
    static constexpr ControlCondition is_stone_of(Color c) { return {static_cast<std::uint8_t>(1u << static_cast<int>(c))}; }
    static constexpr ControlCondition is_black() { return is_stone_of(Color::Black); }
    static constexpr ControlCondition is_white() { return is_stone_of(Color::White); }
    static constexpr ControlCondition is_any_stone() { return {(1u << 0) | (1u << 2)}; }

    constexpr bool fires(CellState s) const { return (mask >> static_cast<int>(s)) & 1u; }
    friend constexpr bool operator==(ControlCondition, ControlCondition) = default;
};

// Block-diagonal controlled gate: the control qutrit comes first; `target`
// acts on the remaining qutrits when the control satisfies `condition`.
inline Gate controlled(const Gate& target, ControlCondition condition, std::string label) {
    const int arity = target.arity() + 1;
    const std::size_t block = target.dim();
    const std::size_t d = 3 * block;
    std::vector<Amplitude> m(d * d);
    for (std::size_t v = 0; v < 3; ++v) {
        const bool fire = condition.fires(static_cast<CellState>(v));
        for (std::size_t i = 0; i < block; ++i)
            for (std::size_t j = 0; j < block; ++j)
                m[(v * block + i) * d + (v * block + j)] = fire ? target(i, j) : (i == j ? 1.0 : 0.0);
    }
    return Gate(arity, std::move(m), std::move(label));
}

// With (is_unoccupied, black) this is the two-qutrit B gate; with
// (is_unoccupied, white) the W gate.
inline Gate gate_controlled_x(ControlCondition condition, Color action) {
    std::string label;
    if (condition == ControlCondition::is_unoccupied())
        label = action == Color::Black ? "B" : "W";
    else
        label = std::string("CX") + color_char(action);
    return controlled(gate_x(action), condition, std::move(label));
}

// Superposition placement S^{c,sign} on (p, q): controlled-X(p -> q) * H_p * X_p
// for sign +, without the X_p factor for sign -.
inline Gate gate_superposition(Color c, bool plus) {
    const std::vector<int> first{0};
    Gate s = multiply(gate_controlled_x(ControlCondition::is_unoccupied(), c), lift(gate_h(c), first, 2));
    if (plus) s = multiply(s, lift(gate_x(c), first, 2));
    return s.with_label(std::string("S") + color_char(c) + (plus ? "+" : "-"));
}

inline nlohmann::json to_golden_json(const Gate& g) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < g.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < g.dim(); ++j) row.push_back({g(i, j).real(), g(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return {{"label", g.label()}, {"arity", g.arity()}, {"matrix", std::move(rows)}};
}

inline Gate from_golden_json(const nlohmann::json& j) {
    const int arity = j.at("arity").get<int>();
    const auto& rows = j.at("matrix");
    const std::size_t d = pow3(arity);
    if (rows.size() != d) throw Error(ErrorCode::ParseError, "golden gate has wrong row count");
    std::vector<Amplitude> m;
    m.reserve(d * d);
    for (const auto& row : rows) {
        if (row.size() != d) throw Error(ErrorCode::ParseError, "golden gate has wrong column count");
        for (const auto& e : row) m.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    }
    return Gate(arity, std::move(m), j.value("label", std::string{}));
}

} // namespace qboard
