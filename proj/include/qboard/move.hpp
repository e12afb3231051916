#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cell.hpp"
#include "errors.hpp"

namespace qboard {

enum class Sign { Plus, Minus };

constexpr char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

// C leg: if `control` holds a stone of the countered color, place the
// opposite color at `target`.
struct CounterOneLeg {
    PointIndex control;
    PointIndex target;
    friend bool operator==(const CounterOneLeg&, const CounterOneLeg&) = default;
};

// D leg: if `control` holds a stone of the countered color, place the
// opposite color on (first, second) with the signed superposition move.
struct CounterTwoLeg {
    Sign sign = Sign::Plus;
    PointIndex control;
    PointIndex first;
    PointIndex second;
    friend bool operator==(const CounterTwoLeg&, const CounterTwoLeg&) = default;
};

struct ClassicalMove {
    Color color;
    PointIndex point;
    friend bool operator==(const ClassicalMove&, const ClassicalMove&) = default;
};

struct SuperpositionMove {
    Color color;
    Sign sign;
    PointIndex first;
    PointIndex second;
    friend bool operator==(const SuperpositionMove&, const SuperpositionMove&) = default;
};

struct CounterOne {
    Color countered;
    CounterOneLeg leg;
    friend bool operator==(const CounterOne&, const CounterOne&) = default;
};

struct CounterTwo {
    Color countered;
    CounterTwoLeg leg;
    friend bool operator==(const CounterTwo&, const CounterTwo&) = default;
};

struct EntangledE {
    Color countered;
    CounterOneLeg first;
    CounterOneLeg second;
    friend bool operator==(const EntangledE&, const EntangledE&) = default;
};

struct EntangledT {
    Color countered;
    CounterOneLeg first;
    CounterTwoLeg second;
    friend bool operator==(const EntangledT&, const EntangledT&) = default;
};

struct EntangledF {
    Color countered;
    CounterTwoLeg first;
    CounterTwoLeg second;
    friend bool operator==(const EntangledF&, const EntangledF&) = default;
};

struct GameWiseEntry {
    std::string branch_hash;
    PointIndex point;
    friend bool operator==(const GameWiseEntry&, const GameWiseEntry&) = default;
};

// Per-branch placement: each entry puts a `color` stone at `point` in the
// branch whose board hash is `branch_hash`.
struct GameWise {
    Color color;
    std::vector<GameWiseEntry> entries;
    friend bool operator==(const GameWise&, const GameWise&) = default;
};

struct CaptureEntry {
    PointIndex point;
    Color color;
    friend bool operator==(const CaptureEntry&, const CaptureEntry&) = default;
    friend auto operator<=>(const CaptureEntry& a, const CaptureEntry& b) {
        if (auto c = a.point <=> b.point; c != 0) return c;
        return a.color <=> b.color;
    }
};

// Engine-injected removal. Broadcast form is one X gate per entry applied
// to every branch; per_branch is the game-wise removal variant.
struct MandatoryCapture {
    std::vector<CaptureEntry> entries;
    bool per_branch = false;
    friend bool operator==(const MandatoryCapture&, const MandatoryCapture&) = default;
};

struct Pass {
    Color color;
    friend bool operator==(const Pass&, const Pass&) = default;
};

struct Resign {
    Color color;
    friend bool operator==(const Resign&, const Resign&) = default;
};

using Move = std::variant<ClassicalMove, SuperpositionMove, CounterOne, CounterTwo, EntangledE, EntangledT, EntangledF,
                          GameWise, MandatoryCapture, Pass, Resign>;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Color of the player making the move. Counter and entangled moves are
// made by the opponent of the countered color.
inline std::optional<Color> mover(const Move& m) {
    return std::visit(overloaded{
                          [](const ClassicalMove& x) -> std::optional<Color> { return x.color; },
                          [](const SuperpositionMove& x) -> std::optional<Color> { return x.color; },
                          [](const CounterOne& x) -> std::optional<Color> { return opposite(x.countered); },
                          [](const CounterTwo& x) -> std::optional<Color> { return opposite(x.countered); },
                          [](const EntangledE& x) -> std::optional<Color> { return opposite(x.countered); },
                          [](const EntangledT& x) -> std::optional<Color> { return opposite(x.countered); },
                          [](const EntangledF& x) -> std::optional<Color> { return opposite(x.countered); },
                          [](const GameWise& x) -> std::optional<Color> { return x.color; },
                          [](const MandatoryCapture&) -> std::optional<Color> { return std::nullopt; },
                          [](const Pass& x) -> std::optional<Color> { return x.color; },
                          [](const Resign& x) -> std::optional<Color> { return x.color; },
                      },
                      m);
}

enum class Species { Classical, Superposition, Counter, Entangled, GameWise, Capture, Pass, Resign };

inline Species species(const Move& m) {
    return std::visit(overloaded{
                          [](const ClassicalMove&) { return Species::Classical; },
                          [](const SuperpositionMove&) { return Species::Superposition; },
                          [](const CounterOne&) { return Species::Counter; },
                          [](const CounterTwo&) { return Species::Counter; },
                          [](const EntangledE&) { return Species::Entangled; },
                          [](const EntangledT&) { return Species::Entangled; },
                          [](const EntangledF&) { return Species::Entangled; },
                          [](const GameWise&) { return Species::GameWise; },
                          [](const MandatoryCapture&) { return Species::Capture; },
                          [](const Pass&) { return Species::Pass; },
                          [](const Resign&) { return Species::Resign; },
                      },
                      m);
}

inline std::string_view to_string(Species s) {
    switch (s) {
    case Species::Classical: return "classical";
    case Species::Superposition: return "superposition";
    case Species::Counter: return "counter";
    case Species::Entangled: return "entangled";
    case Species::GameWise: return "game_wise";
    case Species::Capture: return "capture";
    case Species::Pass: return "pass";
    case Species::Resign: return "resign";
    }
    return "?";
}

inline std::optional<Species> parse_species(std::string_view s) {
    for (Species sp : {Species::Classical, Species::Superposition, Species::Counter, Species::Entangled, Species::GameWise,
                       Species::Capture, Species::Pass, Species::Resign})
        if (to_string(sp) == s) return sp;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Compact notation

namespace notation_detail {

inline std::string leg(const CounterOneLeg& l) { return "[" + l.control.notation() + ">" + l.target.notation() + "]"; }

inline std::string leg(const CounterTwoLeg& l) {
    return "[" + l.control.notation() + sign_char(l.sign) + l.first.notation() + "," + l.second.notation() + "]";
}

inline std::string captures(const MandatoryCapture& mc) {
    std::string s = mc.per_branch ? "MC* {" : "MC {";
    for (std::size_t i = 0; i < mc.entries.size(); ++i) {
        if (i) s += ',';
        s += color_char(mc.entries[i].color);
        s += ' ';
        s += mc.entries[i].point.notation();
    }
    return s + "}";
}

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::string word() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '*')) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }
    // Letter followed by digits, e.g. G3 or C10.
    PointIndex point() {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return parse_point(text_.substr(start, pos_ - start));
    }
    Sign sign() {
        if (accept('+')) return Sign::Plus;
        if (accept('-')) return Sign::Minus;
        fail("expected sign");
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw Error(ErrorCode::ParseError, why + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(text_) + "'");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

inline CounterOneLeg parse_leg1(Cursor& c) {
    c.expect('[');
    CounterOneLeg l;
    l.control = c.point();
    c.expect('>');
    l.target = c.point();
    c.expect(']');
    return l;
}

inline CounterTwoLeg parse_leg2(Cursor& c) {
    c.expect('[');
    CounterTwoLeg l;
    l.control = c.point();
    l.sign = c.sign();
    l.first = c.point();
    c.expect(',');
    l.second = c.point();
    c.expect(']');
    return l;
}

} // namespace notation_detail

inline std::string to_notation(const Move& m) {
    using namespace notation_detail;
    return std::visit(
        overloaded{
            [](const ClassicalMove& x) { return std::string("X ") + color_char(x.color) + " " + x.point.notation(); },
            [](const SuperpositionMove& x) {
                return std::string(1, x.color == Color::Black ? 'B' : 'W') + sign_char(x.sign) + " " + x.first.notation() + " " + x.second.notation();
            },
            [](const CounterOne& x) { return std::string("C ") + color_char(opposite(x.countered)) + " " + leg(x.leg); },
            [](const CounterTwo& x) { return std::string("D ") + color_char(opposite(x.countered)) + " " + leg(x.leg); },
            [](const EntangledE& x) { return std::string("E ") + color_char(opposite(x.countered)) + " " + leg(x.first) + leg(x.second); },
            [](const EntangledT& x) { return std::string("T ") + color_char(opposite(x.countered)) + " " + leg(x.first) + leg(x.second); },
            [](const EntangledF& x) { return std::string("F ") + color_char(opposite(x.countered)) + " " + leg(x.first) + leg(x.second); },
            [](const GameWise& x) {
                std::string s = std::string("GW ") + color_char(x.color) + " {";
                for (std::size_t i = 0; i < x.entries.size(); ++i) {
                    if (i) s += ',';
                    s += x.entries[i].branch_hash + ":" + x.entries[i].point.notation();
                }
                return s + "}";
            },
            [](const MandatoryCapture& x) { return captures(x); },
            [](const Pass& x) { return std::string("PASS ") + color_char(x.color); },
            [](const Resign& x) { return std::string("RESIGN ") + color_char(x.color); },
        },
        m);
}

// Parses compact notation. The mover's color may be omitted from species
// other than X, superposition and MC; `default_color` then supplies it.
inline Move parse_move(std::string_view text, std::optional<Color> default_color = std::nullopt) {
    using namespace notation_detail;
    Cursor c(text);
    const std::string head = c.word();
    auto color_or_default = [&]() -> Color {
        const char p = c.peek();
        if (p == 'b' || p == 'w' || p == 'B' || p == 'W') {
            const std::string w = c.word();
            return parse_color(w);
        }
        if (!default_color) c.fail("move color required");
        return *default_color;
    };
    Move result;
    if (head == "X") {
        const Color col = parse_color(c.word());
        result = ClassicalMove{col, c.point()};
    } else if (head == "B" || head == "W") {
        const Sign s = c.sign();
        const PointIndex a = c.point();
        const PointIndex b = c.point();
        result = SuperpositionMove{head == "B" ? Color::Black : Color::White, s, a, b};
    } else if (head == "C") {
        const Color mv = color_or_default();
        result = CounterOne{opposite(mv), parse_leg1(c)};
    } else if (head == "D") {
        const Color mv = color_or_default();
        result = CounterTwo{opposite(mv), parse_leg2(c)};
    } else if (head == "E") {
        const Color mv = color_or_default();
        const auto a = parse_leg1(c);
        const auto b = parse_leg1(c);
        result = EntangledE{opposite(mv), a, b};
    } else if (head == "T") {
        const Color mv = color_or_default();
        const auto a = parse_leg1(c);
        const auto b = parse_leg2(c);
        result = EntangledT{opposite(mv), a, b};
    } else if (head == "F") {
        const Color mv = color_or_default();
        const auto a = parse_leg2(c);
        const auto b = parse_leg2(c);
        result = EntangledF{opposite(mv), a, b};
    } else if (head == "GW") {
        GameWise gw{color_or_default(), {}};
        c.expect('{');
        if (!c.accept('}')) {
            do {
                GameWiseEntry e;
                e.branch_hash = c.word();
                c.expect(':');
                e.point = c.point();
                gw.entries.push_back(std::move(e));
            } while (c.accept(','));
            c.expect('}');
        }
        result = std::move(gw);
    } else if (head == "MC" || head == "MC*") {
        MandatoryCapture mc;
        mc.per_branch = head == "MC*";
        c.expect('{');
        if (!c.accept('}')) {
            do {
                const Color col = parse_color(c.word());
                mc.entries.push_back({c.point(), col});
            } while (c.accept(','));
            c.expect('}');
        }
        result = std::move(mc);
    } else if (head == "PASS") {
        result = Pass{color_or_default()};
    } else if (head == "RESIGN") {
        result = Resign{color_or_default()};
    } else {
        c.fail("unknown move species '" + head + "'");
    }
    if (!c.done()) c.fail("trailing input");
    return result;
}

// ---------------------------------------------------------------------------
// JSON form

inline nlohmann::json to_json(const Move& m) {
    auto pt = [](const PointIndex& p) { return p.notation(); };
    auto leg1 = [&](const CounterOneLeg& l) { return nlohmann::json{{"control", pt(l.control)}, {"target", pt(l.target)}}; };
    auto leg2 = [&](const CounterTwoLeg& l) {
        return nlohmann::json{{"control", pt(l.control)}, {"sign", std::string(1, sign_char(l.sign))}, {"targets", {pt(l.first), pt(l.second)}}};
    };
    auto col = [](Color c) { return std::string(1, color_char(c)); };
    return std::visit(
        overloaded{
            [&](const ClassicalMove& x) { return nlohmann::json{{"type", "classical"}, {"color", col(x.color)}, {"point", pt(x.point)}}; },
            [&](const SuperpositionMove& x) {
                return nlohmann::json{{"type", "superposition"}, {"color", col(x.color)}, {"sign", std::string(1, sign_char(x.sign))},
                                      {"points", {pt(x.first), pt(x.second)}}};
            },
            [&](const CounterOne& x) { return nlohmann::json{{"type", "C"}, {"color", col(opposite(x.countered))}, {"legs", {leg1(x.leg)}}}; },
            [&](const CounterTwo& x) { return nlohmann::json{{"type", "D"}, {"color", col(opposite(x.countered))}, {"legs", {leg2(x.leg)}}}; },
            [&](const EntangledE& x) {
                return nlohmann::json{{"type", "E"}, {"color", col(opposite(x.countered))}, {"legs", {leg1(x.first), leg1(x.second)}}};
            },
            [&](const EntangledT& x) {
                return nlohmann::json{{"type", "T"}, {"color", col(opposite(x.countered))}, {"legs", {leg1(x.first), leg2(x.second)}}};
            },
            [&](const EntangledF& x) {
                return nlohmann::json{{"type", "F"}, {"color", col(opposite(x.countered))}, {"legs", {leg2(x.first), leg2(x.second)}}};
            },
            [&](const GameWise& x) {
                nlohmann::json entries = nlohmann::json::array();
                for (const auto& e : x.entries) entries.push_back({{"branch", e.branch_hash}, {"point", pt(e.point)}});
                return nlohmann::json{{"type", "game_wise"}, {"color", col(x.color)}, {"entries", std::move(entries)}};
            },
            [&](const MandatoryCapture& x) {
                nlohmann::json entries = nlohmann::json::array();
                for (const auto& e : x.entries) entries.push_back({{"point", pt(e.point)}, {"color", col(e.color)}});
                return nlohmann::json{{"type", "capture"}, {"per_branch", x.per_branch}, {"entries", std::move(entries)}};
            },
            [&](const Pass& x) { return nlohmann::json{{"type", "pass"}, {"color", col(x.color)}}; },
            [&](const Resign& x) { return nlohmann::json{{"type", "resign"}, {"color", col(x.color)}}; },
        },
        m);
}

inline Move move_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    auto pt = [](const nlohmann::json& v) { return parse_point(v.get<std::string>()); };
    auto sg = [](const nlohmann::json& v) { return v.get<std::string>() == "-" ? Sign::Minus : Sign::Plus; };
    auto leg1 = [&](const nlohmann::json& l) { return CounterOneLeg{pt(l.at("control")), pt(l.at("target"))}; };
    auto leg2 = [&](const nlohmann::json& l) {
        return CounterTwoLeg{sg(l.at("sign")), pt(l.at("control")), pt(l.at("targets").at(0)), pt(l.at("targets").at(1))};
    };
    auto color = [&]() { return parse_color(j.at("color").get<std::string>()); };
    if (type == "classical") return ClassicalMove{color(), pt(j.at("point"))};
    if (type == "superposition") return SuperpositionMove{color(), sg(j.at("sign")), pt(j.at("points").at(0)), pt(j.at("points").at(1))};
    if (type == "C") return CounterOne{opposite(color()), leg1(j.at("legs").at(0))};
    if (type == "D") return CounterTwo{opposite(color()), leg2(j.at("legs").at(0))};
    if (type == "E") return EntangledE{opposite(color()), leg1(j.at("legs").at(0)), leg1(j.at("legs").at(1))};
    if (type == "T") return EntangledT{opposite(color()), leg1(j.at("legs").at(0)), leg2(j.at("legs").at(1))};
    if (type == "F") return EntangledF{opposite(color()), leg2(j.at("legs").at(0)), leg2(j.at("legs").at(1))};
    if (type == "game_wise") {
        GameWise gw{color(), {}};
        for (const auto& e : j.at("entries")) gw.entries.push_back({e.at("branch").get<std::string>(), pt(e.at("point"))});
        return gw;
    }
    if (type == "capture") {
        MandatoryCapture mc;
        mc.per_branch = j.value("per_branch", false);
        for (const auto& e : j.at("entries")) mc.entries.push_back({pt(e.at("point")), parse_color(e.at("color").get<std::string>())});
        return mc;
    }
    if (type == "pass") return Pass{color()};
    if (type == "resign") return Resign{color()};
    throw Error(ErrorCode::ParseError, "unknown move type '" + type + "'");
}

} // namespace qboard
