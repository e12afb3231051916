#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qboard {

// Machine-readable codes shared by exceptions, move rejections and the
// service payloads. The string forms are part of the wire format.
enum class ErrorCode {
    InvalidMoveGeometry,
    BadPoint,
    OracleTooLarge,
    TermExplosion,
    Occupied,
    WrongTurn,
    BadControl,
    Forbidden,
    KoViolation,
    GameWiseNotAllowed,
    P2Violation,
    JLimitExceeded,
    MatchFinished,
    CaptureApproachInapplicable,
    BadBranchRef,
    ReplayMismatch,
    ParseError,
    InvalidConfig,
    NotFound,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidMoveGeometry: return "InvalidMoveGeometry";
    case ErrorCode::BadPoint: return "BadPoint";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::TermExplosion: return "TermExplosion";
    case ErrorCode::Occupied: return "Occupied";
    case ErrorCode::WrongTurn: return "WrongTurn";
    case ErrorCode::BadControl: return "BadControl";
    case ErrorCode::Forbidden: return "Forbidden";
    case ErrorCode::KoViolation: return "KoViolation";
    case ErrorCode::GameWiseNotAllowed: return "GameWiseNotAllowed";
    case ErrorCode::P2Violation: return "P2Violation";
    case ErrorCode::JLimitExceeded: return "JLimitExceeded";
    case ErrorCode::MatchFinished: return "MatchFinished";
    case ErrorCode::CaptureApproachInapplicable: return "CaptureApproachInapplicable";
    case ErrorCode::BadBranchRef: return "BadBranchRef";
    case ErrorCode::ReplayMismatch: return "ReplayMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NotFound: return "NotFound";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// A refused move. Rejections are values, not exceptions: the engine
// pipeline reports them to callers and leaves the match untouched.
struct Rejection {
    ErrorCode code;
    std::string detail;
};

} // namespace qboard
