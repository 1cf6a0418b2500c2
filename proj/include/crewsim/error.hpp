#pragma once

#include <stdexcept>
#include <string>

namespace crewsim {

enum class ErrorCode {
    ScenarioInvalid,
    UnknownRecipient,
    UnknownEntity,
    NonMonotoneStep,
    LogCorrupt,
    DriftDetected,
    Io,
    Config,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::ScenarioInvalid: return "ScenarioInvalid";
        case ErrorCode::UnknownRecipient: return "UnknownRecipient";
        case ErrorCode::UnknownEntity: return "UnknownEntity";
        case ErrorCode::NonMonotoneStep: return "NonMonotoneStep";
        case ErrorCode::LogCorrupt: return "LogCorrupt";
        case ErrorCode::DriftDetected: return "DriftDetected";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

/// Library error. `step()` is >= 0 for errors tied to an episode step
/// (currently only DriftDetected).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, int step = -1)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code),
          step_(step) {}

    ErrorCode code() const { return code_; }
    int step() const { return step_; }

private:
    ErrorCode code_;
    int step_;
};

}  // namespace crewsim
