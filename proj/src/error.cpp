#include "yieldcast/error.hpp"

namespace yieldcast {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::DuplicateSample: return "DuplicateSample";
    case ErrorCode::UnknownUnit: return "UnknownUnit";
    case ErrorCode::CoverageGap: return "CoverageGap";
    case ErrorCode::TooFewYears: return "TooFewYears";
    case ErrorCode::NoSeasonality: return "NoSeasonality";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateSeason: return "DegenerateSeason";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::SingularFit: return "SingularFit";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::DegeneratePredictor: return "DegeneratePredictor";
    case ErrorCode::AllGridPointsFailed: return "AllGridPointsFailed";
    case ErrorCode::DegenerateFold: return "DegenerateFold";
    case ErrorCode::MissingWeight: return "MissingWeight";
    case ErrorCode::MisalignedFolds: return "MisalignedFolds";
    case ErrorCode::UnpairedConfigs: return "UnpairedConfigs";
    case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::InputMissing: return "InputMissing";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::LeakageDetected: return "LeakageDetected";
    }
    return "Unknown";
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedRow:
    case ErrorCode::DuplicateSample:
    case ErrorCode::UnknownUnit:
    case ErrorCode::CoverageGap:
    case ErrorCode::TooFewYears:
    case ErrorCode::MissingWeight:
    case ErrorCode::InputMissing:
        return 2;
    case ErrorCode::InvalidConfig:
    case ErrorCode::InfeasibleSpec:
        return 4;
    default:
        return 3;
    }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace yieldcast
