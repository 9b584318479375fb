#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace yieldcast {

enum class ErrorCode {
    MalformedRow,
    DuplicateSample,
    UnknownUnit,
    CoverageGap,
    TooFewYears,
    NoSeasonality,
    NonConvergence,
    DegenerateSeason,
    DegenerateColumn,
    SingularFit,
    SchemaMismatch,
    DegeneratePredictor,
    AllGridPointsFailed,
    DegenerateFold,
    MissingWeight,
    MisalignedFolds,
    UnpairedConfigs,
    InfeasibleSpec,
    InputMissing,
    InvalidConfig,
    LeakageDetected,
};

std::string_view to_string(ErrorCode code);

// Exit-code family for the command-line contract: 2 input, 3 computation, 4 config.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace yieldcast
