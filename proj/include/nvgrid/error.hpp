#pragma once

#include <stdexcept>
#include <string>

namespace nvgrid {

enum class ErrorKind {
    Parse,
    Overlap,
    Gap,
    NotTreeGenerated,
    DimMismatch,
    CountMismatch,
    NegativeIndex,
    UnsupportedFamily,
    DimUnsupported,
    NoRuleConfigured,
    RuleVerificationFailed,
    CapExceeded,
    ContractViolation,
};

const char* to_string(ErrorKind kind);

// Every library failure is reported through this one exception type; the
// kind decides the CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace nvgrid
