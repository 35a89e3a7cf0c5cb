#include "nvgrid/error.hpp"

namespace nvgrid {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::Overlap: return "Overlap";
        case ErrorKind::Gap: return "Gap";
        case ErrorKind::NotTreeGenerated: return "NotTreeGenerated";
        case ErrorKind::DimMismatch: return "DimMismatch";
        case ErrorKind::CountMismatch: return "CountMismatch";
        case ErrorKind::NegativeIndex: return "NegativeIndex";
        case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
        case ErrorKind::DimUnsupported: return "DimUnsupported";
        case ErrorKind::NoRuleConfigured: return "NoRuleConfigured";
        case ErrorKind::RuleVerificationFailed: return "RuleVerificationFailed";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::ContractViolation: return "ContractViolation";
    }
    return "Error";
}

}  // namespace nvgrid
