#pragma once

#include <stdexcept>
#include <string>

namespace capreq {

/// Error categories raised by the engine. Each maps to one of the
/// documented failure modes of the public operations.
enum class Errc {
    NonRefiningFiltration,
    ZeroProbabilityOutcome,
    FinalPartitionNotSingletons,
    SpaceMismatch,
    DimensionMismatch,
    NotADensity,
    InvalidExponent,
    EmptySet,
    EmptySpec,
    NotInHull,
    NoConvergence,
    NumericalBreakdown,
    NegativeDensity,
    StepPositivityViolated,
    NoWitness,
    Infeasible,
    ParseError,
    Unsupported,
};

const char* errc_name(Errc c);

struct Error : std::runtime_error {
    Errc code;
    Error(Errc c, const std::string& msg)
        : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code(c) {}
};

inline const char* errc_name(Errc c)
{
    switch (c) {
        case Errc::NonRefiningFiltration: return "NonRefiningFiltration";
        case Errc::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
        case Errc::FinalPartitionNotSingletons: return "FinalPartitionNotSingletons";
        case Errc::SpaceMismatch: return "SpaceMismatch";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::NotADensity: return "NotADensity";
        case Errc::InvalidExponent: return "InvalidExponent";
        case Errc::EmptySet: return "EmptySet";
        case Errc::EmptySpec: return "EmptySpec";
        case Errc::NotInHull: return "NotInHull";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::NumericalBreakdown: return "NumericalBreakdown";
        case Errc::NegativeDensity: return "NegativeDensity";
        case Errc::StepPositivityViolated: return "StepPositivityViolated";
        case Errc::NoWitness: return "NoWitness";
        case Errc::Infeasible: return "Infeasible";
        case Errc::ParseError: return "ParseError";
        case Errc::Unsupported: return "Unsupported";
    }
    return "Error";
}

} // namespace capreq
