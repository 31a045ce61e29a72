#include "fermihart/errors.hpp"

namespace fermihart {

const char* to_string(ErrorCode code)
{
    switch (code) {
        case ErrorCode::EvenGridSize: return "EvenGridSize";
        case ErrorCode::NonPositiveLength: return "NonPositiveLength";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ZeroCharges: return "ZeroCharges";
        case ErrorCode::TooManyCharges: return "TooManyCharges";
        case ErrorCode::OnBranchCut: return "OnBranchCut";
        case ErrorCode::InvalidInterval: return "InvalidInterval";
        case ErrorCode::OddPoleCount: return "OddPoleCount";
        case ErrorCode::SolverDiverged: return "SolverDiverged";
        case ErrorCode::Breakdown: return "Breakdown";
        case ErrorCode::TooLargeForDense: return "TooLargeForDense";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::NoSamplesYet: return "NoSamplesYet";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::DegenerateFilling: return "DegenerateFilling";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace fermihart
