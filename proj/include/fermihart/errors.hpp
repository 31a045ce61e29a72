#pragma once

#include <stdexcept>
#include <string>

namespace fermihart {

enum class ErrorCode {
    EvenGridSize,
    NonPositiveLength,
    InvalidGrid,
    LengthMismatch,
    ZeroCharges,
    TooManyCharges,
    OnBranchCut,
    InvalidInterval,
    OddPoleCount,
    SolverDiverged,
    Breakdown,
    TooLargeForDense,
    StepTooLarge,
    NoSamplesYet,
    NotConverged,
    DegenerateFilling,
    InvalidArgument,
    ConfigError,
    IoError,
};

const char* to_string(ErrorCode code);

/// Base exception for every recoverable failure in the library.
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what)
        , code_(code)
    {
    }

    ErrorCode code() const noexcept
    {
        return code_;
    }

  private:
    ErrorCode code_;
};

/// A shifted solve failed; carries the worst relative residual reached.
class SolverError : public Error
{
  public:
    SolverError(ErrorCode code, const std::string& what, double worst_residual)
        : Error(code, what)
        , worst_residual_(worst_residual)
    {
    }

    double worst_residual() const noexcept
    {
        return worst_residual_;
    }

  private:
    double worst_residual_;
};

} // namespace fermihart
