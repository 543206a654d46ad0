// Error hierarchy for the toolkit. Every named failure mode gets its own
// type so callers and the CLI can map them to diagnostics and exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace legtk {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// validation-class failures (CLI exit code 2)
struct ValidationError : Error { using Error::Error; };

struct DisjointnessViolation : ValidationError { using ValidationError::ValidationError; };
struct TangencyViolation : ValidationError { using ValidationError::ValidationError; };
struct DanglingAttachment : ValidationError { using ValidationError::ValidationError; };
struct UnderSampled : ValidationError { using ValidationError::ValidationError; };
struct EpsilonTooLarge : ValidationError { using ValidationError::ValidationError; };
struct DisconnectedSet : ValidationError { using ValidationError::ValidationError; };
struct ResolutionTooCoarse : ValidationError { using ValidationError::ValidationError; };
struct NotContact : ValidationError { using ValidationError::ValidationError; };
struct NotLegendrianAxis : ValidationError { using ValidationError::ValidationError; };
struct NotLegendrianInput : ValidationError { using ValidationError::ValidationError; };
struct MissingTangents : ValidationError { using ValidationError::ValidationError; };
struct MissingAnchor : ValidationError { using ValidationError::ValidationError; };
struct CommonZero : ValidationError { using ValidationError::ValidationError; };
struct RankDrop : ValidationError { using ValidationError::ValidationError; };

// construction / numerical failures
struct RoutingFailure : Error { using Error::Error; };
struct HolonomyMismatch : Error { using Error::Error; };
struct ApproximationFailure : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };
struct SingularPeriodMatrix : Error { using Error::Error; };
struct PoleOnPath : Error { using Error::Error; };
struct InsufficientSampling : Error { using Error::Error; };
struct NonHolomorphic : Error { using Error::Error; };

// integration failures
struct Escape : Error {
    double exit_param;
    Escape(const std::string& what, double s) : Error(what), exit_param(s) {}
};
struct StepUnderflow : Error { using Error::Error; };
struct CommutativityFailure : Error { using Error::Error; };

// solver failures (CLI exit codes 3 / 4)
struct CertificateFailed : Error { using Error::Error; };
struct NoConvergence : Error {
    double best_residual;
    NoConvergence(const std::string& what, double r) : Error(what), best_residual(r) {}
};

struct ToleranceBudgetExceeded : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace legtk
