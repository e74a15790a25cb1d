#pragma once

#include <stdexcept>
#include <string>

namespace optokerr {

// Error taxonomy. exit_class() maps onto the CLI exit-code contract:
// 2 = configuration error, 3 = physics error, 4 = numerical non-convergence.
enum class ErrorKind {
    NonPositiveRate,
    NegativeValue,
    InconsistentUnits,
    UnknownKey,
    ZeroVolume,
    InvalidConfig,

    NoPhysicalRoot,
    NoStableBranch,
    SingularSystem,
    UnstableBlowup,

    EigenFailure,
    GridTooCoarse,
    QuadratureNotConverged,
    StepTooLarge,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonPositiveRate: return "NonPositiveRate";
        case ErrorKind::NegativeValue: return "NegativeValue";
        case ErrorKind::InconsistentUnits: return "InconsistentUnits";
        case ErrorKind::UnknownKey: return "UnknownKey";
        case ErrorKind::ZeroVolume: return "ZeroVolume";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::NoPhysicalRoot: return "NoPhysicalRoot";
        case ErrorKind::NoStableBranch: return "NoStableBranch";
        case ErrorKind::SingularSystem: return "SingularSystem";
        case ErrorKind::UnstableBlowup: return "UnstableBlowup";
        case ErrorKind::EigenFailure: return "EigenFailure";
        case ErrorKind::GridTooCoarse: return "GridTooCoarse";
        case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
        case ErrorKind::StepTooLarge: return "StepTooLarge";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    int exit_class() const noexcept {
        switch (kind_) {
            case ErrorKind::NonPositiveRate:
            case ErrorKind::NegativeValue:
            case ErrorKind::InconsistentUnits:
            case ErrorKind::UnknownKey:
            case ErrorKind::ZeroVolume:
            case ErrorKind::InvalidConfig:
                return 2;
            case ErrorKind::NoPhysicalRoot:
            case ErrorKind::NoStableBranch:
            case ErrorKind::SingularSystem:
            case ErrorKind::UnstableBlowup:
                return 3;
            default:
                return 4;
        }
    }

private:
    ErrorKind kind_;
};

// Thrown by effective_temperature when the omega_max doubling test fails;
// carries the two bracketing values.
class QuadratureNotConvergedError : public Error {
public:
    QuadratureNotConvergedError(double t_prev, double t_last, double omega_max,
                                const std::string& msg)
        : Error(ErrorKind::QuadratureNotConverged, msg),
          t_eff_prev(t_prev), t_eff_last(t_last), omega_max(omega_max) {}

    double t_eff_prev;
    double t_eff_last;
    double omega_max;
};

}  // namespace optokerr
