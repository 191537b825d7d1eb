#pragma once

#include <stdexcept>
#include <string>

namespace fkdv {

// Base class for all numerical failures raised by this library. Configuration
// mistakes (bad grid sizes, out-of-range parameters) use std::invalid_argument
// instead, so callers can map the two onto distinct exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature exhausted its subdivision budget before reaching the
// requested tolerance.
struct NonConvergedQuadrature : Error {
    using Error::Error;
};

// Kernel evaluation requested at a point where the kernel is infinite
// (x = 0 with s <= 1).
struct SingularEvaluation : Error {
    using Error::Error;
};

// The requested evaluation method cannot reach the tolerance within its
// budget (e.g. the spectral series for small s at points near the
// singularity).
struct MethodUnavailable : Error {
    using Error::Error;
};

// Damped Newton failed to converge.
struct NewtonDiverged : Error {
    using Error::Error;
};

// The wave-height constraint cannot be met (lambda outside (0,1), or no
// admissible solution).
struct ConstraintInfeasible : Error {
    using Error::Error;
};

// Branch continuation could not advance: the adaptive step fell below the
// minimum spacing.
struct BranchStalled : Error {
    using Error::Error;
};

// Period escalation: window differences failed to decrease below tolerance
// across the schedule.
struct NoConvergenceInP : Error {
    using Error::Error;
};

// Long-wave limit not reached: the trough has not settled onto the
// background state, so the shifted wave is not meaningful.
struct TailNotSettled : Error {
    using Error::Error;
};

// Decay-rate machinery requires a supercritical speed mu > 1.
struct InvalidSpeed : Error {
    using Error::Error;
};

// A fit window contains too few usable points.
struct InsufficientResolution : Error {
    using Error::Error;
};

}  // namespace fkdv
