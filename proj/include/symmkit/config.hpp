#pragma once

#include <stdexcept>
#include <string>

namespace symmkit {

/// Numerical thresholds shared by every module. Experiments that need a
/// tighter or looser regime copy the defaults and adjust fields.
struct Tolerances {
    double unit_norm = 1e-12;            // |‖u‖ - 1| for unit directions
    double orthonormal_drift = 1e-12;    // re-orthonormalize subspace bases beyond this
    double rotation_orthogonality = 1e-10;
    double predicate = 1e-12;            // geometric predicates, relative to scale
    double metric = 1e-9;                // metric assertions
    double collinear_area = 1e-14;       // merge threshold, relative to diam^2
    double grid_alignment = 1e-12;       // angle snap for exact grid paths
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

/// Malformed or inconsistent input (dimension mismatch, bad parameters).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operator was asked to act on a representation that cannot host it.
class IncompatibleError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A size cap was exceeded (point clouds, pair enumeration).
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File content could not be parsed or violates the format's invariants.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace symmkit
