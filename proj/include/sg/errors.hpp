#pragma once
// Error taxonomy for the sinh-Gordon spectral library.
//
// Every failure mode surfaces as a subclass of sg::Error with a descriptive
// message; the CLI maps the classes onto process exit codes (validation -> 1,
// numerical -> 2, I/O -> 3).

#include <stdexcept>
#include <string>

namespace sg {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside the mathematical domain of an operation (theta out of range,
// zero root passed to a product, evaluation at a pole of a closed form, ...).
struct DomainError : Error { using Error::Error; };

// Structural validation of user-supplied configuration failed (sizes,
// centering constraints, |t^2| >= 1, malformed config files, ...).
struct ValidationError : Error { using Error::Error; };

// The request is valid but cannot be satisfied in working precision
// (nome too close to 1, asymptotic remainder below double resolution, ...).
struct PrecisionError : Error { using Error::Error; };

// An adaptive numerical process failed to reach its tolerance.
struct ConvergenceError : Error { using Error::Error; };

// An iteration exhausted its step budget (Newton, zero polishing, ...).
struct NonConvergenceError : ConvergenceError { using ConvergenceError::ConvergenceError; };

// An individual infinite-product factor vanished within tolerance, so its
// logarithm is unbounded at the requested point.
struct SingularityError : Error { using Error::Error; };

// Bethe roots collide under the q^2 lattice action, which degenerates the
// bootstrap linear systems.
struct ResonanceError : Error { using Error::Error; };

// Dense linear solve hit a pivot below threshold; message carries a crude
// condition estimate.
struct SingularSystemError : Error { using Error::Error; };

// Zero counting in the fundamental annulus disagreed with the expected N.
struct RootCountError : Error { using Error::Error; };

// Evaluation requested too close to a pole/zero of a quotient (Q functions
// near Wronskian zeros, kernel poles, ...).
struct NearPoleError : Error { using Error::Error; };

// A limit that must be a simple-zero ratio was not simple.
struct DegenerateRootError : Error { using Error::Error; };

// Two branch-sensitive evaluation routes disagreed beyond tolerance,
// indicating a wrong +/- pairing or a branch mismatch.
struct BranchError : Error { using Error::Error; };

// Closed-form evaluation exactly at a pole.
struct PoleError : DomainError { using DomainError::DomainError; };

// Filesystem / stream failure while reading configs or writing reports.
struct IoError : Error { using Error::Error; };

} // namespace sg
