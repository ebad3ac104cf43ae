#pragma once

#include <stdexcept>
#include <string>

namespace aggflow {

// Argument outside the mathematical domain of the requested evaluation
// (e.g. logarithmic potential derivatives at |s| >= 1).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two fields with incompatible grids were combined.
struct ShapeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A coefficient that must be strictly positive is not.
struct NonPositiveCoefficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config file is not parseable JSON.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config parsed but semantically invalid (unknown key, bad value, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NewtonDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Newton damping could not keep the phase field strictly inside (-1,1).
struct StepNotAdmissible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LinearSolveFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OuterNoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A run aborted after exhausting its step-size retries.
struct AbortedAfterRetries : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace aggflow
