#pragma once

#include <stdexcept>
#include <string>

namespace langvar {

// All recoverable failures surface as one of these; the CLI maps any
// LangvarError to a diagnostic on stderr and a nonzero exit code.

struct LangvarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed perturbation spec, unknown smoothing name,
// vocab size too small, inconsistent CLI flags.
struct ConfigError : LangvarError {
  using LangvarError::LangvarError;
};

// Structural problems in data files: line-count mismatch between aligned
// sources, malformed TSV, bad tree syntax, truncated model file.
struct FormatError : LangvarError {
  using LangvarError::LangvarError;
};

// A requested operation that is well-formed but impossible: recovering a
// nondeterministic shuffle, perplexity of an empty evaluation set.
struct OperationError : LangvarError {
  using LangvarError::LangvarError;
};

}  // namespace langvar
