#ifndef MAVDESIGN_ERRORS_HPP
#define MAVDESIGN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mavdesign {

/// Malformed user input: scenario files, design files, CLI arguments,
/// objects violating their declared invariants.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Evaluation outside the admissible domain (x outside the design space,
/// inadmissible parameters such as vartheta2 <= 0).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A candidate information matrix is singular (condition number beyond the
/// guard) at the requested design, so the asymptotic quantities do not exist.
class SingularInfoError : public std::runtime_error {
 public:
  explicit SingularInfoError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure that is not a singular information matrix: degenerate
/// target (flat effect curve), missing root bracket, exhausted solver.
class NumericsError : public std::runtime_error {
 public:
  explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mavdesign

#endif  // MAVDESIGN_ERRORS_HPP
