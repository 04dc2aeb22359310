#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pflin {

// Base of every error this library throws. code() is a stable machine-readable
// identifier; the CLI maps it onto exit codes and stderr JSON.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

// Input-side failures (exit code 1).

class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error("parse_error", what) {}
};

class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error("validation_error", join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "case validation failed:";
    for (const auto& item : v) s += "\n  " + item;
    return s;
  }
  std::vector<std::string> violations_;
};

class InvalidBranch : public Error {
public:
  explicit InvalidBranch(const std::string& what) : Error("invalid_branch", what) {}
};

class UnsupportedPhaseShift : public Error {
public:
  explicit UnsupportedPhaseShift(const std::string& what)
      : Error("unsupported_phase_shift", what) {}
};

class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

class TopologyMismatch : public Error {
public:
  explicit TopologyMismatch(const std::string& what) : Error("topology_mismatch", what) {}
};

class EmptyFilter : public Error {
public:
  explicit EmptyFilter(const std::string& what) : Error("empty_filter", what) {}
};

class UndefinedImprovement : public Error {
public:
  explicit UndefinedImprovement(const std::string& what) : Error("undefined_improvement", what) {}
};

class NotApplicable : public Error {
public:
  explicit NotApplicable(const std::string& what) : Error("not_applicable", what) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error("io_error", what) {}
};

class RankDeficient : public Error {
public:
  RankDeficient(std::string column, const std::string& what)
      : Error("rank_deficient", what), column_(std::move(column)) {}
  const std::string& column() const { return column_; }

private:
  std::string column_;
};

// Numerical failures (exit code 2).

class Divergence : public Error {
public:
  Divergence(int iterations, double last_mismatch)
      : Error("divergence", "power flow diverged after " + std::to_string(iterations) +
                                " iterations, mismatch " + std::to_string(last_mismatch)),
        iterations_(iterations), last_mismatch_(last_mismatch) {}
  int iterations() const { return iterations_; }
  double last_mismatch() const { return last_mismatch_; }

private:
  int iterations_;
  double last_mismatch_;
};

class SingularJacobian : public Error {
public:
  explicit SingularJacobian(int iteration)
      : Error("singular_jacobian",
              "Jacobian factorization failed at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

private:
  int iteration_;
};

class SingularSystem : public Error {
public:
  explicit SingularSystem(const std::string& what) : Error("singular_system", what) {}
};

class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error("numerical_error", what) {}
};

}  // namespace pflin
