#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fractal {

// Failure class drives the CLI exit code.
enum class ErrorKind {
  kValidation,      // exit 1: input violates a contract (metric axioms, moduli, ...)
  kNonConvergence,  // exit 2: an iteration hit its cap
  kMalformed,       // exit 3: unparseable or structurally broken input
};

// All library errors carry a structured name like "TriangleViolation(0,2,1)"
// followed by a human-readable detail line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string name, const std::string& detail)
      : std::runtime_error(detail.empty() ? name : name + ": " + detail),
        kind_(kind),
        name_(std::move(name)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  ErrorKind kind_;
  std::string name_;
};

inline Error validation_error(std::string name, const std::string& detail = "") {
  return Error(ErrorKind::kValidation, std::move(name), detail);
}

inline Error malformed_error(std::string name, const std::string& detail = "") {
  return Error(ErrorKind::kMalformed, std::move(name), detail);
}

// Iteration cap failures keep the distance history (as doubles, for reports).
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(std::size_t max_iter, std::vector<double> history)
      : Error(ErrorKind::kNonConvergence, "NonConvergence(" + std::to_string(max_iter) + ")",
              "no fixed set within " + std::to_string(max_iter) + " iterations"),
        history_(std::move(history)) {}

  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace fractal
