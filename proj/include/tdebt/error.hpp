#pragma once

#include <stdexcept>
#include <string>

namespace tdebt {

enum class ErrorKind {
  Schema,          // malformed header / unknown metric key
  Row,             // unparseable cell, reported with its line number
  Validation,      // value violates a domain invariant
  Precondition,    // caller broke an operation's contract
  Config,          // bad hyperparameter or option
  Shape,           // matrix dimensions disagree
  Fold,            // infeasible fold plan
  Guard,           // exhaustive-search cost guard tripped
  Policy,          // distribution reduction not applicable
  UndefinedScore,  // score has no defined value (zero variance)
  Transport,       // network failure
  Auth,            // HTTP 401/403
  NotFound,        // unknown project on the server
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tdebt
