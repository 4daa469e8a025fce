#pragma once

#include <stdexcept>
#include <string>

namespace tcheb {

// Machine-readable failure categories. The CLI maps them to exit statuses.
enum class ErrorCode {
  Domain,
  Evaluation,
  Infeasible,
  Convergence,
  Singularity,
  Configuration,
  Precondition,
  Degeneracy,
  Internal,
  Io,
  Schema,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double x) : Error(ErrorCode::Evaluation, what), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double residual)
      : Error(ErrorCode::Infeasible, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(ErrorCode::Convergence, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what) : Error(ErrorCode::Singularity, what) {}
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what) : Error(ErrorCode::Configuration, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorCode::Precondition, what) {}
};

class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(const std::string& what) : Error(ErrorCode::Degeneracy, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorCode::Internal, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(ErrorCode::Schema, what) {}
};

}  // namespace tcheb
