#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace streamnav {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Field evaluated within the guard radius of an obstacle center.
class SingularityEvaluation : public Error {
 public:
  using Error::Error;
};

/// Sampling domain has no points outside the planned-exclusion disks.
class EmptyDomain : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

/// Carries the id of the agent that violates the planned exclusion radius.
class AgentInsideExclusion : public Error {
 public:
  AgentInsideExclusion(int agent_id, const std::string& what)
      : Error(what), agent_id_(agent_id) {}
  int agent_id() const noexcept { return agent_id_; }

 private:
  int agent_id_;
};

/// Solver failure annotated with the index of the agent whose target failed.
class AgentSolveError : public Error {
 public:
  AgentSolveError(std::size_t index, const std::string& what)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A safety theorem was asked about a configuration outside its scope.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

/// Malformed config document (syntax, unknown keys, wrong types).
class ConfigParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace streamnav
