#pragma once

#include <stdexcept>
#include <string>

namespace adaptsplit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (e.g. negative time).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Cut positions that are out of range, duplicated or not increasing.
class InvalidBoundary : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  using Error::Error;
};

class NoLink : public Error {
 public:
  using Error::Error;
};

class NoFeasiblePlacement : public Error {
 public:
  using Error::Error;
};

/// The greedy heuristic ran out of feasible nodes part-way through a scheme,
/// even though an exhaustive search may still succeed.
class GreedyDeadEnd : public NoFeasiblePlacement {
 public:
  using NoFeasiblePlacement::NoFeasiblePlacement;
};

/// Scenario document problems. The message starts with the JSON field path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& reason)
      : Error(path + ": " + reason), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace adaptsplit
