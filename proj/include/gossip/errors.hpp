#pragma once

#include <stdexcept>
#include <string>

namespace gossip {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad arguments to a graph builder (node count too small, self-loop, ...).
class InvalidTopologyError : public Error {
public:
  using Error::Error;
};

// A random geometric graph stayed disconnected after the retry budget.
class UnconnectedGraphError : public Error {
public:
  UnconnectedGraphError(const std::string& what, int attempts)
      : Error(what), attempts_(attempts) {}
  int attempts() const noexcept { return attempts_; }

private:
  int attempts_ = 0;
};

// A graph that must be connected is not.
class DisconnectedGraphError : public Error {
public:
  using Error::Error;
};

// Precondition violation: length mismatch, out-of-range index, bad scalar.
class InvalidArgumentError : public Error {
public:
  using Error::Error;
};

// Experiment configuration failed validation.
class ConfigError : public Error {
public:
  using Error::Error;
};

// File could not be read, written or parsed.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace gossip
