#pragma once

#include <stdexcept>
#include <string>

namespace graphheat {

/// Malformed input: bad dimensions, invalid indices, out-of-range parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-convergence, divergence, or a mathematically
/// degenerate configuration detected at run time.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation needs a connected graph.
class DisconnectedGraphError : public NumericalError {
 public:
  explicit DisconnectedGraphError(std::size_t components)
      : NumericalError("graph is disconnected: " + std::to_string(components) +
                       " connected components"),
        components_(components) {}

  std::size_t components() const noexcept { return components_; }

 private:
  std::size_t components_;
};

}  // namespace graphheat
