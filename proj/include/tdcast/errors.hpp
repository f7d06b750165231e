#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tdcast {

// Base class for all tdcast errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based; 0 means unknown.
struct ParseError : Error {
  explicit ParseError(const std::string& message, std::size_t line_number = 0)
      : Error(line_number ? "line " + std::to_string(line_number) + ": " + message : message),
        line(line_number) {}
  std::size_t line = 0;
};

// Input that parses but violates a dataset or configuration contract.
struct ValidationError : Error {
  using Error::Error;
};

// Mismatched vector or matrix dimensions.
struct ShapeError : Error {
  using Error::Error;
};

// Raised by the training guard when a weight leaves the finite, bounded range.
struct DivergenceError : Error {
  DivergenceError(int at_epoch, std::uint64_t at_update, double last_step_size)
      : Error("training diverged at epoch " + std::to_string(at_epoch) + ", update " +
              std::to_string(at_update) + " (step size " + std::to_string(last_step_size) + ")"),
        epoch(at_epoch),
        update(at_update),
        step_size(last_step_size) {}
  int epoch = 0;
  std::uint64_t update = 0;
  double step_size = 0.0;
};

}  // namespace tdcast
