#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace localscore {

// Malformed arguments, out-of-range indices, shape mismatches.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Request is well-formed but not supported for this configuration
// (e.g. enumeration of a space that is too large).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical invariant that must hold by construction was violated.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised by the optimizer when a per-sample score is not finite.
class NonFiniteObjectiveError : public std::runtime_error {
 public:
  NonFiniteObjectiveError(std::size_t sample_index, std::vector<double> parameters,
                          const std::string& detail)
      : std::runtime_error("non-finite objective at sample " + std::to_string(sample_index) +
                           ": " + detail),
        sample_index_(sample_index),
        parameters_(std::move(parameters)) {}

  std::size_t sample_index() const noexcept { return sample_index_; }
  const std::vector<double>& parameters() const noexcept { return parameters_; }

 private:
  std::size_t sample_index_;
  std::vector<double> parameters_;
};

}  // namespace localscore
