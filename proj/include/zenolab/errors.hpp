#pragma once

#include <stdexcept>
#include <string>

namespace zenolab {

/// Invalid input: bad dimensions, non-finite values, out-of-range probabilities.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A branch whose probability is too small to renormalize.
class DegenerateBranchError : public std::runtime_error {
 public:
  DegenerateBranchError(const std::string& what, double click_prob = 0.0)
      : std::runtime_error(what), click_prob_(click_prob) {}

  double click_prob() const noexcept { return click_prob_; }

 private:
  double click_prob_;
};

/// Non-finite or otherwise unusable numerical result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zenolab
