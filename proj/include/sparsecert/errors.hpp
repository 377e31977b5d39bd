#pragma once

#include <stdexcept>
#include <string>

namespace sparsecert {

/// Raised when a combinatorial enumeration would exceed its configured cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A theorem hypothesis does not hold for the supplied inputs.
class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The noise level lies at or above the certified threshold, so the
/// recovery inequalities make no claim.
class ThresholdError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input file or value.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparsecert
