#pragma once

#include <stdexcept>

namespace quasih {

/// A numerical procedure could not produce its result (no bracketing sign
/// change, non-convergence). Bad inputs raise std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace quasih
