#pragma once

#include <stdexcept>
#include <string>

namespace qrdmft {

/// A solver failed to produce a usable result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The target density matrix cannot be reproduced (occupations outside
/// [0,1] or a constraint residual floor above tolerance).
class RepresentabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrdmft
