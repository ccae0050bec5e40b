#pragma once

#include <stdexcept>

namespace wgb {

/// A factorization or iteration failed numerically (loss of definiteness,
/// stagnation, ill-conditioned Gram matrix).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wgb
