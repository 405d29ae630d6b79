#pragma once

#include <stdexcept>
#include <string>

namespace glv {

/// Raised when an analysis is asked to run on input it cannot interpret,
/// e.g. an unconverged profile or a fit window with too few points.
class RefusedInput : public std::domain_error {
 public:
  explicit RefusedInput(const std::string& what) : std::domain_error(what) {}
};

}  // namespace glv
