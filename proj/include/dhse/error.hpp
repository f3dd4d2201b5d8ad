#pragma once

#include <stdexcept>

namespace dhse {

// Input content that fails validation: bad ids, malformed lines, shape
// mismatches, out-of-range hyperparameters.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem or stream failure (missing file, short read, failed write).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Training aborted on a non-finite loss.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dhse
