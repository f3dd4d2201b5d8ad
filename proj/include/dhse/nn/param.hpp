#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dhse/matrix.hpp"

namespace dhse {

// Named view into one learnable tensor and its gradient buffer. Collected in
// a fixed order for the optimizer, checkpointing, and finite differences.
struct ParamRef {
  std::string name;
  std::span<double> value;
  std::span<double> grad;
  std::vector<std::size_t> dims;
};

inline ParamRef param_ref(std::string name, Matrix& value, Matrix& grad) {
  return {std::move(name),
          {value.data().data(), value.data().size()},
          {grad.data().data(), grad.data().size()},
          {value.rows(), value.cols()}};
}

inline ParamRef param_ref(std::string name, std::vector<double>& value,
                          std::vector<double>& grad) {
  return {std::move(name), {value.data(), value.size()}, {grad.data(), grad.size()},
          {value.size()}};
}

}  // namespace dhse
