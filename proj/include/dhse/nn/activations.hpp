#pragma once

#include <cmath>
#include <string>

#include "dhse/error.hpp"

namespace dhse {

enum class Activation { elu, relu };

inline double activate(Activation a, double x) {
  switch (a) {
    case Activation::elu:
      return x > 0.0 ? x : std::expm1(x);
    case Activation::relu:
      return x > 0.0 ? x : 0.0;
  }
  return x;
}

// Derivative from the pre-activation value.
inline double activate_grad(Activation a, double x) {
  switch (a) {
    case Activation::elu:
      return x > 0.0 ? 1.0 : std::exp(x);
    case Activation::relu:
      return x > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

inline double leaky_relu(double x, double slope) { return x > 0.0 ? x : slope * x; }
inline double leaky_relu_grad(double x, double slope) { return x > 0.0 ? 1.0 : slope; }

inline std::string activation_name(Activation a) {
  return a == Activation::elu ? "elu" : "relu";
}

inline Activation parse_activation(const std::string& name) {
  if (name == "elu") return Activation::elu;
  if (name == "relu") return Activation::relu;
  throw ValidationError("unknown activation: " + name);
}

}  // namespace dhse
