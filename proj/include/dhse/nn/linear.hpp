#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dhse/matrix.hpp"
#include "dhse/nn/param.hpp"
#include "dhse/rng.hpp"

namespace dhse {

// y = x W + b with W stored (in x out). Weights start uniform in
// [-1/sqrt(in), 1/sqrt(in)], biases at zero.
struct LinearLayer {
  Matrix weight;
  std::vector<double> bias;
  Matrix weight_grad;
  std::vector<double> bias_grad;

  LinearLayer() = default;

  LinearLayer(std::size_t in, std::size_t out, Rng& rng)
      : weight(in, out), bias(out, 0.0), weight_grad(in, out), bias_grad(out, 0.0) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    for (double& w : weight.data()) w = rng.uniform(-bound, bound);
  }

  std::size_t in_width() const { return weight.rows(); }
  std::size_t out_width() const { return weight.cols(); }

  Matrix forward(const Matrix& x) const {
    Matrix y = matmul(x, weight);
    for (std::size_t i = 0; i < y.rows(); ++i) {
      double* row = y.row(i);
      for (std::size_t j = 0; j < y.cols(); ++j) row[j] += bias[j];
    }
    return y;
  }

  // Accumulates parameter gradients, returns the input gradient.
  Matrix backward(const Matrix& x, const Matrix& grad_y) {
    matmul_tn_accum(x, grad_y, weight_grad);
    for (std::size_t i = 0; i < grad_y.rows(); ++i) {
      const double* row = grad_y.row(i);
      for (std::size_t j = 0; j < grad_y.cols(); ++j) bias_grad[j] += row[j];
    }
    return matmul_nt(grad_y, weight);
  }

  void zero_grad() {
    weight_grad.fill(0.0);
    std::fill(bias_grad.begin(), bias_grad.end(), 0.0);
  }

  void collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back(param_ref(prefix + ".weight", weight, weight_grad));
    out.push_back(param_ref(prefix + ".bias", bias, bias_grad));
  }
};

}  // namespace dhse
