#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dhse/error.hpp"
#include "dhse/matrix.hpp"
#include "dhse/nn/param.hpp"

namespace dhse {

struct LayerNormCache {
  Matrix normalized;            // (x - mean) / sqrt(var + eps), per row
  std::vector<double> inv_std;  // per row
};

// Per-row layer normalization over the hidden dimension with a learnable
// affine: gain * (x - mean) / sqrt(var + eps) + bias.
struct LayerNorm {
  std::vector<double> gain;
  std::vector<double> bias;
  double epsilon = 1e-5;
  std::vector<double> gain_grad;
  std::vector<double> bias_grad;

  LayerNorm() = default;

  explicit LayerNorm(std::size_t width, double eps = 1e-5)
      : gain(width, 1.0), bias(width, 0.0), epsilon(eps), gain_grad(width, 0.0),
        bias_grad(width, 0.0) {
    if (eps <= 0.0) throw ValidationError("layer norm epsilon must be positive");
  }

  std::size_t width() const { return gain.size(); }

  Matrix forward(const Matrix& x, LayerNormCache& cache) const {
    const std::size_t d = width();
    Matrix y(x.rows(), d);
    cache.normalized = Matrix(x.rows(), d);
    cache.inv_std.assign(x.rows(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double* xi = x.row(i);
      double mean = 0.0;
      for (std::size_t j = 0; j < d; ++j) mean += xi[j];
      mean /= static_cast<double>(d);
      double var = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double dev = xi[j] - mean;
        var += dev * dev;
      }
      var /= static_cast<double>(d);
      const double inv_std = 1.0 / std::sqrt(var + epsilon);
      cache.inv_std[i] = inv_std;
      double* ni = cache.normalized.row(i);
      double* yi = y.row(i);
      for (std::size_t j = 0; j < d; ++j) {
        ni[j] = (xi[j] - mean) * inv_std;
        yi[j] = gain[j] * ni[j] + bias[j];
      }
    }
    return y;
  }

  Matrix backward(const Matrix& grad_y, const LayerNormCache& cache) {
    const std::size_t d = width();
    Matrix grad_x(grad_y.rows(), d);
    for (std::size_t i = 0; i < grad_y.rows(); ++i) {
      const double* gy = grad_y.row(i);
      const double* ni = cache.normalized.row(i);
      double sum_gn = 0.0, sum_gnn = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        gain_grad[j] += gy[j] * ni[j];
        bias_grad[j] += gy[j];
        const double gnorm = gy[j] * gain[j];
        sum_gn += gnorm;
        sum_gnn += gnorm * ni[j];
      }
      const double mean_gn = sum_gn / static_cast<double>(d);
      const double mean_gnn = sum_gnn / static_cast<double>(d);
      double* gx = grad_x.row(i);
      for (std::size_t j = 0; j < d; ++j) {
        const double gnorm = gy[j] * gain[j];
        gx[j] = cache.inv_std[i] * (gnorm - mean_gn - ni[j] * mean_gnn);
      }
    }
    return grad_x;
  }

  void zero_grad() {
    std::fill(gain_grad.begin(), gain_grad.end(), 0.0);
    std::fill(bias_grad.begin(), bias_grad.end(), 0.0);
  }

  void collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back(param_ref(prefix + ".gain", gain, gain_grad));
    out.push_back(param_ref(prefix + ".bias", bias, bias_grad));
  }
};

// Single-row convenience used by tests and docs examples.
inline std::vector<double> layer_norm(std::span<const double> x, const LayerNorm& p) {
  if (x.size() != p.width()) throw ValidationError("layer norm width mismatch");
  Matrix m(1, x.size());
  for (std::size_t j = 0; j < x.size(); ++j) m(0, j) = x[j];
  LayerNormCache cache;
  const Matrix y = p.forward(m, cache);
  return {y.row(0), y.row(0) + y.cols()};
}

}  // namespace dhse
