// Numeric kernels: convolution, pooling, dense, softmax.

#include <algorithm>
#include <cmath>
#include <limits>

#include "ambiact/error.hpp"
#include "ambiact/nn.hpp"

namespace ambiact::nn {

namespace {

void check_conv(const Tensor& input, const Conv1dLayer& layer) {
  (void)output_shape(layer, Shape{input.channels, input.length});
}

// Output filter f over all output positions. Shared by both drivers so the
// summation order, and therefore the result, is identical.
void conv_filter(const Tensor& input, const Conv1dLayer& layer, std::size_t f, Tensor& out) {
  const std::size_t k = layer.kernel_size;
  const double* w_f = layer.weights.data() + f * layer.in_channels * k;
  for (std::size_t t = 0; t < out.length; ++t) {
    const std::size_t base = t * layer.stride;
    double acc = layer.bias[f];
    for (std::size_t c = 0; c < layer.in_channels; ++c) {
      const double* x = input.data.data() + c * input.length + base;
      const double* w = w_f + c * k;
      for (std::size_t j = 0; j < k; ++j) acc += w[j] * x[j];
    }
    out.at(f, t) = acc;
  }
}

}  // namespace

Tensor conv1d_forward(const Tensor& input, const Conv1dLayer& layer) {
  check_conv(input, layer);
  Tensor out(layer.filters, (input.length - layer.kernel_size) / layer.stride + 1);
  for (std::size_t f = 0; f < layer.filters; ++f) conv_filter(input, layer, f, out);
  return out;
}

Tensor conv1d_forward_parallel(const Tensor& input, const Conv1dLayer& layer) {
  check_conv(input, layer);
  Tensor out(layer.filters, (input.length - layer.kernel_size) / layer.stride + 1);
  const auto filters = static_cast<std::ptrdiff_t>(layer.filters);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < filters; ++f) {
    conv_filter(input, layer, static_cast<std::size_t>(f), out);
  }
  return out;
}

Tensor relu(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.data) v = std::max(0.0, v);
  return out;
}

std::vector<double> relu(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v = std::max(0.0, v);
  return out;
}

Tensor maxpool1d(const Tensor& input, std::size_t pool_size, std::size_t stride) {
  (void)output_shape(MaxPool1dLayer{pool_size, stride}, Shape{input.channels, input.length});
  Tensor out(input.channels, (input.length - pool_size) / stride + 1);
  for (std::size_t c = 0; c < input.channels; ++c) {
    for (std::size_t t = 0; t < out.length; ++t) {
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < pool_size; ++j) m = std::max(m, input.at(c, t * stride + j));
      out.at(c, t) = m;
    }
  }
  return out;
}

std::vector<double> dense_forward(std::span<const double> x, const DenseLayer& layer) {
  (void)output_shape(layer, Shape{x.size(), 1});
  std::vector<double> y(layer.units);
  for (std::size_t u = 0; u < layer.units; ++u) {
    const double* w = layer.weights.data() + u * layer.inputs;
    double acc = layer.bias[u];
    for (std::size_t i = 0; i < layer.inputs; ++i) acc += w[i] * x[i];
    y[u] = acc;
  }
  return y;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw Error("softmax of empty vector");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

double sigmoid(double x) {
  // Branches keep exp() from overflowing for large |x|.
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace ambiact::nn
