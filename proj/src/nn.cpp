#include "ambiact/nn.hpp"

#include <cmath>
#include <exception>
#include <random>

#include "ambiact/error.hpp"

namespace ambiact::nn {

namespace {

GateWeights zero_gate(std::size_t units, std::size_t input_size) {
  return GateWeights{std::vector<double>(units * units, 0.0),
                     std::vector<double>(units * input_size, 0.0), std::vector<double>(units, 0.0)};
}

void check_gate(const GateWeights& g, std::size_t units, std::size_t input_size, const char* what) {
  if (g.recurrent.size() != units * units || g.input.size() != units * input_size ||
      g.bias.size() != units) {
    throw Error(std::string(what) + " gate weights do not match units=" + std::to_string(units) +
                " input_size=" + std::to_string(input_size));
  }
}

// W h + U x + b for one gate.
std::vector<double> preactivation(const GateWeights& g, std::span<const double> h,
                                  std::span<const double> x) {
  const std::size_t units = g.bias.size();
  const std::size_t in = x.size();
  std::vector<double> a(units);
  for (std::size_t u = 0; u < units; ++u) {
    double acc = g.bias[u];
    const double* wr = g.recurrent.data() + u * units;
    for (std::size_t j = 0; j < units; ++j) acc += wr[j] * h[j];
    const double* wi = g.input.data() + u * in;
    for (std::size_t j = 0; j < in; ++j) acc += wi[j] * x[j];
    a[u] = acc;
  }
  return a;
}

double squash(double v, CellActivation a) { return a == CellActivation::sigmoid ? sigmoid(v) : std::tanh(v); }

void check_dims(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(std::string("dimension mismatch: ") + what + " has " + std::to_string(got) +
                ", expected " + std::to_string(want));
  }
}

std::vector<double> column(const Tensor& t, std::size_t step) {
  std::vector<double> x(t.channels);
  for (std::size_t c = 0; c < t.channels; ++c) x[c] = t.at(c, step);
  return x;
}

[[noreturn]] void mismatch(const LayerSpec& layer, const Shape& in, const std::string& expected) {
  throw Error("shape mismatch: " + std::string(kind_name(layer)) + " expects " + expected +
              ", got " + to_string(in));
}

std::string dims(std::size_t c, const std::string& l) { return "(" + std::to_string(c) + " x " + l + ")"; }

}  // namespace

std::string to_string(const Shape& s) {
  return "(" + std::to_string(s.channels) + " x " + std::to_string(s.length) + ")";
}

LstmWeights LstmWeights::zeros(std::size_t units, std::size_t input_size) {
  return LstmWeights{units,
                     input_size,
                     zero_gate(units, input_size),
                     zero_gate(units, input_size),
                     zero_gate(units, input_size),
                     zero_gate(units, input_size)};
}

GruWeights GruWeights::zeros(std::size_t units, std::size_t input_size) {
  return GruWeights{units, input_size, zero_gate(units, input_size), zero_gate(units, input_size),
                    zero_gate(units, input_size)};
}

std::string_view kind_name(const LayerSpec& layer) {
  static constexpr std::string_view names[] = {"conv1d",  "relu", "maxpool1d", "dropout", "flatten",
                                               "lstm",    "gru",  "dense",     "softmax"};
  return names[layer.index()];
}

Shape output_shape(const LayerSpec& layer, const Shape& in) {
  struct Visitor {
    const LayerSpec& layer;
    const Shape& in;

    Shape operator()(const Conv1dLayer& l) const {
      if (l.kernel_size < 1 || l.stride < 1 || l.filters < 1) throw Error("conv1d: kernel_size, stride and filters must be >= 1");
      if (l.weights.size() != l.filters * l.in_channels * l.kernel_size || l.bias.size() != l.filters) {
        throw Error("conv1d: weights/bias length does not match filters x in_channels x kernel_size");
      }
      if (in.channels != l.in_channels || in.length < l.kernel_size) {
        mismatch(layer, in, dims(l.in_channels, ">=" + std::to_string(l.kernel_size)));
      }
      return {l.filters, (in.length - l.kernel_size) / l.stride + 1};
    }
    Shape operator()(const ReluLayer&) const { return in; }
    Shape operator()(const MaxPool1dLayer& l) const {
      if (l.pool_size < 1 || l.stride < 1) throw Error("maxpool1d: pool_size and stride must be >= 1");
      if (in.length < l.pool_size) mismatch(layer, in, dims(in.channels, ">=" + std::to_string(l.pool_size)));
      return {in.channels, (in.length - l.pool_size) / l.stride + 1};
    }
    Shape operator()(const DropoutLayer& l) const {
      if (!(l.rate >= 0.0 && l.rate < 1.0)) throw Error("dropout: rate must be in [0,1)");
      return in;
    }
    Shape operator()(const FlattenLayer&) const { return {in.channels * in.length, 1}; }
    Shape operator()(const LstmLayer& l) const {
      const auto& w = l.weights;
      check_gate(w.output, w.units, w.input_size, "lstm output");
      check_gate(w.input_gate, w.units, w.input_size, "lstm input");
      check_gate(w.forget, w.units, w.input_size, "lstm forget");
      check_gate(w.candidate, w.units, w.input_size, "lstm candidate");
      if (in.channels != w.input_size) mismatch(layer, in, dims(w.input_size, "T"));
      return {w.units, l.return_sequences ? in.length : 1};
    }
    Shape operator()(const GruLayer& l) const {
      const auto& w = l.weights;
      check_gate(w.update, w.units, w.input_size, "gru update");
      check_gate(w.reset, w.units, w.input_size, "gru reset");
      check_gate(w.candidate, w.units, w.input_size, "gru candidate");
      if (in.channels != w.input_size) mismatch(layer, in, dims(w.input_size, "T"));
      return {w.units, l.return_sequences ? in.length : 1};
    }
    Shape operator()(const DenseLayer& l) const {
      if (l.weights.size() != l.units * l.inputs || l.bias.size() != l.units) {
        throw Error("dense: weights/bias length does not match units x inputs");
      }
      if (in.channels * in.length != l.inputs) {
        mismatch(layer, in, "(" + std::to_string(l.inputs) + " values)");
      }
      return {l.units, 1};
    }
    Shape operator()(const SoftmaxLayer&) const { return {in.channels * in.length, 1}; }
  };
  return std::visit(Visitor{layer, in}, layer);
}

LstmStep lstm_cell_step(std::span<const double> x, std::span<const double> h_prev,
                        std::span<const double> s_prev, const LstmWeights& w,
                        CellActivation activation) {
  check_dims(x.size(), w.input_size, "x");
  check_dims(h_prev.size(), w.units, "h_prev");
  check_dims(s_prev.size(), w.units, "s_prev");
  check_gate(w.output, w.units, w.input_size, "lstm output");
  check_gate(w.input_gate, w.units, w.input_size, "lstm input");
  check_gate(w.forget, w.units, w.input_size, "lstm forget");
  check_gate(w.candidate, w.units, w.input_size, "lstm candidate");

  LstmStep r;
  r.output_gate = preactivation(w.output, h_prev, x);
  r.input_gate = preactivation(w.input_gate, h_prev, x);
  r.forget_gate = preactivation(w.forget, h_prev, x);
  r.candidate = preactivation(w.candidate, h_prev, x);
  r.s.resize(w.units);
  r.h.resize(w.units);
  for (std::size_t u = 0; u < w.units; ++u) {
    r.output_gate[u] = sigmoid(r.output_gate[u]);
    r.input_gate[u] = sigmoid(r.input_gate[u]);
    r.forget_gate[u] = sigmoid(r.forget_gate[u]);
    r.candidate[u] = squash(r.candidate[u], activation);
    r.s[u] = r.forget_gate[u] * s_prev[u] + r.input_gate[u] * r.candidate[u];
    r.h[u] = r.output_gate[u] * squash(r.s[u], activation);
  }
  return r;
}

GruStep gru_cell_step(std::span<const double> x, std::span<const double> h_prev,
                      const GruWeights& w) {
  check_dims(x.size(), w.input_size, "x");
  check_dims(h_prev.size(), w.units, "h_prev");
  check_gate(w.update, w.units, w.input_size, "gru update");
  check_gate(w.reset, w.units, w.input_size, "gru reset");
  check_gate(w.candidate, w.units, w.input_size, "gru candidate");

  GruStep r;
  r.update_gate = preactivation(w.update, h_prev, x);
  r.reset_gate = preactivation(w.reset, h_prev, x);
  for (std::size_t u = 0; u < w.units; ++u) {
    r.update_gate[u] = sigmoid(r.update_gate[u]);
    r.reset_gate[u] = sigmoid(r.reset_gate[u]);
  }
  std::vector<double> gated(w.units);
  for (std::size_t u = 0; u < w.units; ++u) gated[u] = r.reset_gate[u] * h_prev[u];
  r.candidate = preactivation(w.candidate, gated, x);
  r.h.resize(w.units);
  for (std::size_t u = 0; u < w.units; ++u) {
    r.candidate[u] = std::tanh(r.candidate[u]);
    r.h[u] = (1.0 - r.update_gate[u]) * h_prev[u] + r.update_gate[u] * r.candidate[u];
  }
  return r;
}

Tensor lstm_forward(const Tensor& sequence, const LstmLayer& layer) {
  const Shape out_shape = output_shape(layer, Shape{sequence.channels, sequence.length});
  const std::size_t units = layer.weights.units;
  std::vector<double> h(units, 0.0), s(units, 0.0);
  Tensor out(out_shape.channels, out_shape.length);
  for (std::size_t t = 0; t < sequence.length; ++t) {
    auto step = lstm_cell_step(column(sequence, t), h, s, layer.weights, layer.activation);
    h = std::move(step.h);
    s = std::move(step.s);
    if (layer.return_sequences) {
      for (std::size_t u = 0; u < units; ++u) out.at(u, t) = h[u];
    }
  }
  if (!layer.return_sequences) {
    for (std::size_t u = 0; u < units; ++u) out.at(u, 0) = h[u];
  }
  return out;
}

Tensor gru_forward(const Tensor& sequence, const GruLayer& layer) {
  const Shape out_shape = output_shape(layer, Shape{sequence.channels, sequence.length});
  const std::size_t units = layer.weights.units;
  std::vector<double> h(units, 0.0);
  Tensor out(out_shape.channels, out_shape.length);
  for (std::size_t t = 0; t < sequence.length; ++t) {
    h = gru_cell_step(column(sequence, t), h, layer.weights).h;
    if (layer.return_sequences) {
      for (std::size_t u = 0; u < units; ++u) out.at(u, t) = h[u];
    }
  }
  if (!layer.return_sequences) {
    for (std::size_t u = 0; u < units; ++u) out.at(u, 0) = h[u];
  }
  return out;
}

Tensor forward(const LayerSpec& layer, const Tensor& input) {
  struct Visitor {
    const Tensor& in;
    Tensor operator()(const Conv1dLayer& l) const { return conv1d_forward(in, l); }
    Tensor operator()(const ReluLayer&) const { return relu(in); }
    Tensor operator()(const MaxPool1dLayer& l) const { return maxpool1d(in, l.pool_size, l.stride); }
    Tensor operator()(const DropoutLayer& l) const {
      if (!(l.rate >= 0.0 && l.rate < 1.0)) throw Error("dropout: rate must be in [0,1)");
      return in;
    }
    Tensor operator()(const FlattenLayer&) const {
      Tensor out = in;
      out.channels = in.channels * in.length;
      out.length = 1;
      return out;
    }
    Tensor operator()(const LstmLayer& l) const { return lstm_forward(in, l); }
    Tensor operator()(const GruLayer& l) const { return gru_forward(in, l); }
    Tensor operator()(const DenseLayer& l) const {
      auto y = dense_forward(in.data, l);
      Tensor out(y.size(), 1);
      out.data = std::move(y);
      return out;
    }
    Tensor operator()(const SoftmaxLayer&) const {
      auto p = softmax(in.data);
      Tensor out(p.size(), 1);
      out.data = std::move(p);
      return out;
    }
  };
  return std::visit(Visitor{input}, layer);
}

std::vector<Shape> WeightsBundle::validate() const {
  if (input_len == 0 || input_channels == 0) throw Error("bundle: input_len and input_channels must be positive");
  if (layers.empty()) throw Error("bundle: no layers");
  if (!std::holds_alternative<SoftmaxLayer>(layers.back())) throw Error("bundle: last layer must be softmax");
  if (feature_norm) {
    if (feature_norm->mean.size() != input_channels || feature_norm->std.size() != input_channels) {
      throw Error("bundle: feature_norm length must equal input_channels");
    }
    for (double s : feature_norm->std) {
      if (!(s > 0.0)) throw Error("bundle: feature_norm std must be positive");
    }
  }
  std::vector<Shape> shapes;
  Shape s{input_channels, input_len};
  for (std::size_t i = 0; i < layers.size(); ++i) {
    try {
      s = output_shape(layers[i], s);
    } catch (const Error& e) {
      throw Error("bundle layer " + std::to_string(i) + ": " + e.what());
    }
    shapes.push_back(s);
  }
  if (s.channels != class_names.size()) {
    throw Error("bundle: softmax width " + std::to_string(s.channels) + " != " +
                std::to_string(class_names.size()) + " class names");
  }
  return shapes;
}

std::size_t ClassProbabilities::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return best;
}

Tensor window_tensor(const SampleWindow& window, std::size_t channels) {
  if (channels != 3 && channels != 6) throw Error("window tensor needs 3 or 6 channels");
  Tensor t(channels, window.samples.size());
  for (std::size_t i = 0; i < window.samples.size(); ++i) {
    const auto& s = window.samples[i];
    t.at(0, i) = s.ax;
    t.at(1, i) = s.ay;
    t.at(2, i) = s.az;
    if (channels == 6) {
      if (!s.gyro) throw Error("bundle expects gyroscope channels but window has none");
      for (std::size_t g = 0; g < 3; ++g) t.at(3 + g, i) = (*s.gyro)[g];
    }
  }
  return t;
}

ClassProbabilities classify_tensor(Tensor input, const WeightsBundle& bundle) {
  if (input.channels != bundle.input_channels || input.length != bundle.input_len) {
    throw Error("shape mismatch: bundle expects " + to_string(Shape{bundle.input_channels, bundle.input_len}) +
                ", got " + to_string(Shape{input.channels, input.length}));
  }
  if (bundle.feature_norm) {
    for (std::size_t c = 0; c < input.channels; ++c) {
      for (std::size_t t = 0; t < input.length; ++t) {
        input.at(c, t) = (input.at(c, t) - bundle.feature_norm->mean[c]) / bundle.feature_norm->std[c];
      }
    }
  }
  for (const auto& layer : bundle.layers) input = forward(layer, input);
  if (input.size() != bundle.class_names.size()) {
    throw Error("bundle output width does not match class_names");
  }
  return ClassProbabilities{std::move(input.data)};
}

ClassProbabilities classify_window(const SampleWindow& window, const WeightsBundle& bundle) {
  if (window.samples.size() != bundle.input_len) {
    throw Error("shape mismatch: bundle input_len " + std::to_string(bundle.input_len) +
                " != window length " + std::to_string(window.samples.size()));
  }
  return classify_tensor(window_tensor(window, bundle.input_channels), bundle);
}

std::vector<ClassProbabilities> classify_windows_serial(std::span<const SampleWindow> windows,
                                                        const WeightsBundle& bundle) {
  bundle.validate();
  std::vector<ClassProbabilities> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(classify_window(w, bundle));
  return out;
}

std::vector<ClassProbabilities> classify_windows_parallel(std::span<const SampleWindow> windows,
                                                          const WeightsBundle& bundle) {
  bundle.validate();
  std::vector<ClassProbabilities> out(windows.size());
  const auto n = static_cast<std::ptrdiff_t>(windows.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = classify_window(windows[static_cast<std::size_t>(i)], bundle);
    } catch (...) {
#pragma omp critical(ambiact_classify_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

WeightsBundle default_architecture(std::vector<std::string> class_names, std::size_t input_channels,
                                   std::size_t input_len, std::optional<std::uint64_t> seed,
                                   double scale) {
  constexpr std::size_t kKernel = 64;
  constexpr std::size_t kFilters1 = 32;
  constexpr std::size_t kFilters2 = 128;
  constexpr std::size_t kGruUnits = 64;

  std::mt19937_64 rng(seed.value_or(0));
  std::uniform_real_distribution<double> dist(-scale, scale);
  auto fill = [&](std::vector<double>& v) {
    if (seed) {
      for (double& x : v) x = dist(rng);
    }
  };
  auto fill_gate = [&](GateWeights& g) {
    fill(g.recurrent);
    fill(g.input);
    fill(g.bias);
  };

  WeightsBundle b;
  b.input_len = input_len;
  b.input_channels = input_channels;
  b.class_names = std::move(class_names);

  Conv1dLayer c1{kFilters1, input_channels, kKernel, 1,
                 std::vector<double>(kFilters1 * input_channels * kKernel, 0.0),
                 std::vector<double>(kFilters1, 0.0)};
  Conv1dLayer c2{kFilters2, kFilters1, kKernel, 1, std::vector<double>(kFilters2 * kFilters1 * kKernel, 0.0),
                 std::vector<double>(kFilters2, 0.0)};
  fill(c1.weights);
  fill(c1.bias);
  fill(c2.weights);
  fill(c2.bias);
  b.layers = {c1, ReluLayer{}, c2, ReluLayer{}, DropoutLayer{0.07}, MaxPool1dLayer{2, 2}, FlattenLayer{}};

  Shape s{input_channels, input_len};
  for (const auto& l : b.layers) s = output_shape(l, s);

  GruLayer g1{GruWeights::zeros(kGruUnits, s.channels), true};
  GruLayer g2{GruWeights::zeros(kGruUnits, kGruUnits), false};
  for (GruLayer* g : {&g1, &g2}) {
    fill_gate(g->weights.update);
    fill_gate(g->weights.reset);
    fill_gate(g->weights.candidate);
  }
  DenseLayer d{b.class_names.size(), kGruUnits, std::vector<double>(b.class_names.size() * kGruUnits, 0.0),
               std::vector<double>(b.class_names.size(), 0.0)};
  fill(d.weights);
  fill(d.bias);
  b.layers.insert(b.layers.end(), {g1, g2, DropoutLayer{0.2}, d, SoftmaxLayer{}});
  b.validate();
  return b;
}

}  // namespace ambiact::nn
