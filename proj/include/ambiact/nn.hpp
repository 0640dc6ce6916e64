#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ambiact/signal.hpp"

namespace ambiact::nn {

/// Channel-major activation block: value(c, t) = data[c * length + t].
/// Recurrent layers read it as a sequence of `length` steps with `channels`
/// features per step.
struct Tensor {
  std::size_t channels = 0;
  std::size_t length = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::size_t c, std::size_t l, double fill = 0.0) : channels(c), length(l), data(c * l, fill) {}

  double& at(std::size_t c, std::size_t t) { return data[c * length + t]; }
  double at(std::size_t c, std::size_t t) const { return data[c * length + t]; }
  std::size_t size() const noexcept { return data.size(); }

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

struct Shape {
  std::size_t channels = 0;
  std::size_t length = 0;
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

/// Activation used for the LSTM candidate state and output squashing.
/// `sigmoid` squashes the candidate and the output state with the logistic
/// function; `tanh` is the conventional cell.
enum class CellActivation { sigmoid, tanh };

/// Weights of one gate: pre-activation = recurrent * h_prev + input * x + bias.
struct GateWeights {
  std::vector<double> recurrent;  // units x units, row-major
  std::vector<double> input;      // units x input_size, row-major
  std::vector<double> bias;       // units
};

struct LstmWeights {
  std::size_t units = 0;
  std::size_t input_size = 0;
  GateWeights output, input_gate, forget, candidate;

  static LstmWeights zeros(std::size_t units, std::size_t input_size);
};

struct GruWeights {
  std::size_t units = 0;
  std::size_t input_size = 0;
  GateWeights update, reset, candidate;

  static GruWeights zeros(std::size_t units, std::size_t input_size);
};

struct Conv1dLayer {
  std::size_t filters = 0;
  std::size_t in_channels = 0;
  std::size_t kernel_size = 1;
  std::size_t stride = 1;
  std::vector<double> weights;  // filters x in_channels x kernel_size
  std::vector<double> bias;     // filters
};
struct ReluLayer {};
struct MaxPool1dLayer {
  std::size_t pool_size = 1;
  std::size_t stride = 1;
};
/// Identity at inference.
struct DropoutLayer {
  double rate = 0.0;
};
struct FlattenLayer {};
struct LstmLayer {
  LstmWeights weights;
  bool return_sequences = false;
  CellActivation activation = CellActivation::sigmoid;
};
struct GruLayer {
  GruWeights weights;
  bool return_sequences = false;
};
struct DenseLayer {
  std::size_t units = 0;
  std::size_t inputs = 0;
  std::vector<double> weights;  // units x inputs
  std::vector<double> bias;     // units
};
struct SoftmaxLayer {};

using LayerSpec = std::variant<Conv1dLayer, ReluLayer, MaxPool1dLayer, DropoutLayer, FlattenLayer,
                               LstmLayer, GruLayer, DenseLayer, SoftmaxLayer>;

std::string_view kind_name(const LayerSpec& layer);

/// Output shape of `layer` for input shape `in`; throws Error naming both
/// shapes when they do not compose, or when declared sizes and weight array
/// lengths disagree.
Shape output_shape(const LayerSpec& layer, const Shape& in);

// --- kernels -------------------------------------------------------------------

/// Valid cross-correlation, output length floor((L - K) / stride) + 1.
Tensor conv1d_forward(const Tensor& input, const Conv1dLayer& layer);
/// Same result as conv1d_forward, filters distributed over OpenMP threads.
Tensor conv1d_forward_parallel(const Tensor& input, const Conv1dLayer& layer);

Tensor relu(const Tensor& x);
std::vector<double> relu(std::span<const double> x);

Tensor maxpool1d(const Tensor& input, std::size_t pool_size, std::size_t stride);

/// y = W x + b over the flattened input.
std::vector<double> dense_forward(std::span<const double> x, const DenseLayer& layer);

/// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

double sigmoid(double x);

struct LstmStep {
  std::vector<double> h, s;
  std::vector<double> output_gate, input_gate, forget_gate, candidate;
};

/// One cell step:
///   o, i, f = sigmoid(W h_prev + U x + b)
///   s~ = g(W h_prev + U x + b)
///   s  = f * s_prev + i * s~
///   h  = o * g(s)
/// with g chosen by `activation`.
LstmStep lstm_cell_step(std::span<const double> x, std::span<const double> h_prev,
                        std::span<const double> s_prev, const LstmWeights& w,
                        CellActivation activation = CellActivation::sigmoid);

struct GruStep {
  std::vector<double> h;
  std::vector<double> update_gate, reset_gate, candidate;
};

/// z = sigmoid(Wz h + Uz x + bz), r = sigmoid(Wr h + Ur x + br),
/// h~ = tanh(W (r * h) + U x + b), h' = (1 - z) * h + z * h~.
GruStep gru_cell_step(std::span<const double> x, std::span<const double> h_prev,
                      const GruWeights& w);

Tensor lstm_forward(const Tensor& sequence, const LstmLayer& layer);
Tensor gru_forward(const Tensor& sequence, const GruLayer& layer);

/// Applies one layer. Dense and softmax flatten their input to (n x 1).
Tensor forward(const LayerSpec& layer, const Tensor& input);

// --- bundle --------------------------------------------------------------------

struct FeatureNorm {
  std::vector<double> mean;  // per input channel
  std::vector<double> std;
};

struct WeightsBundle {
  std::vector<LayerSpec> layers;
  std::size_t input_len = 128;
  std::size_t input_channels = 3;
  std::vector<std::string> class_names;
  std::optional<FeatureNorm> feature_norm;

  /// Checks shape composition end to end and that the final softmax width
  /// equals class_names.size(). Returns the per-layer output shapes.
  std::vector<Shape> validate() const;
};

struct ClassProbabilities {
  std::vector<double> probs;

  /// Index of the largest probability; the first wins on ties.
  std::size_t argmax() const;
};

/// Converts a window to a (channels x length) tensor: ax, ay, az rows, plus
/// gyro rows when `channels` is 6.
Tensor window_tensor(const SampleWindow& window, std::size_t channels);

ClassProbabilities classify_tensor(Tensor input, const WeightsBundle& bundle);
ClassProbabilities classify_window(const SampleWindow& window, const WeightsBundle& bundle);

std::vector<ClassProbabilities> classify_windows_serial(std::span<const SampleWindow> windows,
                                                        const WeightsBundle& bundle);
std::vector<ClassProbabilities> classify_windows_parallel(std::span<const SampleWindow> windows,
                                                          const WeightsBundle& bundle);

/// Conv(32) -> ReLU -> Conv(128) -> ReLU -> Dropout(0.07) -> MaxPool(2) ->
/// Flatten -> GRU(64, sequences) -> GRU(64) -> Dropout(0.2) -> Dense ->
/// Softmax, kernel size 64. Weights are zero unless `seed` is given, in which
/// case they are drawn uniformly from [-scale, scale].
WeightsBundle default_architecture(std::vector<std::string> class_names,
                                   std::size_t input_channels = 3, std::size_t input_len = 128,
                                   std::optional<std::uint64_t> seed = std::nullopt,
                                   double scale = 0.05);

WeightsBundle parse_bundle(std::string_view json_text, std::string_view source_name = "<bundle>");
WeightsBundle read_bundle(const std::filesystem::path& path);
std::string format_bundle(const WeightsBundle& bundle);

}  // namespace ambiact::nn
