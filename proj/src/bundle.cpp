// WeightsBundle JSON reader/writer. Field layout is documented in
// docs/bundle-format.md.

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ambiact/error.hpp"
#include "ambiact/io.hpp"
#include "ambiact/nn.hpp"

namespace ambiact::nn {

namespace {

using nlohmann::json;

constexpr std::string_view kFormat = "ambiact.bundle.v1";

std::vector<double> take(const std::vector<double>& flat, std::size_t& pos, std::size_t n) {
  if (pos + n > flat.size()) throw Error("weights array too short");
  std::vector<double> out(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                          flat.begin() + static_cast<std::ptrdiff_t>(pos + n));
  pos += n;
  return out;
}

// Recurrent weights are stored as all input kernels (gate-major) followed by
// all recurrent kernels; bias holds one block per gate.
template <std::size_t N>
void unpack_gates(const std::vector<double>& weights, const std::vector<double>& bias,
                  std::size_t units, std::size_t input_size, std::array<GateWeights*, N> gates) {
  if (weights.size() != N * units * (input_size + units) || bias.size() != N * units) {
    throw Error("recurrent layer: expected " + std::to_string(N * units * (input_size + units)) +
                " weights and " + std::to_string(N * units) + " biases, got " +
                std::to_string(weights.size()) + " and " + std::to_string(bias.size()));
  }
  std::size_t pos = 0;
  for (auto* g : gates) g->input = take(weights, pos, units * input_size);
  for (auto* g : gates) g->recurrent = take(weights, pos, units * units);
  std::size_t bpos = 0;
  for (auto* g : gates) g->bias = take(bias, bpos, units);
}

template <std::size_t N>
void pack_gates(json& j, std::array<const GateWeights*, N> gates) {
  std::vector<double> w, b;
  for (auto* g : gates) w.insert(w.end(), g->input.begin(), g->input.end());
  for (auto* g : gates) w.insert(w.end(), g->recurrent.begin(), g->recurrent.end());
  for (auto* g : gates) b.insert(b.end(), g->bias.begin(), g->bias.end());
  j["weights"] = w;
  j["bias"] = b;
}

std::size_t size_param(const json& params, const char* key, std::optional<std::size_t> fallback = std::nullopt) {
  if (!params.contains(key)) {
    if (fallback) return *fallback;
    throw Error(std::string("missing parameter '") + key + "'");
  }
  const auto& v = params.at(key);
  if (!v.is_number_unsigned()) throw Error(std::string("parameter '") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<double> number_array(const json& layer, const char* key) {
  if (!layer.contains(key)) return {};
  return layer.at(key).get<std::vector<double>>();
}

LayerSpec parse_layer(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const json params = j.value("params", json::object());
  if (kind == "conv1d") {
    Conv1dLayer l;
    l.filters = size_param(params, "filters");
    l.kernel_size = size_param(params, "kernel_size");
    l.stride = size_param(params, "stride", 1);
    l.in_channels = size_param(params, "in_channels");
    l.weights = number_array(j, "weights");
    l.bias = number_array(j, "bias");
    return l;
  }
  if (kind == "relu") return ReluLayer{};
  if (kind == "maxpool1d") {
    const std::size_t pool = size_param(params, "pool_size");
    return MaxPool1dLayer{pool, size_param(params, "stride", pool)};
  }
  if (kind == "dropout") return DropoutLayer{params.value("rate", 0.0)};
  if (kind == "flatten") return FlattenLayer{};
  if (kind == "lstm") {
    LstmLayer l;
    const std::size_t units = size_param(params, "units");
    const std::size_t input_size = size_param(params, "input_size");
    l.weights = LstmWeights::zeros(units, input_size);
    l.return_sequences = params.value("return_sequences", false);
    const std::string act = params.value("cell_activation", std::string("sigmoid"));
    if (act == "sigmoid") {
      l.activation = CellActivation::sigmoid;
    } else if (act == "tanh") {
      l.activation = CellActivation::tanh;
    } else {
      throw Error("lstm: unknown cell_activation '" + act + "'");
    }
    auto& w = l.weights;
    unpack_gates<4>(number_array(j, "weights"), number_array(j, "bias"), units, input_size,
                    {&w.output, &w.input_gate, &w.forget, &w.candidate});
    return l;
  }
  if (kind == "gru") {
    GruLayer l;
    const std::size_t units = size_param(params, "units");
    const std::size_t input_size = size_param(params, "input_size");
    l.weights = GruWeights::zeros(units, input_size);
    l.return_sequences = params.value("return_sequences", false);
    auto& w = l.weights;
    unpack_gates<3>(number_array(j, "weights"), number_array(j, "bias"), units, input_size,
                    {&w.update, &w.reset, &w.candidate});
    return l;
  }
  if (kind == "dense") {
    DenseLayer l;
    l.units = size_param(params, "units");
    l.inputs = size_param(params, "inputs");
    l.weights = number_array(j, "weights");
    l.bias = number_array(j, "bias");
    return l;
  }
  if (kind == "softmax") return SoftmaxLayer{};
  throw Error("unknown layer kind '" + kind + "'");
}

json format_layer(const LayerSpec& layer) {
  json j;
  j["kind"] = std::string(kind_name(layer));
  std::visit(
      [&j](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Conv1dLayer>) {
          j["params"] = {{"filters", l.filters},
                         {"kernel_size", l.kernel_size},
                         {"stride", l.stride},
                         {"in_channels", l.in_channels}};
          j["weights"] = l.weights;
          j["bias"] = l.bias;
        } else if constexpr (std::is_same_v<T, MaxPool1dLayer>) {
          j["params"] = {{"pool_size", l.pool_size}, {"stride", l.stride}};
        } else if constexpr (std::is_same_v<T, DropoutLayer>) {
          j["params"] = {{"rate", l.rate}};
        } else if constexpr (std::is_same_v<T, LstmLayer>) {
          j["params"] = {{"units", l.weights.units},
                         {"input_size", l.weights.input_size},
                         {"return_sequences", l.return_sequences},
                         {"cell_activation", l.activation == CellActivation::sigmoid ? "sigmoid" : "tanh"}};
          const auto& w = l.weights;
          pack_gates<4>(j, {&w.output, &w.input_gate, &w.forget, &w.candidate});
        } else if constexpr (std::is_same_v<T, GruLayer>) {
          j["params"] = {{"units", l.weights.units},
                         {"input_size", l.weights.input_size},
                         {"return_sequences", l.return_sequences}};
          const auto& w = l.weights;
          pack_gates<3>(j, {&w.update, &w.reset, &w.candidate});
        } else if constexpr (std::is_same_v<T, DenseLayer>) {
          j["params"] = {{"units", l.units}, {"inputs", l.inputs}};
          j["weights"] = l.weights;
          j["bias"] = l.bias;
        }
      },
      layer);
  return j;
}

}  // namespace

WeightsBundle parse_bundle(std::string_view json_text, std::string_view source_name) {
  const std::string src(source_name);
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(src, 0, std::string("invalid JSON: ") + e.what());
  }
  WeightsBundle b;
  try {
    if (doc.contains("format") && doc.at("format").get<std::string>() != kFormat) {
      throw Error("unsupported bundle format '" + doc.at("format").get<std::string>() + "'");
    }
    b.input_len = doc.value("input_len", std::size_t{128});
    b.input_channels = doc.value("input_channels", std::size_t{3});
    b.class_names = doc.at("class_names").get<std::vector<std::string>>();
    if (doc.contains("feature_norm") && !doc.at("feature_norm").is_null()) {
      const auto& fn = doc.at("feature_norm");
      b.feature_norm = FeatureNorm{fn.at("mean").get<std::vector<double>>(), fn.at("std").get<std::vector<double>>()};
    }
    const auto& layers = doc.at("layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
      try {
        b.layers.push_back(parse_layer(layers[i]));
      } catch (const Error& e) {
        throw Error("layer " + std::to_string(i) + ": " + e.what());
      }
    }
    b.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(src, 0, e.what());
  } catch (const Error& e) {
    throw ParseError(src, 0, e.what());
  }
  return b;
}

WeightsBundle read_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bundle(ss.str(), path.string());
}

std::string format_bundle(const WeightsBundle& bundle) {
  json doc;
  doc["format"] = std::string(kFormat);
  doc["input_len"] = bundle.input_len;
  doc["input_channels"] = bundle.input_channels;
  doc["class_names"] = bundle.class_names;
  if (bundle.feature_norm) {
    doc["feature_norm"] = {{"mean", bundle.feature_norm->mean}, {"std", bundle.feature_norm->std}};
  }
  json layers = json::array();
  for (const auto& l : bundle.layers) layers.push_back(format_layer(l));
  doc["layers"] = std::move(layers);
  return doc.dump() + "\n";
}

}  // namespace ambiact::nn
