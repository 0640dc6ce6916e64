#include "ambiact/centroid.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ambiact/error.hpp"

namespace ambiact {

namespace {
constexpr std::string_view kFormat = "ambiact.centroids.v1";
}

void CentroidModel::validate() const {
  if (class_names.empty()) throw Error("centroid model has no classes");
  if (centroids.size() != class_names.size()) throw Error("centroid count != class count");
  for (const auto& c : centroids) {
    if (c.size() != feature_names.size()) throw Error("centroid length != feature layout length");
  }
  if (scale) {
    if (scale->size() != feature_names.size()) throw Error("scale length != feature layout length");
    for (double s : *scale) {
      if (!(s > 0.0)) throw Error("scale entries must be positive");
    }
  }
}

std::string centroid_classify(const FeatureVector& features, const CentroidModel& model) {
  if (features.values.size() != model.feature_names.size() ||
      (features.layout && features.names() != model.feature_names)) {
    throw Error("feature layout mismatch: model has " + std::to_string(model.feature_names.size()) +
                " features, row has " + std::to_string(features.values.size()));
  }
  std::size_t best = 0;
  double best_d = 0.0;
  for (std::size_t k = 0; k < model.centroids.size(); ++k) {
    double d = 0.0;
    const auto& c = model.centroids[k];
    for (std::size_t j = 0; j < c.size(); ++j) {
      double diff = features.values[j] - c[j];
      if (model.scale) diff /= (*model.scale)[j];
      d += diff * diff;
    }
    if (k == 0 || d < best_d || (d == best_d && model.class_names[k] < model.class_names[best])) {
      best = k;
      best_d = d;
    }
  }
  return model.class_names[best];
}

std::vector<std::string> centroid_classify_serial(std::span<const FeatureVector> rows,
                                                  const CentroidModel& model) {
  model.validate();
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(centroid_classify(r, model));
  return out;
}

std::vector<std::string> centroid_classify_parallel(std::span<const FeatureVector> rows,
                                                    const CentroidModel& model) {
  model.validate();
  std::vector<std::string> out(rows.size());
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = centroid_classify(rows[static_cast<std::size_t>(i)], model);
    } catch (...) {
#pragma omp critical(ambiact_centroid_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

CentroidModel fit_centroids(std::span<const FeatureVector> rows, std::span<const std::string> labels,
                            bool standardize) {
  if (rows.empty()) throw Error("no training rows");
  if (rows.size() != labels.size()) throw Error("rows and labels differ in length");
  const std::size_t dim = rows.front().values.size();
  std::map<std::string, std::pair<std::vector<double>, std::size_t>> sums;
  std::vector<double> total(dim, 0.0), total_sq(dim, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].values.size() != dim) throw Error("training rows with mixed layouts");
    auto& [sum, count] = sums[labels[i]];
    if (sum.empty()) sum.assign(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
      const double v = rows[i].values[j];
      sum[j] += v;
      total[j] += v;
      total_sq[j] += v * v;
    }
    ++count;
  }
  CentroidModel m;
  m.feature_names = rows.front().layout ? rows.front().names() : std::vector<std::string>(dim);
  for (auto& [name, acc] : sums) {
    auto& [sum, count] = acc;
    for (double& v : sum) v /= static_cast<double>(count);
    m.class_names.push_back(name);
    m.centroids.push_back(std::move(sum));
  }
  if (standardize) {
    std::vector<double> scale(dim, 1.0);
    const double n = static_cast<double>(rows.size());
    for (std::size_t j = 0; j < dim; ++j) {
      const double mean = total[j] / n;
      const double var = total_sq[j] / n - mean * mean;
      const double sd = var > 0.0 ? std::sqrt(var) : 0.0;
      scale[j] = sd > 1e-9 ? sd : 1.0;
    }
    m.scale = std::move(scale);
  }
  return m;
}

CentroidModel parse_centroids(std::string_view json_text, std::string_view source_name) {
  using nlohmann::json;
  const std::string src(source_name);
  CentroidModel m;
  try {
    const json doc = json::parse(json_text);
    if (doc.value("format", std::string(kFormat)) != kFormat) throw Error("unsupported centroid format");
    m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    for (const auto& c : doc.at("classes")) {
      m.class_names.push_back(c.at("name").get<std::string>());
      m.centroids.push_back(c.at("centroid").get<std::vector<double>>());
    }
    if (doc.contains("scale") && !doc.at("scale").is_null()) {
      m.scale = doc.at("scale").get<std::vector<double>>();
    }
    m.validate();
  } catch (const json::exception& e) {
    throw ParseError(src, 0, e.what());
  } catch (const Error& e) {
    throw ParseError(src, 0, e.what());
  }
  return m;
}

CentroidModel read_centroids(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_centroids(ss.str(), path.string());
}

std::string format_centroids(const CentroidModel& model) {
  using nlohmann::json;
  json doc;
  doc["format"] = std::string(kFormat);
  doc["feature_names"] = model.feature_names;
  json classes = json::array();
  for (std::size_t k = 0; k < model.class_names.size(); ++k) {
    classes.push_back({{"name", model.class_names[k]}, {"centroid", model.centroids[k]}});
  }
  doc["classes"] = std::move(classes);
  if (model.scale) doc["scale"] = *model.scale;
  return doc.dump() + "\n";
}

}  // namespace ambiact
