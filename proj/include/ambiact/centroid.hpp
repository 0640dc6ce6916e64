#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ambiact/features.hpp"

namespace ambiact {

/// Weight-free nearest-centroid classifier over feature vectors.
///
/// Distances are Euclidean over (x - c) / scale when `scale` is present,
/// raw otherwise. Exact distance ties go to the lexicographically smallest
/// class name.
struct CentroidModel {
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
  std::vector<std::vector<double>> centroids;  // parallel to class_names
  std::optional<std::vector<double>> scale;

  void validate() const;
};

/// Throws Error on a feature layout mismatch.
std::string centroid_classify(const FeatureVector& features, const CentroidModel& model);

std::vector<std::string> centroid_classify_serial(std::span<const FeatureVector> rows,
                                                  const CentroidModel& model);
std::vector<std::string> centroid_classify_parallel(std::span<const FeatureVector> rows,
                                                    const CentroidModel& model);

/// Per-class mean feature vectors; `scale` is each feature's standard
/// deviation over all rows (1 where a feature is constant). Classes are
/// stored in lexicographic order.
CentroidModel fit_centroids(std::span<const FeatureVector> rows, std::span<const std::string> labels,
                            bool standardize = true);

CentroidModel parse_centroids(std::string_view json_text, std::string_view source_name = "<centroids>");
CentroidModel read_centroids(const std::filesystem::path& path);
std::string format_centroids(const CentroidModel& model);

}  // namespace ambiact
