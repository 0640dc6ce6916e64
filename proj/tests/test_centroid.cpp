#include <gtest/gtest.h>

#include <random>

#include "ambiact/centroid.hpp"
#include "ambiact/error.hpp"

using namespace ambiact;

namespace {

FeatureVector row(FeatureVector::Layout layout, std::vector<double> v) {
  FeatureVector f;
  f.layout = std::move(layout);
  f.values = std::move(v);
  return f;
}

FeatureVector::Layout layout2() {
  return std::make_shared<const std::vector<std::string>>(std::vector<std::string>{"f0", "f1"});
}

}  // namespace

TEST(Centroid, ExactPointAndTieRule) {
  CentroidModel m{{"f0", "f1"}, {"beta", "alpha"}, {{0, 0}, {2, 0}}, std::nullopt};
  const auto l = layout2();
  EXPECT_EQ(centroid_classify(row(l, {0, 0}), m), "beta");
  EXPECT_EQ(centroid_classify(row(l, {2, 0}), m), "alpha");
  // equidistant: lexicographically first name
  EXPECT_EQ(centroid_classify(row(l, {1, 5}), m), "alpha");
}

TEST(Centroid, LayoutMismatch) {
  CentroidModel m{{"a", "b"}, {"x"}, {{0, 0}}, std::nullopt};
  EXPECT_THROW(centroid_classify(row(layout2(), {0, 0}), m), Error);
}

TEST(Centroid, BlobsClassifiedAtTheirMeans) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0, 0.3);
  const auto l = layout2();
  const std::vector<std::pair<std::string, std::array<double, 2>>> centres = {
      {"a", {0, 0}}, {"b", {5, 1}}, {"c", {-2, 6}}};
  std::vector<FeatureVector> rows;
  std::vector<std::string> labels;
  for (const auto& [name, c] : centres) {
    for (int i = 0; i < 300; ++i) {
      rows.push_back(row(l, {c[0] + g(rng), c[1] + g(rng)}));
      labels.push_back(name);
    }
  }
  const auto m = fit_centroids(rows, labels);
  EXPECT_EQ(m.class_names, (std::vector<std::string>{"a", "b", "c"}));
  std::size_t ok = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) ok += centroid_classify(rows[i], m) == labels[i];
  EXPECT_GE(static_cast<double>(ok) / static_cast<double>(rows.size()), 0.99);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(centroid_classify(row(l, m.centroids[k]), m), m.class_names[k]);
  }
  EXPECT_EQ(centroid_classify_serial(rows, m), centroid_classify_parallel(rows, m));
}

TEST(Centroid, JsonRoundTrip) {
  const auto l = layout2();
  std::vector<FeatureVector> rows = {row(l, {0.1, 0.2}), row(l, {3.3, -1.0}), row(l, {1.0 / 3.0, 2})};
  std::vector<std::string> labels = {"x", "y", "x"};
  const auto m = fit_centroids(rows, labels);
  const auto text = format_centroids(m);
  const auto back = parse_centroids(text);
  EXPECT_EQ(back.centroids, m.centroids);
  EXPECT_EQ(back.scale, m.scale);
  EXPECT_EQ(format_centroids(back), text);
  EXPECT_THROW(parse_centroids("[]"), ParseError);
}
