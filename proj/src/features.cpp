#include "ambiact/features.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "ambiact/error.hpp"
#include "ambiact/io.hpp"

namespace ambiact {

namespace {

constexpr std::array<const char*, 3> kAxes = {"x", "y", "z"};

void append_group_names(std::vector<std::string>& names, const std::string& prefix) {
  for (const char* stat : {"mean", "std", "avg_abs_diff"}) {
    for (const char* a : kAxes) names.push_back(prefix + stat + "_" + a);
  }
  names.push_back(prefix + "avg_resultant");
  for (const char* a : kAxes) names.push_back(prefix + "time_between_peaks_ms_" + a);
  for (const char* a : kAxes) {
    for (std::size_t b = 0; b < kHistogramBins; ++b) {
      names.push_back(prefix + "bin_" + a + "_" + std::to_string(b));
    }
  }
}

void append_group_values(std::vector<double>& v, const AxisGroupStats& s) {
  v.insert(v.end(), s.mean.begin(), s.mean.end());
  v.insert(v.end(), s.std.begin(), s.std.end());
  v.insert(v.end(), s.avg_abs_diff.begin(), s.avg_abs_diff.end());
  v.push_back(s.avg_resultant);
  v.insert(v.end(), s.time_between_peaks_ms.begin(), s.time_between_peaks_ms.end());
  for (const auto& axis : s.bin_fractions) v.insert(v.end(), axis.begin(), axis.end());
}

double mean_of(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

double population_std(std::span<const double> x, double mean) {
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

std::size_t bin_index(double v) {
  constexpr double width = (kHistogramHigh - kHistogramLow) / kHistogramBins;
  const double pos = std::floor((v - kHistogramLow) / width);
  if (pos < 0.0) return 0;
  if (pos >= static_cast<double>(kHistogramBins)) return kHistogramBins - 1;
  return static_cast<std::size_t>(pos);
}

}  // namespace

std::vector<std::string> feature_names(bool with_gyro) {
  std::vector<std::string> names;
  names.reserve(with_gyro ? 2 * kAccelFeatureCount : kAccelFeatureCount);
  append_group_names(names, "");
  if (with_gyro) append_group_names(names, "gyro_");
  return names;
}

FeatureVector::Layout feature_layout(bool with_gyro) {
  static const FeatureVector::Layout acc =
      std::make_shared<const std::vector<std::string>>(feature_names(false));
  static const FeatureVector::Layout both =
      std::make_shared<const std::vector<std::string>>(feature_names(true));
  return with_gyro ? both : acc;
}

double time_between_peaks(std::span<const double> x, std::int64_t period_ms) {
  if (x.size() < 2) throw Error("time_between_peaks needs at least 2 samples");
  const double mean = mean_of(x);
  const double threshold = mean + 0.5 * population_std(x, mean);
  std::size_t first = 0, last = 0, count = 0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (x[i] > x[i - 1] && x[i] > x[i + 1] && x[i] > threshold) {
      if (count == 0) first = i;
      last = i;
      ++count;
    }
  }
  if (count < 2) return 0.0;
  // Mean of consecutive gaps telescopes to (last - first) / (count - 1).
  return static_cast<double>(last - first) * static_cast<double>(period_ms) /
         static_cast<double>(count - 1);
}

AxisGroupStats axis_group_stats(std::span<const double> x, std::span<const double> y,
                                std::span<const double> z, std::int64_t period_ms) {
  AxisGroupStats s;
  const std::array<std::span<const double>, 3> axes = {x, y, z};
  const double n = static_cast<double>(x.size());
  for (std::size_t a = 0; a < 3; ++a) {
    const auto v = axes[a];
    const double m = mean_of(v);
    s.mean[a] = m;
    s.std[a] = population_std(v, m);
    double aad = 0.0;
    for (double e : v) aad += std::abs(e - m);
    s.avg_abs_diff[a] = aad / n;
    s.time_between_peaks_ms[a] = time_between_peaks(v, period_ms);
    for (double e : v) s.bin_fractions[a][bin_index(e)] += 1.0;
    for (double& b : s.bin_fractions[a]) b /= n;
  }
  double res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    res += std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
  }
  s.avg_resultant = res / n;
  return s;
}

FeatureVector extract_features(const SampleWindow& window, const FeatureOptions& options) {
  const std::size_t n = window.samples.size();
  if (n < 2) throw Error("degenerate window");
  std::vector<double> x(n), y(n), z(n);
  bool gyro = options.include_gyro;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = window.samples[i];
    x[i] = s.ax;
    y[i] = s.ay;
    z[i] = s.az;
    gyro = gyro && s.gyro.has_value();
  }
  FeatureVector fv;
  fv.start_ts = window.start_ts;
  fv.end_ts = window.end_ts;
  fv.layout = feature_layout(gyro);
  fv.values.reserve(fv.layout->size());
  append_group_values(fv.values, axis_group_stats(x, y, z, options.period_ms));
  if (gyro) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& g = *window.samples[i].gyro;
      x[i] = g[0];
      y[i] = g[1];
      z[i] = g[2];
    }
    append_group_values(fv.values, axis_group_stats(x, y, z, options.period_ms));
  }
  return fv;
}

std::vector<FeatureVector> extract_features_serial(std::span<const SampleWindow> windows,
                                                   const FeatureOptions& options) {
  std::vector<FeatureVector> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(extract_features(w, options));
  return out;
}

std::vector<FeatureVector> extract_features_parallel(std::span<const SampleWindow> windows,
                                                     const FeatureOptions& options) {
  std::vector<FeatureVector> out(windows.size());
  const auto n = static_cast<std::ptrdiff_t>(windows.size());
  // Exceptions must not escape an OpenMP region; keep the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = extract_features(windows[static_cast<std::size_t>(i)], options);
    } catch (...) {
#pragma omp critical(ambiact_features_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::string format_features(std::span<const FeatureVector> rows) {
  std::string out;
  const std::vector<std::string> names =
      rows.empty() ? feature_names(false) : rows.front().names();
  out += "# layout=";
  out += kFeatureLayoutVersion;
  out += " count=" + std::to_string(names.size()) + "\n";
  out += "start_ts,end_ts";
  for (const auto& n : names) out += "," + n;
  out += "\n";
  for (const auto& r : rows) {
    if (r.layout != rows.front().layout && r.names() != names) throw Error("feature rows with mixed layouts");
    out += std::to_string(r.start_ts) + "," + std::to_string(r.end_ts);
    for (double v : r.values) {
      out += ',';
      out += io::format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<FeatureVector> parse_features(const std::vector<std::string>& lines,
                                          std::string_view source_name) {
  const std::string src(source_name);
  std::vector<FeatureVector> rows;
  FeatureVector::Layout layout;
  bool have_header = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = io::trim(lines[ln]);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.find(kFeatureLayoutVersion) == std::string_view::npos) {
        throw ParseError(src, ln + 1, "unsupported feature layout");
      }
      continue;
    }
    auto fields = io::split(line, ',');
    if (!have_header) {
      if (fields.size() < 3 || fields[0] != "start_ts" || fields[1] != "end_ts") {
        throw ParseError(src, ln + 1, "missing feature header");
      }
      std::vector<std::string> names(fields.begin() + 2, fields.end());
      layout = names == *feature_layout(false)  ? feature_layout(false)
               : names == *feature_layout(true) ? feature_layout(true)
                                                : std::make_shared<const std::vector<std::string>>(
                                                      std::move(names));
      have_header = true;
      continue;
    }
    if (fields.size() != layout->size() + 2) {
      throw ParseError(src, ln + 1, "expected " + std::to_string(layout->size() + 2) +
                                        " fields, got " + std::to_string(fields.size()));
    }
    FeatureVector fv;
    fv.layout = layout;
    try {
      fv.start_ts = io::parse_int(fields[0]);
      fv.end_ts = io::parse_int(fields[1]);
      fv.values.reserve(layout->size());
      for (std::size_t i = 2; i < fields.size(); ++i) fv.values.push_back(io::parse_double(fields[i]));
    } catch (const Error& e) {
      throw ParseError(src, ln + 1, e.what());
    }
    rows.push_back(std::move(fv));
  }
  if (!have_header) throw ParseError(src, 0, "missing feature header");
  return rows;
}

std::vector<FeatureVector> read_features(const std::filesystem::path& path) {
  return parse_features(io::read_lines(path), path.string());
}

}  // namespace ambiact
