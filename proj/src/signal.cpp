#include "ambiact/signal.hpp"

#include <cmath>
#include <map>

#include "ambiact/error.hpp"
#include "ambiact/io.hpp"

namespace ambiact {

namespace {

double lerp(double a, double b, double frac) { return a + (b - a) * frac; }

TriaxialSample interpolate(const TriaxialSample& lo, const TriaxialSample& hi, TimestampMs ts) {
  if (ts == lo.ts) return lo;
  if (ts == hi.ts) return hi;
  const double frac = static_cast<double>(ts - lo.ts) / static_cast<double>(hi.ts - lo.ts);
  TriaxialSample s;
  s.ts = ts;
  s.ax = lerp(lo.ax, hi.ax, frac);
  s.ay = lerp(lo.ay, hi.ay, frac);
  s.az = lerp(lo.az, hi.az, frac);
  if (lo.gyro && hi.gyro) {
    s.gyro = std::array<double, 3>{lerp((*lo.gyro)[0], (*hi.gyro)[0], frac),
                                   lerp((*lo.gyro)[1], (*hi.gyro)[1], frac),
                                   lerp((*lo.gyro)[2], (*hi.gyro)[2], frac)};
  }
  return s;
}

// Resamples samples[first, last] onto the grid anchored at samples[first].ts.
SampleSeries resample_run(const SampleSeries& series, std::size_t first, std::size_t last) {
  SampleSeries out;
  out.subject_id = series.subject_id;
  out.nominal_period_ms = series.nominal_period_ms;
  const auto& in = series.samples;
  const TimestampMs t0 = in[first].ts;
  const TimestampMs t_end = in[last].ts;
  const std::int64_t period = series.nominal_period_ms;
  out.samples.reserve(static_cast<std::size_t>((t_end - t0) / period + 1));
  std::size_t j = first;
  for (TimestampMs t = t0; t <= t_end; t += period) {
    while (j + 1 <= last && in[j + 1].ts <= t) ++j;
    // in[j].ts <= t <= t_end, so in[j + 1] exists whenever in[j].ts < t.
    out.samples.push_back(in[j].ts == t ? in[j] : interpolate(in[j], in[j + 1], t));
  }
  return out;
}

}  // namespace

std::vector<SampleSeries> interpolate_gaps(const SampleSeries& series, std::int64_t max_gap_ms) {
  if (series.samples.empty()) throw Error("empty input");
  if (series.nominal_period_ms <= 0) throw Error("nominal period must be positive");
  if (max_gap_ms <= 0) throw Error("max_gap_ms must be positive");
  const auto& in = series.samples;
  for (std::size_t i = 1; i < in.size(); ++i) {
    if (in[i].ts <= in[i - 1].ts) {
      throw Error("timestamps not strictly increasing at index " + std::to_string(i));
    }
  }
  std::vector<SampleSeries> segments;
  std::size_t first = 0;
  for (std::size_t i = 1; i <= in.size(); ++i) {
    if (i == in.size() || in[i].ts - in[i - 1].ts > max_gap_ms) {
      segments.push_back(resample_run(series, first, i - 1));
      first = i;
    }
  }
  return segments;
}

std::size_t hop_length(std::size_t window_len, double overlap_frac) {
  if (!(overlap_frac >= 0.0 && overlap_frac < 1.0)) throw Error("overlap must be in [0,1)");
  const double hop = std::round(static_cast<double>(window_len) * (1.0 - overlap_frac));
  return hop < 1.0 ? 1 : static_cast<std::size_t>(hop);
}

std::vector<SampleWindow> segment(const SampleSeries& series, std::size_t window_len,
                                  double overlap_frac) {
  if (window_len == 0) throw Error("window length must be positive");
  const std::size_t hop = hop_length(window_len, overlap_frac);
  std::vector<SampleWindow> windows;
  const std::size_t n = series.samples.size();
  if (window_len > n) return windows;
  const std::span<const TriaxialSample> all(series.samples);
  windows.reserve((n - window_len) / hop + 1);
  for (std::size_t off = 0; off + window_len <= n; off += hop) {
    SampleWindow w;
    w.samples = all.subspan(off, window_len);
    w.start_ts = w.samples.front().ts;
    w.end_ts = w.samples.back().ts + series.nominal_period_ms;
    windows.push_back(w);
  }
  return windows;
}

std::vector<SampleSeries> parse_inertial(const std::vector<std::string>& lines,
                                         std::string_view source_name,
                                         std::int64_t nominal_period_ms) {
  std::vector<SampleSeries> out;
  std::map<std::string, std::size_t> index;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = io::trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    if (line.back() == ';') line.remove_suffix(1);
    const auto fields = io::split(line, ',');
    if (fields.size() != 6 && fields.size() != 9) {
      throw ParseError(std::string(source_name), ln + 1,
                       "expected 6 or 9 fields, got " + std::to_string(fields.size()));
    }
    TriaxialSample s;
    try {
      s.ts = io::parse_int(fields[2]);
      s.ax = io::parse_double(fields[3]);
      s.ay = io::parse_double(fields[4]);
      s.az = io::parse_double(fields[5]);
      if (fields.size() == 9) {
        s.gyro = std::array<double, 3>{io::parse_double(fields[6]), io::parse_double(fields[7]),
                                       io::parse_double(fields[8])};
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(std::string(source_name), ln + 1, e.what());
    }
    const std::string subject(io::trim(fields[0]));
    auto [it, inserted] = index.try_emplace(subject, out.size());
    if (inserted) {
      out.push_back(SampleSeries{subject, nominal_period_ms, {}});
    }
    auto& samples = out[it->second].samples;
    if (!samples.empty() && s.ts <= samples.back().ts) {
      throw ParseError(std::string(source_name), ln + 1,
                       "timestamp not increasing for subject '" + subject + "'");
    }
    samples.push_back(s);
  }
  return out;
}

std::vector<SampleSeries> read_inertial(const std::filesystem::path& path,
                                        std::int64_t nominal_period_ms) {
  return parse_inertial(io::read_lines(path), path.string(), nominal_period_ms);
}

void append_inertial(std::string& out, const SampleSeries& series,
                     std::span<const std::string> hints) {
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    const auto& s = series.samples[i];
    out += series.subject_id;
    out += ',';
    if (!hints.empty()) out += hints[i];
    out += ',';
    out += std::to_string(s.ts);
    out += ',';
    out += io::format_double(s.ax);
    out += ',';
    out += io::format_double(s.ay);
    out += ',';
    out += io::format_double(s.az);
    if (s.gyro) {
      for (double g : *s.gyro) {
        out += ',';
        out += io::format_double(g);
      }
    }
    out += ";\n";
  }
}

std::string format_inertial(std::span<const SampleSeries> series) {
  std::string out;
  for (const auto& s : series) append_inertial(out, s);
  return out;
}

SampleSeries concat_segments(std::span<const SampleSeries> segments) {
  SampleSeries out;
  if (segments.empty()) return out;
  out.subject_id = segments.front().subject_id;
  out.nominal_period_ms = segments.front().nominal_period_ms;
  for (const auto& seg : segments) {
    for (const auto& s : seg.samples) {
      if (!out.samples.empty() && s.ts <= out.samples.back().ts) {
        throw Error("segments overlap in time");
      }
      out.samples.push_back(s);
    }
  }
  return out;
}

}  // namespace ambiact
