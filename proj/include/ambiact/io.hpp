#pragma once

// Small text helpers shared by the file formats: CSV splitting, strict number
// parsing and shortest round-trip double formatting.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ambiact::io {

/// Splits on a single-character delimiter; no quoting.
std::vector<std::string> split(std::string_view line, char delim);

std::string_view trim(std::string_view s);

/// Full-string parses; throw ambiact::Error on trailing junk or overflow.
double parse_double(std::string_view s);
std::int64_t parse_int(std::string_view s);

/// Shortest representation that round-trips bit-exactly.
std::string format_double(double v);

/// Reads all lines of a file (without terminators, CR stripped).
std::vector<std::string> read_lines(const std::filesystem::path& path);
std::vector<std::string> read_lines(std::istream& in);

/// Writes text to a file, replacing it. Throws on I/O failure.
void write_file(const std::filesystem::path& path, std::string_view text);

/// Lower-cases ASCII and collapses internal whitespace runs to one space.
std::string normalize_key(std::string_view s);

}  // namespace ambiact::io
