#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ambiact/io.hpp"

namespace ambiact::support {

inline std::filesystem::path data_dir() { return AMBIACT_DATA_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ambiact_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::istringstream in(text);
  return io::read_lines(in);
}

/// Runs the CLI with stderr captured to `err_file`; returns the exit status.
inline int run_cli(const std::string& args, const std::filesystem::path& err_file) {
  const std::string cmd = std::string("\"") + AMBIACT_CLI + "\" " + args + " 2>\"" + err_file.string() + "\"";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace ambiact::support
