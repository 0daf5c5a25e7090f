#pragma once

#include "tma/lang/parser.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace tma::testing {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  return text.str();
}

inline std::filesystem::path program_path(const std::string& name) {
  return std::filesystem::path(TMA_PROGRAMS_DIR) / name;
}

inline Program load_program(const std::string& name) {
  return parse(read_file(program_path(name)));
}

/// Every `.mt` file of the corpus, sorted by name.
inline std::vector<std::string> corpus() {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(TMA_PROGRAMS_DIR)) {
    if (entry.path().extension() == ".mt") names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

inline const char* const kMessage = "y:=0; z:=0; create { y := y+z }; z := 3";
inline const char* const kInterfere = "create { y := 3 }; y := 1; z := y";
inline const char* const kSpawnLoop = "x:=0; while (?) { create { x := x+1 } }";

}  // namespace tma::testing
