#pragma once

#include "tma/analyzer/analyzer.hpp"
#include "tma/domains/interval.hpp"
#include "tma/harness/generator.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace tma {

struct ComplexityRow {
  std::string id;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t w = 0;
  std::size_t transfer_count = 0;

  /// transfer_count / (n * w^(d+1))
  double constant() const {
    const double bound = static_cast<double>(n) *
                         std::pow(static_cast<double>(std::max<std::size_t>(w, 1)),
                                  static_cast<double>(d + 1));
    return static_cast<double>(transfer_count) / bound;
  }
};

inline ComplexityRow measure(const Program& program, const AnalysisSettings& settings,
                             std::string id) {
  auto result = analyze_program(program, IntervalDomain(program.vars()), settings);
  return {std::move(id), command_count(program.body()), nesting_depth(program),
          result.max_rounds, result.transfer_count};
}

struct SizedProgram {
  std::string id;
  Program program;
};

/// Sized programs for every (n, d) pair.
inline std::vector<SizedProgram> complexity_family(const std::vector<std::size_t>& sizes,
                                                   const std::vector<std::size_t>& depths,
                                                   std::uint64_t seed) {
  std::vector<SizedProgram> out;
  for (auto d : depths) {
    for (auto n : sizes) {
      out.push_back({"n" + std::to_string(n) + "-d" + std::to_string(d),
                     parse(sized_program_source(n, d, seed))});
    }
  }
  return out;
}

inline std::vector<ComplexityRow> measure_complexity(const std::vector<SizedProgram>& family,
                                                     const AnalysisSettings& settings) {
  std::vector<ComplexityRow> rows;
  for (const auto& p : family) rows.push_back(measure(p.program, settings, p.id));
  return rows;
}

inline double max_constant(const std::vector<ComplexityRow>& rows) {
  double c = 0;
  for (const auto& r : rows) c = std::max(c, r.constant());
  return c;
}

/// Least-squares slope of transfer_count against n through the origin,
/// over the rows of depth `d` with n in [lo, hi].
inline double slope(const std::vector<ComplexityRow>& rows, std::size_t d, std::size_t lo,
                    std::size_t hi) {
  double xy = 0, xx = 0;
  for (const auto& r : rows) {
    if (r.d != d || r.n < lo || r.n > hi) continue;
    xy += static_cast<double>(r.n) * static_cast<double>(r.transfer_count);
    xx += static_cast<double>(r.n) * static_cast<double>(r.n);
  }
  return xx == 0 ? 0 : xy / xx;
}

inline nlohmann::json to_json(const ComplexityRow& r) {
  return {{"id", r.id},
          {"n", r.n},
          {"d", r.d},
          {"w", r.w},
          {"transferCount", r.transfer_count},
          {"c", r.constant()}};
}

}  // namespace tma
