#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sbf {

/// One row of benchmark output.
struct BenchRecord {
  std::string method;
  double sigma_s = 0.0;
  double sigma_r = 0.0;
  double epsilon = 0.0;
  double T = 0.0;
  int N = 0;
  int M = 0;
  int retained_terms = 0;  // N - 2M + 1
  double wall_millis = 0.0;
  std::optional<double> mse_vs_direct;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

inline constexpr int kBenchColumns = 10;

std::string bench_csv_header();
std::string to_csv_row(const BenchRecord& record);

/// Parses CSV produced by bench_csv_header()/to_csv_row(); the header row is
/// required. Throws InvalidParameter on malformed input.
std::vector<BenchRecord> parse_bench_csv(std::string_view text);

std::string to_human(const BenchRecord& record);

}  // namespace sbf
