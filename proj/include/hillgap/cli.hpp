// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface of `hillgap`. The entry point lives in the library so
// tests can drive it in-process.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hillgap::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kFileIO = 3,
  kSolver = 4,
  kCheckFailed = 5,
  kContour = 6,
};

struct RunConfig {
  std::string command;
  int m = 1;
  double alpha = 0.0;
  std::optional<int> K;                ///< empty: automatic
  std::optional<long> n_max;           ///< empty: command default
  long n_min = 2;                      ///< riesz-check lower index
  double R = 1.0;
  double C = 1.1;
  double epsilon = 0.05;
  std::uint64_t seed = 1;
  int quad_nodes = 64;
  std::string potential_path;          ///< empty: --random family or zero potential
  std::string random_family;           ///< "", "rough", "smooth"
  bool real_valued = false;
  long support = 512;
  std::optional<double> power;         ///< rough family: |2k|^power, no rescale
  double bound_scale = 1.0;            ///< lemmas: multiplies every bound
  std::string output_path;             ///< empty: standard output
  std::string format = "csv";

  /// Throws hillgap::PreconditionError naming the offending field.
  void validate() const;
  /// One-line key=value echo used in output headers.
  std::string echo() const;
};

/// Tabular command output with metadata and a footer of named results.
struct Report {
  std::vector<std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> footer;
};

/// %.17g, round-trip exact for binary64.
std::string format_double(double x);

void write_csv(std::ostream& os, const Report& report, const std::string& incomplete = {});
void write_json(std::ostream& os, const Report& report, const std::string& incomplete = {});

/// Runs `hillgap <args...>` (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace hillgap::cli
