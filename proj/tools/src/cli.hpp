#pragma once

#include <iosfwd>

namespace momtensor::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kCompareFailed = 1,
  kUsage = 2,
  kBadParameters = 3,
  kShapeOrGuard = 4,
};

/// Parses argv and runs one subcommand. Tensors and diagnostics go to
/// `out` and `err` unless -o names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace momtensor::cli
