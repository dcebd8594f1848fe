#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>

namespace momtensor {

/// Seeded stream of standard normal variates.
///
/// Uniforms come from std::mt19937_64 (whose output sequence is fixed by the
/// C++ standard) using the top 53 bits of each draw; normals are produced in
/// pairs by the Marsaglia polar method. The sequence for a given seed is
/// therefore identical across standard libraries, up to the last-bit
/// behaviour of std::log and std::sqrt.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next();
  void fill(std::span<double> out);

 private:
  double uniform_open_signed();

  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace momtensor
