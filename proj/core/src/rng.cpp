#include "momtensor/rng.hpp"

#include <cmath>

namespace momtensor {

double NormalStream::uniform_open_signed() {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

double NormalStream::next() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = uniform_open_signed();
    v = uniform_open_signed();
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  return u * factor;
}

void NormalStream::fill(std::span<double> out) {
  for (double& x : out) x = next();
}

}  // namespace momtensor
