#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace gossip {

// Deterministic random stream. One instance per run / per builder call;
// never shared between threads. Every helper documents exactly how many
// raw draws it consumes so that trace reproducibility arguments stay easy.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform index in [0, m). Exactly one draw (multiply-shift reduction;
  // the bias is on the order of m / 2^64, far below anything observable).
  int uniform_index(int m) {
    const auto wide = static_cast<unsigned __int128>(gen_()) * static_cast<unsigned __int128>(m);
    return static_cast<int>(wide >> 64);
  }

  // Uniform double in [0, 1). Exactly one draw.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller. Exactly two draws, no cached spare,
  // so the draw count per call never depends on history.
  double standard_normal() {
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;          // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace gossip
