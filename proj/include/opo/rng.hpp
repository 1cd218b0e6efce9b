#pragma once

#include <array>
#include <cstdint>

namespace opo {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key);
};

/// Standard normal variates for one substream. The substream is keyed by the
/// 64-bit seed and indexed by `stream` in the counter, so every trajectory
/// gets the same numbers whichever thread runs it.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream);

  double next();

  /// Uniform on (0, 1), 53-bit resolution; never returns 0.
  double uniform();

 private:
  void refill();

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace opo
