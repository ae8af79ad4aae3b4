#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace fbmlt {

/// Philox4x32-10 counter-based block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Reproducible random stream addressed by (master seed, stream index, lane).
/// The output is a pure function of the address and the draw position, so
/// ensembles give identical bits under any parallel schedule.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t lane = 0) noexcept
      : seed_(seed), stream_(stream), lane_(lane) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint32_t lane() const noexcept { return lane_; }

  /// Independent sibling stream with the same (seed, stream) and another lane.
  RngStream with_lane(std::uint32_t lane) const noexcept { return {seed_, stream_, lane}; }

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  void fill_normal(std::span<double> out) noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint32_t lane_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fbmlt
