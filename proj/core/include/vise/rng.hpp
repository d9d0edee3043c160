#pragma once

#include <array>
#include <cstdint>

namespace vise::mc {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). Pure function of (counter, key).
PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key) noexcept;

/// Counter-based variate stream keyed by (seed, stream_id).
///
/// The seed is the Philox key; the stream id occupies the high half of the
/// 128-bit counter and the block index the low half, so streams with
/// different ids never overlap and any stream can be regenerated without
/// replaying the others.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform variate on the open interval (0, 1), 53 bits of resolution.
  double next_uniform() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const noexcept { return position_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t position_ = 0;
  PhiloxBlock buffer_{};
};

}  // namespace vise::mc
