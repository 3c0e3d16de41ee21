#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace rcb {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The 128-bit counter is split into a 64-bit stream id (upper half) and a
/// 64-bit block index (lower half). Each replicate of a simulation gets its
/// own stream id, so replicate r draws the same numbers no matter which worker
/// evaluates it.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t key, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Raw bijection, exposed for known-answer tests.
  static Block generate_block(Block counter, Key key);

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  Block buffer_{};
  int buffered_ = 0;
};

/// Uniform double in the open interval (0, 1), 53-bit resolution.
double uniform_open(Philox4x32& eng);

/// Exponential(1) draw by inversion.
double standard_exponential(Philox4x32& eng);

/// Standard normal draw (Box-Muller, cosine branch only so one draw consumes
/// exactly two uniforms).
double standard_normal(Philox4x32& eng);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t hash_string(std::string_view s);
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);

/// Engine for replicate `replicate` of the simulation keyed by (seed, tag).
Philox4x32 replicate_engine(std::uint64_t seed, std::uint64_t tag, std::uint64_t replicate);

/// A named family of independent substreams, one per replicate index.
struct Stream {
  std::uint64_t seed = 0;
  std::uint64_t tag = 0;

  Philox4x32 engine(std::uint64_t replicate) const { return replicate_engine(seed, tag, replicate); }
  Stream derive(std::string_view label) const { return {seed, hash_combine(tag, hash_string(label))}; }
  Stream derive(std::uint64_t salt) const { return {seed, hash_combine(tag, salt)}; }
};

}  // namespace rcb
