// Counter-based, splittable 64-bit random stream.
//
// Algorithm (stable across releases and reimplementable in any language):
//
//   mix(z):  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//            z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//            return z ^ (z >> 31)                      (SplitMix64 finalizer)
//   bits(key, i)    = mix(key + (i + 1) * 0x9e3779b97f4a7c15)   (mod 2^64)
//   uniform(key, i) = (bits(key, i) >> 11) * 2^-53               in [0, 1)
//   split(key, id)  = mix(key ^ mix(id + 0x9e3779b97f4a7c15))
//
// Draw i of a stream depends only on (key, i), so per-trial draws can be
// taken in any order or in parallel and still reproduce bit-for-bit.

#ifndef BOHM_RNG_HPP_
#define BOHM_RNG_HPP_

#include <cstdint>

namespace bohm {

class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z);

  std::uint64_t key() const { return key_; }
  std::uint64_t bits(std::uint64_t counter) const;
  double uniform(std::uint64_t counter) const;
  CounterRng split(std::uint64_t stream_id) const;

 private:
  std::uint64_t key_;
};

}  // namespace bohm

#endif  // BOHM_RNG_HPP_
