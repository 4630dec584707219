#include "bohm/rng.hpp"

namespace bohm {

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const { return mix(key_ + (counter + 1) * kGamma); }

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

CounterRng CounterRng::split(std::uint64_t stream_id) const { return CounterRng(mix(key_ ^ mix(stream_id + kGamma))); }

}  // namespace bohm
