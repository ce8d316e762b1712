#pragma once

#include <cstdint>

namespace reciprosim {

// splitmix64. One instance per purpose (decision draws, shock rolls) so that
// paired counterfactual runs share identical shock streams even when their
// decision paths diverge. Draw discipline is part of the log contract:
//   decision stream: one draw each time select_partner reaches the stranger
//     branch with at least one stranger present (regardless of p0's value);
//   shock stream: one draw per agent per tick, ascending id, regardless of
//     outcome (regardless of p_shock's value).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4b9b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Stream salts: decision and shock streams are independent functions of the
// run seed. Constants are arbitrary odd 64-bit values, fixed forever.
inline SplitMix64 decision_stream(std::uint64_t seed) {
  return SplitMix64(seed ^ 0xa02b9fe5c3f7d21dull);
}
inline SplitMix64 shock_stream(std::uint64_t seed) {
  return SplitMix64(seed ^ 0x51c64b3a8d0e97f3ull);
}

}  // namespace reciprosim
