#pragma once

#include <cstdint>
#include <limits>

#include "reciprosim/error.hpp"

namespace reciprosim {

using AgentId = std::uint32_t;    // dense, 0..N-1
using TokenId = std::uint32_t;    // unique per run
using ProjectId = std::uint32_t;  // unique per run
using Tick = std::uint32_t;
using Seq = std::uint32_t;

// Amounts are non-negative integers; signed storage so deltas are expressible,
// with the >= 0 invariant enforced at every mutation site. Overflow is a hard
// error, never a wrap.
using Amount = std::int64_t;

inline Amount checked_add(Amount a, Amount b) {
  Amount r;
  if (__builtin_add_overflow(a, b, &r)) fail(Err::Overflow, "amount addition overflow");
  return r;
}

inline Amount checked_sub(Amount a, Amount b) {
  Amount r;
  if (__builtin_sub_overflow(a, b, &r)) fail(Err::Overflow, "amount subtraction overflow");
  return r;
}

inline Amount checked_mul(Amount a, Amount b) {
  Amount r;
  if (__builtin_mul_overflow(a, b, &r)) fail(Err::Overflow, "amount multiplication overflow");
  return r;
}

// 64-bit FNV-1a. Used for config digests in log headers.
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

}  // namespace reciprosim
