#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pairlink {

using Rng = std::mt19937_64;

// Derives an independent stream seed from a run seed and a purpose tag, so
// that e.g. the split and the dropout masks never share a generator.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose);

inline Rng make_rng(std::uint64_t seed, std::string_view purpose) {
  return Rng(derive_seed(seed, purpose));
}

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace pairlink
