#pragma once

// The number set the ghost-suppression calibration runs over: a contiguous
// band above 10^4, the four-prime benchmark 157573, and 100 deterministic
// pseudo-random semiprimes below 10^8.  The fixture generator and the
// acceptance gate must walk exactly the same set, so it is built here once.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "oracles.hpp"

namespace calibration {

inline constexpr std::uint64_t semiprime_seed = 20250814;

inline std::vector<std::uint64_t> numbers() {
  std::vector<std::uint64_t> set;
  for (std::uint64_t n = 10000; n <= 10100; ++n) set.push_back(n);
  set.push_back(157573);

  std::mt19937_64 eng(semiprime_seed);
  std::set<std::uint64_t> semiprimes;
  while (semiprimes.size() < 100) {
    std::uint64_t p = 2 + eng() % 9998;  // keep q's range non-empty
    if (!oracles::is_prime_u64(p)) continue;
    const std::uint64_t hi = 100000000ull / p;
    std::uint64_t q = p + eng() % (hi - p + 1);
    if (!oracles::is_prime_u64(q)) continue;
    const std::uint64_t n = p * q;
    if (n <= 10100) continue;  // keep the bands disjoint
    semiprimes.insert(n);
  }
  set.insert(set.end(), semiprimes.begin(), semiprimes.end());
  return set;
}

}  // namespace calibration
