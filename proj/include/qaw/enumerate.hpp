#pragma once

#include "qaw/error.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qaw {

// A total function between finite carriers, stored as its table.
using PointMap = std::vector<std::size_t>;

// Default enumeration bound for function spaces and similar searches.
inline constexpr std::uint64_t kDefaultMaxMaps = 10'000'000;

// base^exp, throwing BoundExceeded once the value exceeds `bound`.
inline std::uint64_t bounded_power(std::uint64_t base, std::uint64_t exp,
                                   std::uint64_t bound, const std::string& what) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && result > bound / base) {
      throw BoundExceeded(what, bound + 1, bound);
    }
    result *= base;
    if (result > bound) throw BoundExceeded(what, result, bound);
  }
  return result;
}

// Mixed-radix encoding with the first digit most significant.
inline std::size_t encode_tuple(std::span<const std::size_t> digits, std::size_t radix) {
  std::size_t code = 0;
  for (auto d : digits) code = code * radix + d;
  return code;
}

inline void decode_tuple(std::size_t code, std::size_t radix, std::span<std::size_t> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = code % radix;
    code /= radix;
  }
}

inline std::size_t tuple_count(std::size_t radix, std::size_t length) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < length; ++i) n *= radix;
  return n;
}

// Steps `digits` to the next tuple in lexicographic order; returns false
// after the last one.
inline bool next_tuple(std::span<std::size_t> digits, std::size_t radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix) return true;
    digits[i] = 0;
  }
  return false;
}

// Calls fn(const PointMap&) for every function {0..domain-1} -> {0..codomain-1}
// in lexicographic order. Stops early when fn returns false.
template <class Fn>
void for_each_function(std::size_t domain, std::size_t codomain, std::uint64_t bound,
                       Fn&& fn) {
  bounded_power(codomain, domain, bound, "function enumeration");
  if (codomain == 0 && domain > 0) return;
  PointMap table(domain, 0);
  do {
    if (!fn(static_cast<const PointMap&>(table))) return;
  } while (next_tuple(table, codomain));
}

inline PointMap compose(const PointMap& second, const PointMap& first) {
  PointMap out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = second[first[i]];
  return out;
}

inline PointMap identity_map(std::size_t n) {
  PointMap out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace qaw
