#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace qaw {

using Rational = boost::multiprecision::cpp_rational;

// A distance: an exact nonnegative rational, or infinity.
class Dist {
 public:
  Dist() = default;
  Dist(long long n);
  Dist(long long num, long long den);
  explicit Dist(Rational value);

  static Dist inf() {
    Dist d;
    d.inf_ = true;
    return d;
  }
  static Dist zero() { return Dist(); }

  bool is_inf() const noexcept { return inf_; }
  bool is_zero() const noexcept { return !inf_ && value_ == 0; }
  bool is_finite() const noexcept { return !inf_; }

  // Throws std::logic_error on infinity.
  const Rational& value() const;

  friend Dist operator+(const Dist& a, const Dist& b);
  Dist& operator+=(const Dist& other) { return *this = *this + other; }

  friend bool operator==(const Dist& a, const Dist& b);
  friend std::strong_ordering operator<=>(const Dist& a, const Dist& b);

  // "p/q", "p" for integers, "inf".
  std::string to_string() const;

  // Accepts "inf", "p", "p/q" with optional surrounding blanks. Rejects
  // negative values and zero denominators.
  static Dist parse(std::string_view text);

 private:
  Rational value_ = 0;
  bool inf_ = false;
};

inline const Dist& dmax(const Dist& a, const Dist& b) { return a < b ? b : a; }
inline const Dist& dmin(const Dist& a, const Dist& b) { return b < a ? b : a; }

std::ostream& operator<<(std::ostream& os, const Dist& d);

}  // namespace qaw
