#include "qaw/dist.hpp"

#include "qaw/error.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace qaw {

Dist::Dist(long long n) : value_(n) {
  if (n < 0) throw InputError("negative distance");
}

Dist::Dist(long long num, long long den) {
  if (den == 0) throw InputError("zero denominator");
  value_ = Rational(num, den);
  if (value_ < 0) throw InputError("negative distance");
}

Dist::Dist(Rational value) : value_(std::move(value)) {
  if (value_ < 0) throw InputError("negative distance");
}

const Rational& Dist::value() const {
  if (inf_) throw std::logic_error("value() of infinite distance");
  return value_;
}

Dist operator+(const Dist& a, const Dist& b) {
  if (a.inf_ || b.inf_) return Dist::inf();
  return Dist(a.value_ + b.value_);
}

bool operator==(const Dist& a, const Dist& b) {
  if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Dist& a, const Dist& b) {
  if (a.inf_ || b.inf_) return a.inf_ <=> b.inf_;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (b.value_ < a.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Dist::to_string() const {
  if (inf_) return "inf";
  auto num = boost::multiprecision::numerator(value_);
  auto den = boost::multiprecision::denominator(value_);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

}  // namespace

Dist Dist::parse(std::string_view text) {
  text = trim(text);
  if (text == "inf") return Dist::inf();
  if (!text.empty() && text.front() == '-')
    throw InputError("negative distance '" + std::string(text) + "'");
  auto slash = text.find('/');
  auto num_text = text.substr(0, slash);
  auto den_text =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(num_text) || !all_digits(den_text))
    throw InputError("malformed distance '" + std::string(text) + "'");
  boost::multiprecision::cpp_int num{std::string(num_text)};
  boost::multiprecision::cpp_int den{std::string(den_text)};
  if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  return Dist(Rational(num, den));
}

std::ostream& operator<<(std::ostream& os, const Dist& d) {
  return os << d.to_string();
}

}  // namespace qaw
