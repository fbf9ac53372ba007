#pragma once

// Exact dyadic rationals num / 2^exp.

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <string>

namespace tonline {

class Dyadic {
 public:
  using Int = boost::multiprecision::cpp_int;

  Dyadic() = default;
  Dyadic(Int num, std::int64_t exp) : num_(std::move(num)), exp_(exp) { normalize(); }
  static Dyadic one() { return Dyadic(1, 0); }
  /// 2^-k
  static Dyadic inv_pow2(std::int64_t k) { return Dyadic(1, k); }

  const Int& numerator() const { return num_; }
  std::int64_t exponent() const { return exp_; }
  bool is_zero() const { return num_ == 0; }

  /// this * 2^-k
  Dyadic shifted(std::int64_t k) const { return Dyadic(num_, exp_ + k); }
  Dyadic operator*(std::uint64_t m) const { return Dyadic(num_ * m, exp_); }
  Dyadic operator+(const Dyadic& o) const;
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic operator-(const Dyadic& o) const;

  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.exp_ == b.exp_ && a.num_ == b.num_; }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  /// log2 of the value (approximate; -inf for zero).
  long double log2() const;
  long double to_long_double() const;
  std::string to_string() const;

 private:
  void normalize();
  Int num_ = 0;
  std::int64_t exp_ = 0;
};

}  // namespace tonline
