#include "tonline/dyadic.hpp"

#include <cmath>
#include <limits>

namespace tonline {

void Dyadic::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  const auto tz = static_cast<std::int64_t>(boost::multiprecision::lsb(boost::multiprecision::abs(num_)));
  if (tz > 0) {
    num_ >>= static_cast<unsigned>(tz);
    exp_ -= tz;
  }
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  if (exp_ >= o.exp_) return Dyadic(num_ + (o.num_ << static_cast<unsigned>(exp_ - o.exp_)), exp_);
  return Dyadic((num_ << static_cast<unsigned>(o.exp_ - exp_)) + o.num_, o.exp_);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + Dyadic(-o.num_, o.exp_); }

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  Dyadic::Int l = a.num_, r = b.num_;
  if (a.exp_ > b.exp_) {
    r <<= static_cast<unsigned>(a.exp_ - b.exp_);
  } else {
    l <<= static_cast<unsigned>(b.exp_ - a.exp_);
  }
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

long double Dyadic::log2() const {
  if (num_ <= 0) return -std::numeric_limits<long double>::infinity();
  const auto bits = static_cast<std::int64_t>(boost::multiprecision::msb(num_)) + 1;
  const std::int64_t drop = bits > 60 ? bits - 60 : 0;
  const Int top = num_ >> static_cast<unsigned>(drop);
  return std::log2(static_cast<long double>(top.convert_to<std::uint64_t>())) + static_cast<long double>(drop - exp_);
}

long double Dyadic::to_long_double() const {
  if (num_ == 0) return 0.0L;
  const long double v = std::exp2(log2());
  return num_ < 0 ? -std::exp2(Dyadic(-num_, exp_).log2()) : v;
}

std::string Dyadic::to_string() const { return num_.str() + "/2^" + std::to_string(exp_); }

}  // namespace tonline
