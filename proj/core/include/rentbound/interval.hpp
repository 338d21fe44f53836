#pragma once

#include "rentbound/rational.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace rentbound {

/// Closed rational interval [lo, hi] with lo <= hi. There is no empty
/// interval value: operations that may produce one return std::optional.
class Interval {
 public:
  /// Throws std::invalid_argument when lo > hi.
  Interval(Rational lo, Rational hi);

  static Interval point(Rational value);

  const Rational& lo() const noexcept { return lo_; }
  const Rational& hi() const noexcept { return hi_; }

  bool is_singleton() const { return lo_ == hi_; }
  bool contains(const Rational& value) const { return lo_ <= value && value <= hi_; }
  bool contains(const Interval& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }
  Rational width() const { return hi_ - lo_; }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  Rational lo_;
  Rational hi_;
};

/// [max(a.lo, b.lo), min(a.hi, b.hi)], or nullopt when that is empty.
std::optional<Interval> intersect(const Interval& a, const Interval& b);
bool overlaps(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

Interval operator+(const Interval& a, const Interval& b);
/// Four-product multiplication: [min, max] of {a.lo*b.lo, a.lo*b.hi, a.hi*b.lo, a.hi*b.hi}.
Interval operator*(const Interval& a, const Interval& b);
/// c * [lo, hi] = [min(c*lo, c*hi), max(c*lo, c*hi)].
Interval scale(const Rational& c, const Interval& iv);

/// "[lo, hi]" using exact rationals.
std::string to_string(const Interval& iv);
std::ostream& operator<<(std::ostream& os, const Interval& iv);

}  // namespace rentbound
