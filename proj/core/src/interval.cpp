#include "rentbound/interval.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace rentbound {

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_) {
    throw std::invalid_argument("malformed interval: lo " + to_exact_string(lo_) + " > hi " +
                                to_exact_string(hi_));
  }
}

Interval Interval::point(Rational value) {
  Rational copy = value;
  return Interval(std::move(copy), std::move(value));
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  const Rational& lo = std::max(a.lo(), b.lo());
  const Rational& hi = std::min(a.hi(), b.hi());
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

bool overlaps(const Interval& a, const Interval& b) {
  return std::max(a.lo(), b.lo()) <= std::min(a.hi(), b.hi());
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(a.lo() + b.lo(), a.hi() + b.hi());
}

Interval operator*(const Interval& a, const Interval& b) {
  const Rational p1 = a.lo() * b.lo();
  const Rational p2 = a.hi() * b.hi();
  const Rational p3 = a.hi() * b.lo();
  const Rational p4 = a.lo() * b.hi();
  return Interval(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

Interval scale(const Rational& c, const Interval& iv) {
  Rational a = c * iv.lo();
  Rational b = c * iv.hi();
  if (a > b) std::swap(a, b);
  return Interval(std::move(a), std::move(b));
}

std::string to_string(const Interval& iv) {
  return "[" + to_exact_string(iv.lo()) + ", " + to_exact_string(iv.hi()) + "]";
}

std::ostream& operator<<(std::ostream& os, const Interval& iv) { return os << to_string(iv); }

}  // namespace rentbound
