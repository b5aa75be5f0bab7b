#pragma once

// Extended nonnegative reals [0, +inf].  Kullback-Leibler style averages are
// provably >= 0, so tiny negative floating-point residue is clamped to zero;
// anything materially negative is a logic error upstream.

#include <cassert>
#include <compare>
#include <limits>

namespace lip {

class ExtendedReal {
 public:
  ExtendedReal() = default;
  ExtendedReal(double v) : v_(v) {  // NOLINT: implicit by design
    assert(!(v < -1e-9) && "extended real built from a materially negative value");
    if (v_ < 0.0) v_ = 0.0;
  }

  static ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  bool is_finite() const { return v_ != std::numeric_limits<double>::infinity(); }
  double value() const { return v_; }

  ExtendedReal& operator+=(ExtendedReal rhs) {
    v_ += rhs.v_;
    return *this;
  }
  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) { return a += b; }

  // w * r with the 0 * inf = 0 convention used by Bayes-risk averages.
  static ExtendedReal weighted(double w, ExtendedReal r) {
    assert(w >= 0.0);
    if (w == 0.0) return ExtendedReal(0.0);
    return ExtendedReal(w * r.v_);
  }

  friend auto operator<=>(ExtendedReal a, ExtendedReal b) { return a.v_ <=> b.v_; }
  friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.v_ == b.v_; }

 private:
  double v_ = 0.0;
};

}  // namespace lip
