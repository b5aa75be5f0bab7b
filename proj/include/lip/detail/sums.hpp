#pragma once

// Small numeric helpers shared across the library.
//
// The reversal-invariant sums below exist for one reason: the binomial-family
// builders promise an *exact* mirror symmetry (theta -> 1-theta, x -> N-x,
// y -> M-y maps the probability tensor onto itself bit-for-bit), and the
// information functional promises to respect it.  Mirroring a tensor row
// reverses its flattened traversal order, and plain floating-point summation
// is order-sensitive, so every reduction feeding the information functional
// adds elements pairwise from both ends (a+b == b+a holds exactly in IEEE
// arithmetic) with Neumaier compensation on top for accuracy.

#include <cmath>
#include <cstddef>
#include <span>

namespace lip::detail {

class NeumaierAccumulator {
 public:
  void add(double term) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
  }
  double total() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Compensated sum of f(0..n-1), bitwise invariant under index reversal
// (f(i) <-> f(n-1-i)).  Pairs are added innermost so reversal only swaps the
// operands of a single IEEE addition.
template <class F>
double reversal_invariant_sum(std::size_t n, F&& f) {
  NeumaierAccumulator acc;
  std::size_t a = 0, b = n;
  while (a < b) {
    --b;
    acc.add(a == b ? f(a) : f(a) + f(b));
    ++a;
  }
  return acc.total();
}

inline double reversal_invariant_sum(std::span<const double> v) {
  return reversal_invariant_sum(v.size(), [&](std::size_t i) { return v[i]; });
}

template <class F>
double compensated_sum(std::size_t n, F&& f) {
  NeumaierAccumulator acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(f(i));
  return acc.total();
}

// x*log(x) with the 0*log(0) = 0 convention.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace lip::detail
