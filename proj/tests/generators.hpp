#pragma once

#include "rcalc/engine/derivation.hpp"
#include "rcalc/numlab/weight.hpp"
#include "rcalc/numlab/ball.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace rcalc::test {

// Hand-rolled generators over a fixed-seed engine.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Rational rational(int span = 20, int max_den = 12) { return Rational(integer(-span, span), integer(1, max_den)); }
  Rational nonzero_rational() {
    for (;;)
      if (Rational q = rational(); q != 0) return q;
  }

  Exponent endpoint() {
    int k = integer(0, 9);
    if (k == 0) return Exponent::neg_inf();
    if (k == 1) return Exponent::pos_inf();
    return Exponent(rational());
  }

  ExponentPair pair() {
    for (;;) {
      Exponent a = endpoint(), b = endpoint();
      if (a < b) return {a, b};
      if (b < a) return {b, a};
    }
  }

  WeightExpr subject() {
    static const char* atoms[] = {"u", "v", "w"};
    WeightExpr s = WeightExpr::atom(atoms[integer(0, 2)]);
    if (coin()) s = s * WeightExpr::atom(atoms[integer(0, 2)]).pow(nonzero_rational());
    return s.is_unit() ? WeightExpr::atom("w") : s;
  }

  ConstExpr constant() {
    static const char* names[] = {"C", "C1", "C2", "D"};
    ConstExpr c = ConstExpr::named(names[integer(0, 3)]).pow(Rational(integer(1, 6), integer(1, 4)));
    if (coin()) c = c * ConstExpr::named(names[integer(0, 3)]);
    return c;
  }

  RCFact fact(bool allow_weak = true) {
    Strength st = allow_weak && integer(0, 3) == 0 ? Strength::Weak : Strength::Strong;
    return {subject(), pair(), constant(), st};
  }

  // A positive weight on (-1, 1) from the closed-form corpus.
  numlab::Weight weight(bool smooth = false) {
    using numlab::Weight;
    int k = integer(0, smooth ? 2 : 4);
    switch (k) {
      case 0: return Weight::constant(real(0.2, 3));
      case 1: return Weight::power(real(0.1, 2), real(1.2, 2), real(0.5, 2));  // singularity outside
      case 2: {
        double b = real(-0.5, 0.5);
        return Weight::piecewise({b}, {real(0.3, 2), real(0.3, 2)});
      }
      case 3: return Weight::power(real(-0.9, 3), real(-0.5, 0.5));
      default: return Weight::max({Weight::power(real(0.2, 2), real(-0.3, 0.3)), Weight::constant(real(0.05, 0.5))});
    }
  }

  numlab::Ball ball() {
    double c = real(-0.6, 0.6);
    double top = (1 - std::abs(c)) / 2;
    return {c, top * std::pow(10.0, -real(0, 3))};
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace rcalc::test
