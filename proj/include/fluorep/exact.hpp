#pragma once

#include <cstdint>
#include <string>

namespace fluorep {

// Exact rational arithmetic on int64 numerator/denominator, normalized so the
// denominator is positive and gcd(num, den) = 1. The brute-force swap oracle
// needs only small values; operations guard against overflow by construction
// (inputs stay far below 2^31 after reduction).
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool is_zero() const { return num == 0; }

  double to_double() const;
  std::string str() const; // "num/den", or "num" when den == 1
};

// Elements of Q(sqrt 2): a + b sqrt2 with rational a, b. Closed under the
// ring operations; squaring keeps probabilities exact even though rotation
// amplitudes carry factors of 1/sqrt2.
struct QSqrt2 {
  Rational a; // rational part
  Rational b; // coefficient of sqrt2

  QSqrt2() = default;
  QSqrt2(Rational ra) : a(ra) {}
  QSqrt2(Rational ra, Rational rb) : a(ra), b(rb) {}

  QSqrt2 operator+(const QSqrt2& o) const;
  QSqrt2 operator*(const QSqrt2& o) const;
  QSqrt2 times_rational(const Rational& r) const;
  bool is_zero() const { return a.is_zero() && b.is_zero(); }
};

// Exact single-excitation outcome probability of the elementary connection:
// a three-node chain with ensembles of n_atoms three-level atoms, links
// written blue on nodes (0, 1) and red on nodes (1, 2), a storage-level
// rotation on node 1, and a perfect fluorescence readout of node 1.
//
// Works in the exact symmetric subspace over unnormalized multinomial basis
// states, with amplitudes in Q(sqrt 2), so no floating point enters; the
// result reduces to the closed form 2N / (4N - 1).
// Requires 1 <= n_atoms <= 6 (enumeration cost guard; throws
// std::length_error above, std::invalid_argument below).
Rational brute_force_swap_success(int n_atoms);

}  // namespace fluorep
