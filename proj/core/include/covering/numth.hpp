#pragma once

// Integer arithmetic primitives: checked 64-bit operations, trial-division
// factorization, divisor enumeration, p-adic valuation, CRT and exact
// rationals.

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace covering {

using Int = std::int64_t;

/// Raised when a result does not fit in 64 bits. Values never wrap.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

Int checked_add(Int a, Int b);
Int checked_mul(Int a, Int b);
/// lcm of two positive integers, throwing OverflowError instead of wrapping.
Int checked_lcm(Int a, Int b);
Int checked_pow(Int base, int exponent);

/// Least non-negative representative of a modulo m (m >= 1).
constexpr Int floor_mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

struct PrimePower {
  Int prime;
  int exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime powers sorted by strictly increasing prime.
using Factorization = std::vector<PrimePower>;

bool is_prime(Int n);

/// Trial division. Throws std::invalid_argument for n <= 0.
Factorization factorize(Int n);

/// Largest e with p^e | n. Throws std::invalid_argument unless p is prime and
/// n >= 1.
int valuation(Int p, Int n);

/// Largest prime factor of n >= 2.
Int largest_prime_factor(Int n);

/// All divisors of n in ascending order.
std::vector<Int> divisors(Int n);

/// Divisors d of n with d >= m, ascending. n itself is included when n >= m.
std::vector<Int> divisors_at_least(Int n, Int m);

/// Number of divisors computed from the factorization.
Int divisor_count(Int n);

struct Congruence {
  Int residue;
  Int modulus;

  friend bool operator==(const Congruence&, const Congruence&) = default;
};

/// Combines congruences x = r_k (mod m_k), moduli not necessarily coprime.
/// Returns (r, lcm) with 0 <= r < lcm, or nullopt when the system has no
/// common solution. An empty list yields (0, 1).
std::optional<Congruence> crt_solve(std::span<const Congruence> pairs);

/// Exact rational number with 64-bit numerator and denominator, always
/// reduced with a positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(Int num, Int den = 1);

  Int num() const { return num_; }
  Int den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator+(const Rational& rhs) const;
  Rational operator-(const Rational& rhs) const;
  Rational& operator+=(const Rational& rhs) { return *this = *this + rhs; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;

 private:
  Int num_ = 0;
  Int den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace covering
