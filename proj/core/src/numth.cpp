#include "covering/numth.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace covering {

Int checked_add(Int a, Int b) {
  Int out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in addition");
  }
  return out;
}

Int checked_mul(Int a, Int b) {
  Int out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in multiplication");
  }
  return out;
}

Int checked_lcm(Int a, Int b) {
  if (a <= 0 || b <= 0) throw std::invalid_argument("lcm of non-positive integer");
  return checked_mul(a / std::gcd(a, b), b);
}

Int checked_pow(Int base, int exponent) {
  Int out = 1;
  for (int k = 0; k < exponent; ++k) out = checked_mul(out, base);
  return out;
}

bool is_prime(Int n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (Int d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

Factorization factorize(Int n) {
  if (n <= 0) throw std::invalid_argument("factorize: n must be positive");
  Factorization out;
  for (Int p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

int valuation(Int p, Int n) {
  if (!is_prime(p)) throw std::invalid_argument("valuation: p must be prime");
  if (n <= 0) throw std::invalid_argument("valuation: n must be positive");
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

Int largest_prime_factor(Int n) {
  if (n < 2) throw std::invalid_argument("largest_prime_factor: n must be >= 2");
  return factorize(n).back().prime;
}

std::vector<Int> divisors(Int n) {
  std::vector<Int> out{1};
  for (const auto& [p, e] : factorize(n)) {
    const std::size_t base = out.size();
    Int pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Int> divisors_at_least(Int n, Int m) {
  if (n < 1 || m < 1) throw std::invalid_argument("divisors_at_least: arguments must be positive");
  auto all = divisors(n);
  std::vector<Int> out;
  std::copy_if(all.begin(), all.end(), std::back_inserter(out), [m](Int d) { return d >= m; });
  return out;
}

Int divisor_count(Int n) {
  Int count = 1;
  for (const auto& pp : factorize(n)) count *= pp.exponent + 1;
  return count;
}

namespace {

// Returns (g, x) with a*x = g (mod b), g = gcd(a, b).
std::pair<Int, Int> ext_gcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0;
  while (r != 0) {
    const Int q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
  }
  return {old_r, old_s};
}

}  // namespace

std::optional<Congruence> crt_solve(std::span<const Congruence> pairs) {
  Int r = 0;
  Int m = 1;
  for (const auto& c : pairs) {
    if (c.modulus < 1) throw std::invalid_argument("crt_solve: modulus must be positive");
    const Int r2 = floor_mod(c.residue, c.modulus);
    const Int m2 = c.modulus;
    const auto [g, inv] = ext_gcd(m, m2);
    const Int diff = r2 - r;
    if (diff % g != 0) return std::nullopt;
    // x = r + m * k with m*k = diff (mod m2); k = (diff/g) * inv (mod m2/g).
    const Int step = m2 / g;
    const auto k = static_cast<Int>(
        (static_cast<__int128>(floor_mod(diff / g, step)) * floor_mod(inv, step)) % step);
    const Int next_m = checked_lcm(m, m2);
    r = static_cast<Int>((static_cast<__int128>(m) * k + r) % next_m);
    m = next_m;
  }
  return Congruence{r, m};
}

Rational::Rational(Int num, Int den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const Int g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

namespace {

Int narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("rational overflow");
  return static_cast<Int>(v);
}

Rational combine(const Rational& a, const Rational& b, int sign) {
  const Int g = std::gcd(a.den(), b.den());
  const __int128 da = a.den() / g;
  const __int128 db = b.den() / g;
  const __int128 num = static_cast<__int128>(a.num()) * db + sign * static_cast<__int128>(b.num()) * da;
  const __int128 den = da * b.den();
  // Reduce in 128 bits before narrowing.
  __int128 x = num < 0 ? -num : num, y = den;
  while (y != 0) x = std::exchange(y, x % y);
  if (x == 0) x = 1;
  return Rational(narrow(num / x), narrow(den / x));
}

}  // namespace

Rational Rational::operator+(const Rational& rhs) const { return combine(*this, rhs, 1); }
Rational Rational::operator-(const Rational& rhs) const { return combine(*this, rhs, -1); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const __int128 lhs = static_cast<__int128>(a.num()) * b.den();
  const __int128 rhs = static_cast<__int128>(b.num()) * a.den();
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace covering
