#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace qaup {

/// Nonnegative rational in lowest terms; den > 0 always.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction of(std::int64_t num, std::int64_t den);
  bool operator==(const Fraction&) const = default;
};

/// gcd(a, b) with gcd(0, n) = n.  Both arguments zero is rejected.
std::int64_t gcd(std::int64_t a, std::int64_t b);

/// x^e mod m by square-and-multiply.  Intermediate products are unsigned
/// 64-bit, so m must stay below 2^32; larger moduli raise a range error.
std::int64_t mod_pow(std::int64_t x, std::int64_t e, std::int64_t m);

/// Inverse of a mod m via the extended Euclidean algorithm; requires gcd = 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t m);

/// Least r >= 1 with x^r = 1 mod m, by iterated multiplication.
/// Requires gcd(x, m) = 1.  Intentionally brute force: this is the
/// reference value the sampling pipelines are checked against.
std::int64_t multiplicative_order(std::int64_t x, std::int64_t m);

/// Euler phi by trial-division factorization.
std::int64_t euler_phi(std::int64_t n);

/// Continued-fraction convergents of target, in order.  Denominators
/// strictly increase and the final convergent equals the reduced target.
/// Any j/r in lowest terms with |target - j/r| < 1/(2 r^2) appears in the
/// list (the classical best-approximation property).
std::vector<Fraction> convergents(const Fraction& target);

/// Denominator of the convergent closest to target among those with
/// denominator <= bound, numerator >= 1 and |target - j/r| < 1/(2 r^2).
/// The comparison is exact integer arithmetic.  Returns nullopt when no
/// convergent qualifies; the 0/1 convergent never qualifies by fiat.
std::optional<std::int64_t> recover_denominator(const Fraction& target,
                                                std::int64_t bound);

/// Smallest power of two >= x.  x must be >= 1 and small enough that the
/// result fits in 63 bits.
std::int64_t next_power_of_two_at_least(std::int64_t x);

bool is_power_of_two(std::int64_t x);

/// Deterministic trial division; adequate for the desk-scale inputs here.
bool is_prime(std::int64_t n);

}  // namespace qaup
