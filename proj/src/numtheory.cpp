#include "qaup/numtheory.hpp"

#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace qaup {

namespace {

constexpr std::int64_t kModulusCap = std::int64_t{1} << 32;

}  // namespace

Fraction Fraction::of(std::int64_t num, std::int64_t den) {
  if (num < 0) throw std::invalid_argument("Fraction: numerator must be nonnegative");
  if (den <= 0) throw std::invalid_argument("Fraction: denominator must be positive");
  std::int64_t g = std::gcd(num, den);
  return Fraction{num / g, den / g};
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  if (a == 0 && b == 0) throw std::invalid_argument("gcd(0, 0) is undefined");
  return std::gcd(a, b);
}

std::int64_t mod_pow(std::int64_t x, std::int64_t e, std::int64_t m) {
  if (m < 2) throw std::invalid_argument("mod_pow: modulus must be >= 2");
  if (m >= kModulusCap) throw std::out_of_range("mod_pow: modulus must be < 2^32");
  if (e < 0) throw std::invalid_argument("mod_pow: negative exponent");
  std::uint64_t base = static_cast<std::uint64_t>(((x % m) + m) % m);
  std::uint64_t acc = 1 % static_cast<std::uint64_t>(m);
  std::uint64_t mm = static_cast<std::uint64_t>(m);
  std::uint64_t ee = static_cast<std::uint64_t>(e);
  while (ee > 0) {
    if (ee & 1) acc = acc * base % mm;
    base = base * base % mm;
    ee >>= 1;
  }
  return static_cast<std::int64_t>(acc);
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  if (m < 2) throw std::invalid_argument("mod_inverse: modulus must be >= 2");
  std::int64_t r0 = m, r1 = ((a % m) + m) % m;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    t0 -= q * t1;
    std::swap(t0, t1);
  }
  if (r0 != 1) throw std::invalid_argument("mod_inverse: arguments are not coprime");
  return ((t0 % m) + m) % m;
}

std::int64_t multiplicative_order(std::int64_t x, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("multiplicative_order: modulus must be >= 1");
  if (m == 1) return 1;
  if (m >= kModulusCap) throw std::out_of_range("multiplicative_order: modulus must be < 2^32");
  std::int64_t v = ((x % m) + m) % m;
  if (std::gcd(v, m) != 1)
    throw std::invalid_argument("multiplicative_order: arguments are not coprime");
  std::uint64_t acc = static_cast<std::uint64_t>(v);
  std::uint64_t mm = static_cast<std::uint64_t>(m);
  std::int64_t r = 1;
  while (acc != 1) {
    acc = acc * static_cast<std::uint64_t>(v) % mm;
    ++r;
    if (r > m) throw std::logic_error("multiplicative_order: no cycle found");
  }
  return r;
}

std::int64_t euler_phi(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("euler_phi: argument must be >= 1");
  std::int64_t result = n;
  std::int64_t rest = n;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    result -= result / p;
    while (rest % p == 0) rest /= p;
  }
  if (rest > 1) result -= result / rest;
  return result;
}

std::vector<Fraction> convergents(const Fraction& target) {
  std::vector<Fraction> out;
  std::int64_t n = target.num, d = target.den;
  std::int64_t pm1 = 1, pm2 = 0;  // h_{-1}, h_{-2} of the standard recurrence
  std::int64_t qm1 = 0, qm2 = 1;
  while (true) {
    std::int64_t a = n / d;
    std::int64_t pc = a * pm1 + pm2;
    std::int64_t qc = a * qm1 + qm2;
    out.push_back(Fraction{pc, qc});  // coprime by construction
    pm2 = pm1;
    pm1 = pc;
    qm2 = qm1;
    qm1 = qc;
    std::int64_t rem = n - a * d;
    if (rem == 0) break;
    n = d;
    d = rem;
  }
  // Targets in (1/2, 1) open with 0/1 followed by 1/1; only the latter is a
  // best approximation, so drop the duplicate-denominator head.
  if (out.size() >= 2 && out[0].den == out[1].den) out.erase(out.begin());
  return out;
}

std::optional<std::int64_t> recover_denominator(const Fraction& target,
                                                std::int64_t bound) {
  if (bound < 1) throw std::invalid_argument("recover_denominator: bound must be >= 1");
  std::optional<std::int64_t> best;
  for (const Fraction& c : convergents(target)) {
    if (c.den > bound) break;  // denominators strictly increase
    if (c.num < 1) continue;
    // |target - c| < 1/(2 den^2)  <=>  2 * den * |cross| < target.den
    __int128 cross = static_cast<__int128>(target.num) * c.den -
                     static_cast<__int128>(c.num) * target.den;
    if (cross < 0) cross = -cross;
    if (static_cast<__int128>(2) * c.den * cross < static_cast<__int128>(target.den))
      best = c.den;  // later convergents are strictly closer
  }
  return best;
}

std::int64_t next_power_of_two_at_least(std::int64_t x) {
  if (x < 1) throw std::invalid_argument("next_power_of_two_at_least: argument must be >= 1");
  if (x > (std::int64_t{1} << 62))
    throw std::out_of_range("next_power_of_two_at_least: result overflows");
  std::int64_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

bool is_power_of_two(std::int64_t x) { return x >= 1 && (x & (x - 1)) == 0; }

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::int64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

}  // namespace qaup
