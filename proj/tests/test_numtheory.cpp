#include <doctest.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qaup/numtheory.hpp"

using qaup::Fraction;

TEST_CASE("fraction reduces to lowest terms") {
  CHECK(Fraction::of(6, 4) == Fraction::of(3, 2));
  CHECK(Fraction::of(0, 5) == Fraction::of(0, 1));
  CHECK(Fraction::of(409, 1024).num == 409);
  CHECK(Fraction::of(409, 1024).den == 1024);
  CHECK_THROWS_AS(Fraction::of(-1, 2), std::invalid_argument);
  CHECK_THROWS_AS(Fraction::of(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Fraction::of(1, -2), std::invalid_argument);
}

TEST_CASE("gcd matches the standard library") {
  CHECK(qaup::gcd(35, 15) == 5);
  CHECK(qaup::gcd(0, 7) == 7);
  CHECK(qaup::gcd(7, 0) == 7);
  for (std::int64_t a = 0; a <= 60; ++a)
    for (std::int64_t b = 0; b <= 60; ++b) {
      if (a == 0 && b == 0) continue;
      CHECK(qaup::gcd(a, b) == std::gcd(a, b));
    }
  CHECK_THROWS_AS(qaup::gcd(0, 0), std::invalid_argument);
}

namespace {

std::int64_t slow_pow(std::int64_t x, std::int64_t e, std::int64_t m) {
  std::int64_t acc = 1 % m;
  for (std::int64_t i = 0; i < e; ++i) acc = acc * (x % m + m) % m;
  return acc;
}

}  // namespace

TEST_CASE("mod_pow against repeated multiplication") {
  CHECK(qaup::mod_pow(2, 10, 1000) == 24);
  CHECK(qaup::mod_pow(5, 0, 7) == 1);
  for (std::int64_t m = 2; m <= 40; ++m)
    for (std::int64_t x = 0; x < 40; ++x)
      for (std::int64_t e = 0; e < 40; ++e)
        CHECK(qaup::mod_pow(x, e, m) == slow_pow(x, e, m));
  CHECK_THROWS_AS(qaup::mod_pow(2, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(qaup::mod_pow(2, -1, 7), std::invalid_argument);
  CHECK_THROWS_AS(qaup::mod_pow(2, 3, std::int64_t{1} << 33), std::out_of_range);
}

TEST_CASE("mod_inverse is a two-sided inverse") {
  for (std::int64_t m = 2; m <= 50; ++m)
    for (std::int64_t a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      const std::int64_t inv = qaup::mod_inverse(a, m);
      CHECK(inv >= 0);
      CHECK(inv < m);
      CHECK(a * inv % m == 1 % m);
    }
  CHECK_THROWS_AS(qaup::mod_inverse(2, 4), std::invalid_argument);
}

TEST_CASE("multiplicative_order is the least positive exponent") {
  CHECK(qaup::multiplicative_order(2, 15) == 4);
  CHECK(qaup::multiplicative_order(2, 21) == 6);
  for (std::int64_t m = 2; m <= 60; ++m)
    for (std::int64_t x = 1; x < m; ++x) {
      if (std::gcd(x, m) != 1) continue;
      const std::int64_t r = qaup::multiplicative_order(x, m);
      CHECK(slow_pow(x, r, m) == 1);
      for (std::int64_t d = 1; d < r; ++d) CHECK(slow_pow(x, d, m) != 1);
    }
  CHECK_THROWS_AS(qaup::multiplicative_order(3, 15), std::invalid_argument);
}

TEST_CASE("euler_phi against the coprime count") {
  CHECK(qaup::euler_phi(12) == 4);
  CHECK(qaup::euler_phi(1) == 1);
  for (std::int64_t n = 1; n <= 300; ++n) {
    std::int64_t count = 0;
    for (std::int64_t a = 1; a <= n; ++a)
      if (std::gcd(a, n) == 1) ++count;
    CHECK(qaup::euler_phi(n) == count);
  }
}

TEST_CASE("convergents end at the target and capture close fractions") {
  const auto cs = qaup::convergents(Fraction::of(409, 1024));
  CHECK(cs.back() == Fraction::of(409, 1024));
  bool has_two_fifths = false;
  for (const auto& c : cs)
    if (c == Fraction::of(2, 5)) has_two_fifths = true;
  CHECK(has_two_fifths);
  for (std::size_t i = 1; i < cs.size(); ++i) CHECK(cs[i].den > cs[i - 1].den);

  // Every j/r within 1/(2 r^2) of the target must appear in the list.
  const std::vector<Fraction> targets = {
      Fraction::of(409, 1024), Fraction::of(355, 1130), Fraction::of(7, 9),
      Fraction::of(1, 1000),   Fraction::of(977, 2048)};
  for (const auto& t : targets) {
    const auto list = qaup::convergents(t);
    for (std::int64_t r = 1; r <= 30; ++r)
      for (std::int64_t j = 0; j <= r; ++j) {
        if (std::gcd(j, r) != 1) continue;
        // |t - j/r| < 1/(2 r^2)  <=>  |t.num r - j t.den| 2 r < t.den
        const std::int64_t diff = t.num * r - j * t.den;
        if ((diff < 0 ? -diff : diff) * 2 * r >= t.den) continue;
        bool found = false;
        for (const auto& c : list)
          if (c == Fraction::of(j, r)) found = true;
        CHECK(found);
      }
  }
}

TEST_CASE("recover_denominator frozen cases") {
  auto r = qaup::recover_denominator(Fraction::of(409, 1024), 16);
  REQUIRE(r.has_value());
  CHECK(*r == 5);
  r = qaup::recover_denominator(Fraction::of(1, 2), 16);
  REQUIRE(r.has_value());
  CHECK(*r == 2);
  CHECK_FALSE(qaup::recover_denominator(Fraction::of(3, 1024), 2).has_value());
  CHECK_THROWS_AS(qaup::recover_denominator(Fraction::of(1, 2), 0),
                  std::invalid_argument);
}

TEST_CASE("recover_denominator finds every reduced fraction from its rounding") {
  // k' = round(q j / r) is within 1/(2q) of j/r; with q > 2 r^2 the
  // best-approximation property pins the denominator exactly.
  const std::int64_t q = 4096;
  for (std::int64_t r = 2; r <= 32; ++r)
    for (std::int64_t j = 1; j < r; ++j) {
      if (std::gcd(j, r) != 1) continue;
      const std::int64_t k_prime = (2 * q * j + r) / (2 * r);
      const auto got = qaup::recover_denominator(Fraction::of(k_prime, q), 32);
      REQUIRE(got.has_value());
      CHECK(*got == r);
    }
}

TEST_CASE("power-of-two helpers") {
  CHECK(qaup::next_power_of_two_at_least(18) == 32);
  CHECK(qaup::next_power_of_two_at_least(1) == 1);
  CHECK(qaup::next_power_of_two_at_least(32) == 32);
  for (std::int64_t x = 1; x <= 5000; ++x) {
    const std::int64_t p = qaup::next_power_of_two_at_least(x);
    CHECK(qaup::is_power_of_two(p));
    CHECK(p >= x);
    CHECK(p / 2 < x);
  }
  CHECK_FALSE(qaup::is_power_of_two(0));
  CHECK_FALSE(qaup::is_power_of_two(-4));
  CHECK_FALSE(qaup::is_power_of_two(12));
  CHECK(qaup::is_power_of_two(1));
  CHECK_THROWS_AS(qaup::next_power_of_two_at_least(0), std::invalid_argument);
}

TEST_CASE("is_prime against a sieve") {
  const std::int64_t limit = 2000;
  std::vector<bool> composite(limit + 1, false);
  for (std::int64_t i = 2; i * i <= limit; ++i)
    if (!composite[i])
      for (std::int64_t j = i * i; j <= limit; j += i) composite[j] = true;
  for (std::int64_t n = 0; n <= limit; ++n)
    CHECK(qaup::is_prime(n) == (n >= 2 && !composite[n]));
}
