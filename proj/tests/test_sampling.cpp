#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "qaup/numtheory.hpp"
#include "qaup/sampling.hpp"

using qaup::Distribution;
using qaup::IndexSet;
using qaup::MultiDimInstance;
using qaup::RegisterDim;
using qaup::SamplingInstance;

namespace {

// Independent evaluation of one outcome, straight from the definition.
double prob_point_oracle(std::int64_t p, std::int64_t q,
                         const std::vector<std::int64_t>& members,
                         std::int64_t k) {
  (void)p;
  std::complex<double> sum = 0;
  for (std::int64_t c : members)
    sum += std::polar(1.0, 2.0 * std::numbers::pi * double(c) * double(k) /
                               double(q));
  return std::norm(sum) / (double(q) * double(members.size()));
}

IndexSet random_members(std::int64_t p, std::int64_t q, std::mt19937_64& rng) {
  std::vector<std::int64_t> members;
  for (std::int64_t c = 0; c < p; ++c)
    if (rng() & 1) members.push_back(c);
  if (members.empty()) members.push_back(static_cast<std::int64_t>(rng() % p));
  return IndexSet::of(q, std::move(members));
}

}  // namespace

TEST_CASE("instance construction enforces the register layout") {
  CHECK_THROWS_AS(SamplingInstance::of(8, 4, IndexSet::of(4, {0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(SamplingInstance::of(4, 8, IndexSet::of(8, {5})),
                  std::invalid_argument);  // member >= p
  CHECK_THROWS_AS(SamplingInstance::of(4, 8, IndexSet::of(8, {})),
                  std::invalid_argument);
  CHECK_THROWS_AS(SamplingInstance::of(4, 4, IndexSet::of(8, {1})),
                  std::invalid_argument);  // modulus mismatch
  const SamplingInstance inst = SamplingInstance::of(4, 8, IndexSet::of(8, {1, 3}));
  CHECK(inst.p == 4);
  CHECK(inst.q == 8);
}

TEST_CASE("prob_point frozen value and oracle agreement") {
  const std::vector<std::int64_t> members = {1, 4, 7, 10, 13, 16};
  const SamplingInstance inst =
      SamplingInstance::of(18, 128, IndexSet::of(128, members));
  CHECK(qaup::prob_point(inst, 42) ==
        doctest::Approx(0.04557178669672255).epsilon(1e-12));

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::int64_t q = 16 + std::int64_t(rng() % 113);
    const std::int64_t p = 2 + std::int64_t(rng() % (q - 1));
    const IndexSet B = random_members(p, q, rng);
    const std::int64_t k = std::int64_t(rng() % q);
    const SamplingInstance r = SamplingInstance::of(p, q, B);
    CHECK(qaup::prob_point(r, k) ==
          doctest::Approx(prob_point_oracle(p, q, B.members, k)).epsilon(1e-11));
  }
}

TEST_CASE("prob_set sums the pointwise masses") {
  const SamplingInstance inst =
      SamplingInstance::of(18, 128, IndexSet::of(128, {1, 4, 7, 10, 13, 16}));
  const IndexSet T = IndexSet::of(128, {0, 42, 43, 100});
  double total = 0;
  for (std::int64_t k : T.members) total += qaup::prob_point(inst, k);
  CHECK(qaup::prob_set(inst, T) == doctest::Approx(total).epsilon(1e-13));
  CHECK(qaup::prob_set(inst, IndexSet::of(128, {})) == 0.0);
}

TEST_CASE("operator route equals direct summation") {
  // Exhaustive at small q over every preimage set and every target set.
  for (std::int64_t q = 2; q <= 6; ++q) {
    for (std::int64_t bmask = 1; bmask < (1 << q); ++bmask) {
      std::vector<std::int64_t> bm;
      for (std::int64_t c = 0; c < q; ++c)
        if (bmask >> c & 1) bm.push_back(c);
      const SamplingInstance inst =
          SamplingInstance::of(q, q, IndexSet::of(q, bm));
      for (std::int64_t tmask = 1; tmask < (1 << q); ++tmask) {
        std::vector<std::int64_t> tm;
        for (std::int64_t k = 0; k < q; ++k)
          if (tmask >> k & 1) tm.push_back(k);
        const IndexSet T = IndexSet::of(q, tm);
        CHECK(std::abs(qaup::prob_via_operators(inst, T) -
                       qaup::prob_set(inst, T)) <= 1e-10);
      }
    }
  }
  // Randomized padded instances above.
  std::mt19937_64 rng(37);
  for (std::int64_t q : {16, 64, 256}) {
    for (int trial = 0; trial < 25; ++trial) {
      const std::int64_t p = 2 + std::int64_t(rng() % (q - 1));
      const SamplingInstance inst =
          SamplingInstance::of(p, q, random_members(p, q, rng));
      std::vector<std::int64_t> tm;
      for (std::int64_t k = 0; k < q; ++k)
        if (rng() % 4 == 0) tm.push_back(k);
      tm.push_back(std::int64_t(rng() % q));
      const IndexSet T = IndexSet::of(q, tm);
      CHECK(std::abs(qaup::prob_via_operators(inst, T) -
                     qaup::prob_set(inst, T)) <= 1e-10);
    }
  }
  const SamplingInstance big =
      SamplingInstance::of(8192, 8192, IndexSet::of(8192, {0}));
  CHECK_THROWS_AS(qaup::prob_via_operators(big, IndexSet::of(8192, {0})),
                  std::out_of_range);
}

TEST_CASE("multi-register probability factorizes over product preimages") {
  const std::vector<RegisterDim> dims = {{3, 8}, {4, 16}};
  std::vector<std::vector<std::int64_t>> tuples;
  const std::vector<std::int64_t> b1 = {0, 2}, b2 = {1, 2, 3};
  for (std::int64_t a : b1)
    for (std::int64_t b : b2) tuples.push_back({a, b});
  const MultiDimInstance inst = MultiDimInstance::of(dims, tuples);
  const SamplingInstance m1 = SamplingInstance::of(3, 8, IndexSet::of(8, b1));
  const SamplingInstance m2 = SamplingInstance::of(4, 16, IndexSet::of(16, b2));
  for (std::int64_t k1 = 0; k1 < 8; ++k1)
    for (std::int64_t k2 = 0; k2 < 16; ++k2) {
      const double lhs = qaup::prob_point_multi(inst, {k1, k2});
      const double rhs = qaup::prob_point(m1, k1) * qaup::prob_point(m2, k2) *
                         (double(b1.size()) * double(b2.size())) /
                         double(tuples.size());
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
}

TEST_CASE("single-register instance agrees with the multi machinery") {
  const std::vector<std::int64_t> members = {1, 4, 7, 10, 13, 16};
  const SamplingInstance flat =
      SamplingInstance::of(18, 128, IndexSet::of(128, members));
  std::vector<std::vector<std::int64_t>> tuples;
  for (std::int64_t c : members) tuples.push_back({c});
  const MultiDimInstance multi = MultiDimInstance::of({{18, 128}}, tuples);
  for (std::int64_t k : {0, 1, 42, 64, 127})
    CHECK(qaup::prob_point_multi(multi, {k}) ==
          doctest::Approx(qaup::prob_point(flat, k)).epsilon(1e-12));
}

TEST_CASE("full distribution is exhaustive and normalized") {
  const SamplingInstance inst =
      SamplingInstance::of(18, 128, IndexSet::of(128, {1, 4, 7, 10, 13, 16}));
  const Distribution dist = qaup::full_distribution(inst);
  CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-10));
  for (std::size_t i = 1; i < dist.indices.size(); ++i)
    CHECK(dist.indices[i] > dist.indices[i - 1]);
  for (std::size_t i = 0; i < dist.indices.size(); ++i) {
    CHECK(dist.probabilities[i] > 1e-18);
    CHECK(dist.probability_at(dist.indices[i]) ==
          doctest::Approx(qaup::prob_point(inst, dist.indices[i]))
              .epsilon(1e-12));
  }
  CHECK(dist.probability_at(-1) == 0.0);

  const MultiDimInstance multi =
      MultiDimInstance::of({{3, 8}, {3, 8}}, {{0, 0}, {1, 2}, {2, 1}});
  const Distribution md = qaup::full_distribution(multi);
  CHECK(md.total() == doctest::Approx(1.0).epsilon(1e-10));
  for (std::int64_t flat = 0; flat < 64; ++flat) {
    const double exact = qaup::prob_point_multi(multi, {flat / 8, flat % 8});
    if (exact > 1e-12)
      CHECK(md.probability_at(flat) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("distribution construction rejects malformed input") {
  CHECK_THROWS_AS(Distribution::of({8}, {0, 2}, {0.5, 0.4}),
                  std::invalid_argument);  // mass not 1
  CHECK_THROWS_AS(Distribution::of({8}, {2, 0}, {0.5, 0.5}),
                  std::invalid_argument);  // unsorted
  CHECK_THROWS_AS(Distribution::of({8}, {0, 8}, {0.5, 0.5}),
                  std::invalid_argument);  // out of range
  CHECK_THROWS_AS(Distribution::of({8}, {0}, {1.5}), std::invalid_argument);
}

TEST_CASE("preimage_set matches a brute scan") {
  const auto g = [](std::int64_t c) { return qaup::mod_pow(2, c, 15); };
  const IndexSet pre = qaup::preimage_set(g, 60, 8, 128);
  std::vector<std::int64_t> expect;
  for (std::int64_t c = 0; c < 60; ++c)
    if (g(c) == 8) expect.push_back(c);
  CHECK(pre.members == expect);
  CHECK(pre.q == 128);
  CHECK_THROWS_AS(qaup::preimage_set(g, 60, 6, 128), std::invalid_argument);
}

TEST_CASE("unit_double is deterministic and lands in [0, 1)") {
  std::mt19937_64 a(12345), b(12345);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = qaup::unit_double(a);
    CHECK(u == qaup::unit_double(b));
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / 10000.0 == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("inverse-CDF sampling reproduces the distribution") {
  const Distribution dist =
      Distribution::of({8}, {0, 2, 5, 7}, {0.25, 0.25, 0.25, 0.25});
  std::mt19937_64 a(99), b(99);
  std::vector<std::int64_t> counts(8, 0);
  for (int i = 0; i < 8000; ++i) {
    const std::int64_t s = qaup::sample(dist, a);
    CHECK(s == qaup::sample(dist, b));
    CHECK(dist.probability_at(s) > 0.0);
    ++counts[s];
  }
  for (std::int64_t idx : dist.indices) {
    CHECK(counts[idx] > 1800);
    CHECK(counts[idx] < 2200);
  }
}

TEST_CASE("zero-state margin is strictly negative below full band") {
  CHECK(qaup::v3_zero_state_margin(16, 4) ==
        doctest::Approx(-0.1782032302755091).epsilon(1e-12));
  for (std::int64_t q = 2; q <= 64; ++q)
    for (std::int64_t b = 1; b < q; ++b)
      CHECK(qaup::v3_zero_state_margin(q, b) < 0.0);
  CHECK_THROWS_AS(qaup::v3_zero_state_margin(8, 0), std::invalid_argument);
  CHECK_THROWS_AS(qaup::v3_zero_state_margin(8, 9), std::invalid_argument);
}

TEST_CASE("phase_sum matches a direct polar loop") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const std::int64_t q = 2 + std::int64_t(rng() % 200);
    const std::int64_t k = std::int64_t(rng() % q);
    std::vector<std::int64_t> members;
    for (std::int64_t c = 0; c < std::min<std::int64_t>(q, 40); ++c)
      if (rng() & 1) members.push_back(c);
    members.push_back(0);
    std::complex<double> expect = 0;
    for (std::int64_t c : members)
      expect += std::polar(1.0, 2.0 * std::numbers::pi * double(c) * double(k) /
                                    double(q));
    CHECK(std::abs(qaup::detail::phase_sum(members, k, q) - expect) <= 1e-10);
  }
}
