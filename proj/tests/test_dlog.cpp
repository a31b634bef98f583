#include <doctest.h>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "qaup/dlog.hpp"
#include "qaup/numtheory.hpp"

using qaup::DlogConfig;

TEST_CASE("generator detection") {
  CHECK(qaup::is_generator(11, 2));
  CHECK_FALSE(qaup::is_generator(11, 4));
  CHECK_FALSE(qaup::is_generator(11, 3));
  CHECK(qaup::is_generator(13, 2));
  CHECK_FALSE(qaup::is_generator(11, 0));
  // Count matches euler_phi(p - 1).
  for (std::int64_t p : {5, 7, 11, 13, 17}) {
    std::int64_t count = 0;
    for (std::int64_t g = 1; g < p; ++g)
      if (qaup::is_generator(p, g)) ++count;
    CHECK(count == qaup::euler_phi(p - 1));
  }
}

TEST_CASE("discrete log oracle inverts exponentiation") {
  CHECK(qaup::discrete_log_oracle(11, 2, 8) == 3);
  for (std::int64_t r = 0; r < 12; ++r)
    CHECK(qaup::discrete_log_oracle(13, 2, qaup::mod_pow(2, r, 13)) == r);
  CHECK_THROWS_AS(qaup::discrete_log_oracle(12, 2, 5), std::invalid_argument);
  CHECK_THROWS_AS(qaup::discrete_log_oracle(11, 4, 3), std::invalid_argument);
}

TEST_CASE("preimage tuples cover the good line exactly once") {
  const std::int64_t p = 11, g = 2, x = 8, k = 4;
  const auto tuples = qaup::dlog_preimage_tuples(p, g, x, k);
  CHECK(tuples.size() == 10);
  const std::int64_t xinv = qaup::mod_inverse(x, p);
  std::vector<bool> seen(10, false);
  for (const auto& t : tuples) {
    REQUIRE(t.size() == 2);
    const std::int64_t a = t[0], b = t[1];
    CHECK(qaup::mod_pow(g, a, p) * qaup::mod_pow(xinv, b, p) % p ==
          qaup::mod_pow(g, k, p));
    CHECK_FALSE(seen[b]);
    seen[b] = true;
  }
  CHECK_THROWS_AS(qaup::dlog_preimage_tuples(p, g, x, 10),
                  std::invalid_argument);
}

TEST_CASE("unpadded two-register masses sit on the line") {
  const auto rep = qaup::easy_case_dlog_check(11, 2, 8);
  CHECK(rep.p == 11);
  CHECK(rep.r == 3);
  CHECK(rep.pair_mass == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(rep.max_on_line_deviation <= 1e-10);
  CHECK(rep.max_off_line_mass <= 1e-10);
  CHECK(rep.phi_ratio == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(rep.target_probability == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(rep.holds);

  const std::map<std::int64_t, std::int64_t> gen = {
      {5, 2}, {7, 3}, {11, 2}, {13, 2}};
  for (const auto& [p, g] : gen)
    for (std::int64_t r : {std::int64_t{1}, std::int64_t{2}, (p - 1) / 2}) {
      const auto grid = qaup::easy_case_dlog_check(p, g, qaup::mod_pow(g, r, p));
      CHECK(grid.holds);
      CHECK(grid.r == r);
    }
}

TEST_CASE("padded pair distribution is normalized and validated") {
  const auto dist = qaup::padded_dlog_distribution(11, 2, 8, 128);
  CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dist.sizes == std::vector<std::int64_t>{128, 128});
  CHECK_THROWS_AS(qaup::padded_dlog_distribution(11, 2, 8, 100),
                  std::invalid_argument);  // not a power of two
  CHECK_THROWS_AS(qaup::padded_dlog_distribution(11, 2, 8, 32),
                  std::invalid_argument);  // q/(p-1) below 3 pi
}

TEST_CASE("per-pair bound frozen value") {
  CHECK(qaup::dlog_pair_bound(11, 12.8) ==
        doctest::Approx(4.243896832357388e-05).epsilon(1e-12));
  CHECK_THROWS_AS(qaup::dlog_pair_bound(11, 9.0), std::invalid_argument);
}

TEST_CASE("pair certificate frozen values") {
  const auto cert = qaup::certify_dlog_targets(11, 2, 8, 128);
  CHECK(cert.p == 11);
  CHECK(cert.q == 128);
  CHECK(cert.s == doctest::Approx(12.8).epsilon(1e-15));
  CHECK(cert.per_pair_bound ==
        doctest::Approx(4.243896832357388e-05).epsilon(1e-12));
  CHECK(cert.aggregate_bound ==
        doctest::Approx(0.00016975587329429552).epsilon(1e-12));
  CHECK(cert.target_probability ==
        doctest::Approx(0.0024059661099560814).epsilon(1e-10));
  CHECK(cert.min_pair_probability ==
        doctest::Approx(0.0005952093753108503).epsilon(1e-10));
  CHECK(cert.min_pair_probability >= cert.per_pair_bound - 1e-15);
  CHECK(cert.per_pair_holds);
  CHECK(cert.aggregate_holds);
  CHECK(cert.v2_route_agrees);

  const auto c13 = qaup::certify_dlog_targets(13, 2, 5, 128);
  CHECK(c13.per_pair_holds);
  CHECK(c13.aggregate_holds);
  CHECK(c13.v2_route_agrees);
}

TEST_CASE("rounding inversion is exact and strict") {
  const auto hit = qaup::invert_rounding(38, 0, 128, 11);
  REQUIRE(hit.has_value());
  CHECK(hit->first == 3);
  CHECK(hit->second == 0);
  CHECK_FALSE(qaup::invert_rounding(39, 0, 128, 11).has_value());

  const std::int64_t q = 128, m = 10;
  std::vector<bool> image(q, false);
  for (std::int64_t c = 0; c < m; ++c) image[q * c / m] = true;
  for (std::int64_t c = 0; c < m; ++c)
    for (std::int64_t d = 0; d < m; ++d) {
      const auto got = qaup::invert_rounding(q * c / m, q * d / m, q, 11);
      REQUIRE(got.has_value());
      CHECK(got->first == c);
      CHECK(got->second == d);
    }
  for (std::int64_t cp = 0; cp < q; ++cp)
    CHECK(qaup::invert_rounding(cp, 0, q, 11).has_value() == image[cp]);
}

TEST_CASE("exponent recovery accepts only verified candidates") {
  auto r = qaup::recover_r(3, 1, 11, 2, 8);
  REQUIRE(r.has_value());
  CHECK(*r == 3);
  CHECK_FALSE(qaup::recover_r(2, 1, 11, 2, 8).has_value());  // c not a unit
  CHECK_FALSE(qaup::recover_r(3, 2, 11, 2, 8).has_value());  // fails g^r = x
  CHECK_THROWS_AS(qaup::recover_r(10, 0, 11, 2, 8), std::invalid_argument);
}

TEST_CASE("end-to-end recovery is deterministic") {
  DlogConfig config;
  config.p = 23;
  config.g = 5;
  config.x = 11;
  config.seed = 1;
  const auto tr = qaup::run_dlog(config);
  CHECK(tr.success);
  CHECK(tr.r == 9);
  CHECK(qaup::mod_pow(5, tr.r, 23) == 11);
  const auto again = qaup::run_dlog(config);
  CHECK(tr.to_json() == again.to_json());

  DlogConfig small;
  small.p = 11;
  small.g = 2;
  small.x = 8;
  small.seed = 5;
  const auto tr2 = qaup::run_dlog(small);
  CHECK(tr2.success);
  CHECK(tr2.r == 3);
}

TEST_CASE("dlog transcripts parse as stable JSON documents") {
  DlogConfig config;
  config.p = 23;
  config.g = 5;
  config.x = 11;
  const auto tr = qaup::run_dlog(config);
  const auto doc = nlohmann::json::parse(tr.to_json());
  CHECK(doc["p"] == 23);
  CHECK(doc["r"] == tr.r);
  CHECK(doc["success"] == tr.success);
  CHECK(doc["measurements"].size() == tr.measurements.size());
  CHECK(doc.contains("bounds"));
}

TEST_CASE("dlog driver rejects malformed configurations") {
  DlogConfig config;
  config.p = 12;
  CHECK_THROWS_AS(qaup::run_dlog(config), std::invalid_argument);
  config.p = 11;
  config.g = 4;
  CHECK_THROWS_AS(qaup::run_dlog(config), std::invalid_argument);
  config.g = 2;
  config.x = 0;
  CHECK_THROWS_AS(qaup::run_dlog(config), std::invalid_argument);
  config.x = 8;
  config.max_repetitions = 0;
  CHECK_THROWS_AS(qaup::run_dlog(config), std::invalid_argument);
  config.max_repetitions = 10;
  config.s_min = 5.0;
  CHECK_THROWS_AS(qaup::run_dlog(config), std::invalid_argument);
}
