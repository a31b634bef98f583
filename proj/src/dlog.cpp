#include "qaup/dlog.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "qaup/bounds.hpp"
#include "qaup/numtheory.hpp"

namespace qaup {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dlog_instance(std::int64_t p, std::int64_t g, std::int64_t x) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw std::invalid_argument("need an odd prime p");
  if (!is_generator(p, g)) throw std::invalid_argument("g must generate mod p");
  if (x < 1 || x >= p) throw std::invalid_argument("x must lie in [1, p)");
}

std::vector<RegisterDim> padded_dims(std::int64_t p, std::int64_t q) {
  return {RegisterDim{p - 1, q}, RegisterDim{p - 1, q}};
}

double padding_ratio(std::int64_t p, std::int64_t q) {
  if (!is_power_of_two(q)) throw std::invalid_argument("q must be a power of two");
  const double s = static_cast<double>(q) / static_cast<double>(p - 1);
  if (!(s > 3.0 * kPi)) throw std::invalid_argument("need q/(p-1) > 3 pi");
  return s;
}

}  // namespace

std::int64_t discrete_log_oracle(std::int64_t p, std::int64_t g, std::int64_t x) {
  require_dlog_instance(p, g, x);
  std::int64_t acc = 1 % p;
  for (std::int64_t r = 0; r < p - 1; ++r) {
    if (acc == x) return r;
    acc = acc * g % p;
  }
  throw std::logic_error("discrete_log_oracle: generator failed to reach x");
}

bool is_generator(std::int64_t p, std::int64_t g) {
  if (p < 3 || !is_prime(p)) return false;
  if (g < 1 || g >= p) return false;
  if (std::gcd(g, p) != 1) return false;
  return multiplicative_order(g, p) == p - 1;
}

std::vector<std::vector<std::int64_t>> dlog_preimage_tuples(std::int64_t p,
                                                            std::int64_t g,
                                                            std::int64_t x,
                                                            std::int64_t k) {
  require_dlog_instance(p, g, x);
  const std::int64_t m = p - 1;
  if (k < 0 || k >= m) throw std::invalid_argument("k must lie in [0, p-1)");
  const std::int64_t r = discrete_log_oracle(p, g, x);
  std::vector<std::vector<std::int64_t>> tuples;
  tuples.reserve(static_cast<std::size_t>(m));
  for (std::int64_t b = 0; b < m; ++b)
    tuples.push_back({(k + r * b) % m, b});
  return tuples;
}

DlogEasyReport easy_case_dlog_check(std::int64_t p, std::int64_t g,
                                    std::int64_t x) {
  require_dlog_instance(p, g, x);
  const std::int64_t m = p - 1;
  const std::int64_t r = discrete_log_oracle(p, g, x);
  const MultiDimInstance inst = MultiDimInstance::of(
      {RegisterDim{m, m}, RegisterDim{m, m}}, dlog_preimage_tuples(p, g, x, 0));
  const Distribution dist = full_distribution(inst);

  DlogEasyReport rep;
  rep.p = p;
  rep.r = r;
  rep.pair_mass = 1.0 / static_cast<double>(m);
  rep.phi_ratio = static_cast<double>(euler_phi(m)) / static_cast<double>(m);

  for (std::int64_t c = 0; c < m; ++c) {
    const std::int64_t d = ((m - r * c % m) % m + m) % m;
    const double mass = dist.probability_at(c * m + d);
    rep.max_on_line_deviation =
        std::max(rep.max_on_line_deviation, std::abs(mass - rep.pair_mass));
    if (std::gcd(c, m) == 1) rep.target_probability += mass;
  }
  for (std::size_t i = 0; i < dist.indices.size(); ++i) {
    const std::int64_t c = dist.indices[i] / m;
    const std::int64_t d = dist.indices[i] % m;
    if ((d + r * c) % m != 0)
      rep.max_off_line_mass = std::max(rep.max_off_line_mass, dist.probabilities[i]);
  }

  rep.holds = rep.max_on_line_deviation <= 1e-10 && rep.max_off_line_mass <= 1e-10 &&
              std::abs(rep.target_probability - rep.phi_ratio) <= 1e-10;
  return rep;
}

Distribution padded_dlog_distribution(std::int64_t p, std::int64_t g,
                                      std::int64_t x, std::int64_t q,
                                      std::int64_t k) {
  require_dlog_instance(p, g, x);
  padding_ratio(p, q);
  return full_distribution(
      MultiDimInstance::of(padded_dims(p, q), dlog_preimage_tuples(p, g, x, k)));
}

double dlog_pair_bound(std::int64_t p, double s) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("need an odd prime p");
  if (!(s > 3.0 * kPi)) throw std::invalid_argument("need s > 3 pi");
  const double base = 1.0 - 3.0 * kPi / s;
  return base * base / (s * s * static_cast<double>(p - 1));
}

DlogCertificate certify_dlog_targets(std::int64_t p, std::int64_t g,
                                     std::int64_t x, std::int64_t q,
                                     std::int64_t k) {
  require_dlog_instance(p, g, x);
  const double s = padding_ratio(p, q);
  const std::int64_t m = p - 1;
  const std::int64_t r = discrete_log_oracle(p, g, x);
  const auto tuples = dlog_preimage_tuples(p, g, x, k);
  const MultiDimInstance inst = MultiDimInstance::of(padded_dims(p, q), tuples);
  const double delta =
      3.0 * static_cast<double>(m) * static_cast<double>(m) /
      (2.0 * static_cast<double>(q));

  DlogCertificate cert;
  cert.p = p;
  cert.q = q;
  cert.s = s;
  cert.k = k;
  cert.per_pair_bound = dlog_pair_bound(p, s);
  cert.aggregate_bound = cert.per_pair_bound * static_cast<double>(euler_phi(m));
  cert.min_pair_probability = 1.0;
  cert.v2_route_agrees = true;

  for (std::int64_t c = 0; c < m; ++c) {
    if (std::gcd(c, m) != 1) continue;
    const std::int64_t d = ((m - r * c % m) % m + m) % m;
    const std::int64_t c_prime = q * c / m;
    const std::int64_t d_prime = q * d / m;
    const double exact = prob_point_multi(inst, {c_prime, d_prime});
    cert.min_pair_probability = std::min(cert.min_pair_probability, exact);
    cert.target_probability += exact;

    const QaupV2Input v2 = QaupV2Input::of(padded_dims(p, q), {c, d},
                                           {c_prime, d_prime}, tuples, delta);
    if (!qaup_v2_condition(v2)) {
      cert.v2_route_agrees = false;
      continue;
    }
    const BoundReport rep = qaup_v2_bound(v2);
    const bool matches =
        rep.inequality_holds &&
        std::abs(rep.lower_bound - cert.per_pair_bound) <=
            1e-12 * std::max(1.0, cert.per_pair_bound) &&
        std::abs(rep.exact_probability - exact) <= 1e-12;
    cert.v2_route_agrees = cert.v2_route_agrees && matches;
  }

  cert.per_pair_holds = cert.min_pair_probability >= cert.per_pair_bound - 1e-12;
  cert.aggregate_holds = cert.target_probability >= cert.aggregate_bound - 1e-12;
  return cert;
}

std::optional<std::pair<std::int64_t, std::int64_t>> invert_rounding(
    std::int64_t c_prime, std::int64_t d_prime, std::int64_t q, std::int64_t p) {
  const std::int64_t m = p - 1;
  if (m < 1 || q < m) throw std::invalid_argument("invert_rounding: need q >= p-1");
  auto invert_one = [&](std::int64_t v) -> std::optional<std::int64_t> {
    if (v < 0 || v >= q) return std::nullopt;
    const std::int64_t cand = (v * m + q - 1) / q;  // ceil(v (p-1) / q)
    if (cand >= m || q * cand / m != v) return std::nullopt;
    return cand;
  };
  const auto c = invert_one(c_prime);
  const auto d = invert_one(d_prime);
  if (!c || !d) return std::nullopt;
  return std::make_pair(*c, *d);
}

std::optional<std::int64_t> recover_r(std::int64_t c, std::int64_t d,
                                      std::int64_t p, std::int64_t g,
                                      std::int64_t x) {
  require_dlog_instance(p, g, x);
  const std::int64_t m = p - 1;
  if (c < 0 || c >= m || d < 0 || d >= m)
    throw std::invalid_argument("recover_r: pair out of range");
  if (std::gcd(c, m) != 1) return std::nullopt;
  const std::int64_t r = (m - d) % m * mod_inverse(c, m) % m;
  if (mod_pow(g, r, p) != x % p) return std::nullopt;
  return r;
}

std::string DlogTranscript::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["g"] = g;
  j["x"] = x;
  j["q"] = q;
  j["s"] = s;
  j["measurements"] = nlohmann::ordered_json::array();
  for (const DlogMeasurement& rec : measurements) {
    nlohmann::ordered_json m;
    m["k"] = rec.k;
    m["c_prime"] = rec.c_prime;
    m["d_prime"] = rec.d_prime;
    m["c"] = rec.c ? nlohmann::ordered_json(*rec.c) : nullptr;
    m["d"] = rec.d ? nlohmann::ordered_json(*rec.d) : nullptr;
    m["candidate_r"] =
        rec.candidate_r ? nlohmann::ordered_json(*rec.candidate_r) : nullptr;
    m["accepted"] = rec.accepted;
    j["measurements"].push_back(std::move(m));
  }
  j["r"] = r;
  j["success"] = success;
  j["bounds"] = {{"per_pair", per_pair_bound}, {"aggregate", aggregate_bound}};
  return j.dump(2);
}

DlogTranscript run_dlog(const DlogConfig& config) {
  require_dlog_instance(config.p, config.g, config.x);
  if (config.max_repetitions < 1)
    throw std::invalid_argument("run_dlog: need a positive budget");
  if (!(config.s_min > 3.0 * kPi))
    throw std::invalid_argument("run_dlog: need s_min > 3 pi");

  const std::int64_t m = config.p - 1;
  std::int64_t q = next_power_of_two_at_least(m + 1);
  while (static_cast<double>(q) / static_cast<double>(m) <= config.s_min) q <<= 1;

  DlogTranscript tr;
  tr.p = config.p;
  tr.g = config.g;
  tr.x = config.x;
  tr.q = q;
  tr.s = static_cast<double>(q) / static_cast<double>(m);
  tr.seed = config.seed;
  tr.per_pair_bound = dlog_pair_bound(config.p, tr.s);
  tr.aggregate_bound = tr.per_pair_bound * static_cast<double>(euler_phi(m));

  std::mt19937_64 rng(config.seed);
  std::vector<std::optional<Distribution>> cache(static_cast<std::size_t>(m));

  for (std::int64_t rep = 0; rep < config.max_repetitions && !tr.success; ++rep) {
    // The second register is uniform over the observed values, because each
    // preimage class has the same size p - 1.
    const std::int64_t k =
        static_cast<std::int64_t>(unit_double(rng) * static_cast<double>(m));
    auto& slot = cache[static_cast<std::size_t>(k)];
    if (!slot)
      slot = padded_dlog_distribution(config.p, config.g, config.x, q, k);
    const std::int64_t flat = sample(*slot, rng);

    DlogMeasurement rec;
    rec.k = k;
    rec.c_prime = flat / q;
    rec.d_prime = flat % q;
    const auto pair = invert_rounding(rec.c_prime, rec.d_prime, q, config.p);
    if (pair) {
      rec.c = pair->first;
      rec.d = pair->second;
      rec.candidate_r = recover_r(pair->first, pair->second, config.p, config.g,
                                  config.x);
      if (rec.candidate_r) {
        rec.accepted = true;
        tr.r = *rec.candidate_r;
        tr.success = true;
      }
    }
    tr.measurements.push_back(std::move(rec));
  }
  return tr;
}

}  // namespace qaup
