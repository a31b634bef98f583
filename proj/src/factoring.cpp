#include "qaup/factoring.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "qaup/numtheory.hpp"

namespace qaup {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kSizeCap = std::int64_t{1} << 24;
constexpr std::int64_t kLadderWorkCap = std::int64_t{1} << 27;

std::int64_t isqrt64(std::int64_t v) {
  if (v < 0) throw std::invalid_argument("isqrt64: negative");
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (s > 0 && s * s > v) --s;
  while ((s + 1) * (s + 1) <= v) ++s;
  return s;
}

void require_odd_composite(std::int64_t n) {
  if (n < 15 || n % 2 == 0 || is_prime(n))
    throw std::invalid_argument("need an odd composite n >= 15");
}

}  // namespace

ReductionOutcome classical_reduction_step(std::int64_t n, std::int64_t x,
                                          std::optional<std::int64_t> r) {
  require_odd_composite(n);
  if (x <= 1 || x >= n)
    throw std::invalid_argument("classical_reduction_step: x out of range");
  const std::int64_t g = gcd(x, n);
  if (g > 1) return {ReductionOutcome::Kind::factor_found, g};
  if (!r) return {ReductionOutcome::Kind::order_request, 0};
  if (*r < 1 || mod_pow(x, *r, n) != 1)
    throw std::invalid_argument("classical_reduction_step: r is not a period of x");
  if (*r % 2 == 1) return {ReductionOutcome::Kind::retry, 0};
  const std::int64_t y = mod_pow(x, *r / 2, n);
  if (y == n - 1) return {ReductionOutcome::Kind::retry, 0};
  if (y == 1) return {ReductionOutcome::Kind::retry, 0};  // r was not minimal
  // y^2 = 1 mod n with y != +-1, so both gcd(y -+ 1, n) are nontrivial.
  return {ReductionOutcome::Kind::factor_found, gcd(y - 1, n)};
}

IndexSet easy_case_target_set(std::int64_t r, std::int64_t t) {
  if (r < 1 || t < 1) throw std::invalid_argument("easy_case_target_set: need r, t >= 1");
  if (r > kSizeCap / t) throw std::out_of_range("easy_case_target_set: r t too large");
  std::vector<std::int64_t> members;
  for (std::int64_t j = 0; j < r; ++j)
    if (std::gcd(j, r) == 1) members.push_back(j * t);
  return IndexSet::of(r * t, std::move(members));
}

EasyCaseReport easy_case_check(std::int64_t r, std::int64_t t) {
  if (r < 1 || t < 1) throw std::invalid_argument("easy_case_check: need r, t >= 1");
  if (r > kSizeCap / t) throw std::out_of_range("easy_case_check: r t too large");
  const std::int64_t p = r * t;

  std::vector<std::int64_t> members;
  for (std::int64_t m = 0; m < t; ++m) members.push_back(m * r);
  const SamplingInstance inst =
      SamplingInstance::of(p, p, IndexSet::of(p, std::move(members)));
  const Distribution dist = full_distribution(inst);

  EasyCaseReport rep;
  rep.r = r;
  rep.t = t;
  rep.p = p;
  rep.phi_over_r = static_cast<double>(euler_phi(r)) / static_cast<double>(r);

  rep.support_on_multiples = dist.indices.size() == static_cast<std::size_t>(r);
  for (std::int64_t idx : dist.indices)
    rep.support_on_multiples = rep.support_on_multiples && idx % t == 0;
  double worst = 0;
  for (double pr : dist.probabilities)
    worst = std::max(worst, std::abs(pr - 1.0 / static_cast<double>(r)));
  rep.mass_uniform = rep.support_on_multiples && worst <= 1e-10;

  rep.target_probability = prob_set(inst, easy_case_target_set(r, t));
  rep.target_mass_matches = std::abs(rep.target_probability - rep.phi_over_r) <= 1e-10;

  rep.loglog_witness =
      r < 6 || rep.phi_over_r >
                   rep.loglog_constant / std::log(std::log(static_cast<double>(r)));

  rep.holds = rep.support_on_multiples && rep.mass_uniform &&
              rep.target_mass_matches && rep.loglog_witness;
  return rep;
}

PipelineParams choose_parameters(std::int64_t r, std::int64_t r_prime,
                                 double s_min) {
  if (r < 1) throw std::invalid_argument("choose_parameters: need r >= 1");
  if (!(2 * r < r_prime && r_prime < 4 * r))
    throw std::invalid_argument("choose_parameters: need 2r < r' < 4r");
  const std::int64_t sq = r_prime * r_prime;
  PipelineParams params;
  params.p_prime = next_power_of_two_at_least(sq + 1);
  if (params.p_prime >= 2 * sq)
    throw std::domain_error(
        "choose_parameters: no power of two strictly between (r')^2 and 2(r')^2");
  params.t = params.p_prime / r;
  params.p = r * params.t;
  if (params.p <= 4 * r * r)
    throw std::logic_error("choose_parameters: p unexpectedly at or below 4 r^2");
  const double floor_s = std::max(s_min, 2.0 * kPi);
  std::int64_t q = next_power_of_two_at_least(params.p + 1);
  while (static_cast<double>(q) / static_cast<double>(params.p) <= floor_s) {
    if (q > kSizeCap / 2) throw std::out_of_range("choose_parameters: q above 2^24");
    q <<= 1;
  }
  params.q = q;
  params.s = static_cast<double>(q) / static_cast<double>(params.p);
  return params;
}

GeneralPreimage general_case_preimage(std::int64_t n, std::int64_t x,
                                      std::int64_t p_prime, std::int64_t b) {
  require_odd_composite(n);
  if (x <= 1 || x >= n || gcd(x, n) != 1)
    throw std::invalid_argument("general_case_preimage: x must be a unit mod n");
  if (p_prime < 1 || p_prime > kSizeCap)
    throw std::invalid_argument("general_case_preimage: p_prime out of range");

  std::vector<std::int64_t> members;
  std::int64_t acc = 1 % n;
  for (std::int64_t j = 0; j < p_prime; ++j) {
    if (acc == b) members.push_back(j);
    acc = acc * x % n;  // n < 2^31 keeps the product in 62 bits
  }
  if (members.empty())
    throw std::invalid_argument("general_case_preimage: value not attained");

  GeneralPreimage pre;
  pre.shift = members.front();
  pre.count = static_cast<std::int64_t>(members.size());
  pre.observed_value = b;
  std::int64_t step = p_prime;
  if (pre.count >= 2) {
    step = members[1] - members[0];
    for (std::size_t i = 2; i < members.size(); ++i)
      if (members[i] - members[i - 1] != step)
        throw std::logic_error("general_case_preimage: preimages not a progression");
  }
  pre.extended = pre.count == p_prime / step + 1;
  pre.preimages = IndexSet::of(p_prime, std::move(members));
  return pre;
}

GeneralBound general_case_bound(std::int64_t r, std::int64_t t, double s,
                                bool extended) {
  if (r < 1 || t < 1) throw std::invalid_argument("general_case_bound: need r, t >= 1");
  if (!(s > kPi)) throw std::invalid_argument("general_case_bound: need s > pi");
  const double base = 1.0 - kPi / s;
  GeneralBound gb;
  if (!extended) {
    gb.per_point = base * base / (s * static_cast<double>(r));
  } else {
    if (!(s > 2.0 * kPi))
      throw std::invalid_argument("general_case_bound: extended shape needs s > 2 pi");
    if (!(4 * r <= t && t < 32 * r))
      throw std::invalid_argument(
          "general_case_bound: extended constants need 4r <= t < 32r");
    const double corr =
        1.0 - s / (2.0 * static_cast<double>(t) * (s - kPi));
    gb.per_point = 4.0 / (33.0 * static_cast<double>(r) * s) * base * base * corr * corr;
  }
  gb.aggregate = gb.per_point * static_cast<double>(euler_phi(r));
  return gb;
}

TargetCertificate certify_targets(std::int64_t r, std::int64_t r_prime,
                                  std::int64_t shift, bool extended,
                                  double s_min) {
  const PipelineParams params = choose_parameters(r, r_prime, s_min);
  const std::int64_t count = extended ? params.t + 1 : params.t;
  if (extended && r * params.t >= params.p_prime)
    throw std::invalid_argument(
        "certify_targets: no t+1 point progression fits when r divides p_prime");
  if (shift < 0 || shift + (count - 1) * r >= params.p_prime)
    throw std::invalid_argument("certify_targets: preimages leave [0, p_prime)");

  std::vector<std::int64_t> members;
  for (std::int64_t m = 0; m < count; ++m) members.push_back(shift + m * r);
  const SamplingInstance inst = SamplingInstance::of(
      params.p_prime, params.q, IndexSet::of(params.q, members));
  const GeneralBound gb = general_case_bound(r, params.t, params.s, extended);

  TargetCertificate cert;
  cert.r = r;
  cert.t = params.t;
  cert.p_prime = params.p_prime;
  cert.p = params.p;
  cert.q = params.q;
  cert.s = params.s;
  cert.extended = extended;
  cert.shift = shift;
  cert.per_point_bound = gb.per_point;
  cert.aggregate_bound = gb.aggregate;
  cert.min_point_probability = 1.0;

  std::vector<std::int64_t> head(members.begin(),
                                 members.begin() + std::min<std::int64_t>(params.t, count));
  const double corr =
      1.0 - params.s / (2.0 * static_cast<double>(params.t) * (params.s - kPi));
  double total = 0;
  for (std::int64_t j = 0; j < r; ++j) {
    if (std::gcd(j, r) != 1) continue;
    const std::int64_t k = j * params.t;
    const std::int64_t k_prime = params.q * k / params.p;
    cert.targets.push_back(k_prime);
    const double exact = prob_point(inst, k_prime);
    cert.min_point_probability = std::min(cert.min_point_probability, exact);
    total += exact;
    if (extended) {
      const double amp_full =
          std::abs(detail::phase_sum(members, k_prime, params.q));
      const double amp_head = std::abs(detail::phase_sum(head, k_prime, params.q));
      if (amp_full + 1e-12 < amp_head * corr) cert.amplitude_chain_holds = false;
    }
  }
  cert.target_probability = total;
  cert.per_point_holds = cert.min_point_probability >= gb.per_point - 1e-12;
  cert.aggregate_holds = total >= gb.aggregate - 1e-12;
  return cert;
}

std::string Transcript::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["x"] = x;
  j["r_oracle"] = r_oracle;
  j["p_prime"] = p_prime;
  j["p"] = p;
  j["q"] = q;
  j["s"] = s;
  j["measurements"] = nlohmann::ordered_json::array();
  for (const MeasurementRecord& rec : measurements) {
    nlohmann::ordered_json m;
    m["x"] = rec.x;
    m["r_prime"] = rec.r_prime;
    m["p_prime"] = rec.p_prime;
    m["q"] = rec.q;
    m["b"] = rec.observed_value;
    m["preimage_count"] = rec.preimage_count;
    m["extended"] = rec.extended;
    m["k_prime"] = rec.k_prime;
    if (rec.candidate_r)
      m["candidate_r"] = *rec.candidate_r;
    else
      m["candidate_r"] = nullptr;
    m["accepted"] = rec.accepted;
    j["measurements"].push_back(std::move(m));
  }
  j["r_candidates"] = r_candidates;
  j["factor"] = factor;
  j["success"] = success;
  j["bounds"] = {{"per_point", per_point_bound},
                 {"aggregate", aggregate_bound},
                 {"target_probability", target_probability}};
  return j.dump(2);
}

Transcript run_factoring(const FactoringConfig& config) {
  require_odd_composite(config.n);
  if (config.max_repetitions < 1)
    throw std::invalid_argument("run_factoring: need a positive budget");
  if (!(config.s_min > kPi))
    throw std::invalid_argument("run_factoring: need s_min > pi");
  // Both padded bound shapes need s > 2 pi, so the driver never pads less
  // than that even when configured lower.
  const double floor_s = std::max(config.s_min, 2.0 * kPi);

  std::mt19937_64 rng(config.seed);
  Transcript tr;
  tr.n = config.n;
  tr.seed = config.seed;

  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, Distribution> cache;
  std::int64_t reps = 0;

  while (reps < config.max_repetitions && !tr.success) {
    const std::int64_t x =
        2 + static_cast<std::int64_t>(unit_double(rng) *
                                      static_cast<double>(config.n - 3));
    tr.x = x;
    const ReductionOutcome first = classical_reduction_step(config.n, x);
    if (first.kind == ReductionOutcome::Kind::factor_found) {
      tr.factor = first.factor;
      tr.success = true;
      tr.r_oracle = 0;  // order undefined for a non-unit
      break;
    }
    tr.r_oracle = multiplicative_order(x, config.n);

    bool fresh_x = false;
    for (std::int64_t r_prime = 3; !fresh_x && reps < config.max_repetitions;
         r_prime = 2 * (r_prime - 1) + 1) {
      // The order of a unit is below n, so once r_prime reaches 4n every
      // window (2r, 4r) lies behind us and climbing further cannot help.
      if (r_prime >= 4 * config.n) break;
      // Recovery-side parameter choice: only r_prime is known here, so the
      // padding ratio is taken against p_prime; p = r t is filled in after
      // a candidate order is verified.
      const std::int64_t sq = r_prime * r_prime;
      if (sq + 1 > kSizeCap) break;
      const std::int64_t p_prime = next_power_of_two_at_least(sq + 1);
      std::int64_t q = next_power_of_two_at_least(p_prime + 1);
      bool too_big = false;
      while (static_cast<double>(q) / static_cast<double>(p_prime) <= floor_s) {
        if (q > kSizeCap / 2) {
          too_big = true;
          break;
        }
        q <<= 1;
      }
      if (too_big) break;  // ladder exhausted, try a fresh x

      // Second-register measurement: a uniform argument determines the
      // observed value, which is exactly the preimage-weighted marginal.
      const std::int64_t arg = static_cast<std::int64_t>(
          unit_double(rng) * static_cast<double>(p_prime));
      const std::int64_t b = mod_pow(x, arg, config.n);
      const GeneralPreimage pre = general_case_preimage(config.n, x, p_prime, b);
      const std::int64_t step =
          pre.count >= 2 ? pre.preimages.members[1] - pre.preimages.members[0]
                         : p_prime;
      // Enumerating the outcome distribution costs q * count table hits.
      // Rungs past this budget are abandoned in favour of a fresh x; the
      // rungs that matter for desk-scale n stay far below it.
      if (q > kLadderWorkCap / pre.count) break;

      // The outcome distribution is invariant under shifting the preimage
      // set, so it is cached per (step, count, q) and computed anchored
      // at zero.
      const auto key = std::make_tuple(step, pre.count, q);
      auto it = cache.find(key);
      if (it == cache.end()) {
        std::vector<std::int64_t> base;
        for (std::int64_t m = 0; m < pre.count; ++m) base.push_back(m * step);
        const SamplingInstance base_inst =
            SamplingInstance::of(p_prime, q, IndexSet::of(q, std::move(base)));
        it = cache.emplace(key, full_distribution(base_inst)).first;
      }
      const std::int64_t k_prime = sample(it->second, rng);
      ++reps;

      MeasurementRecord rec;
      rec.x = x;
      rec.r_prime = r_prime;
      rec.p_prime = p_prime;
      rec.q = q;
      rec.observed_value = b;
      rec.preimage_count = pre.count;
      rec.extended = pre.extended;
      rec.k_prime = k_prime;

      const std::int64_t denom_bound = isqrt64(p_prime / 4);
      std::optional<std::int64_t> candidate;
      if (denom_bound >= 1)
        candidate = recover_denominator(Fraction::of(k_prime, q), denom_bound);
      rec.candidate_r = candidate;
      if (candidate) tr.r_candidates.push_back(*candidate);
      const bool accepted =
          candidate && mod_pow(x, *candidate, config.n) == 1;
      rec.accepted = accepted;
      tr.measurements.push_back(rec);
      if (!accepted) continue;

      const std::int64_t r = *candidate;
      tr.p_prime = p_prime;
      tr.q = q;
      const std::int64_t t = p_prime / r;
      tr.p = r * t;
      tr.s = static_cast<double>(q) / static_cast<double>(tr.p);
      if (tr.s > 2.0 * kPi &&
          (!pre.extended || (4 * r <= t && t < 32 * r))) {
        const GeneralBound gb = general_case_bound(r, t, tr.s, pre.extended);
        tr.per_point_bound = gb.per_point;
        tr.aggregate_bound = gb.aggregate;
        const SamplingInstance inst = SamplingInstance::of(
            p_prime, q, IndexSet::of(q, pre.preimages.members));
        double total = 0;
        for (std::int64_t jj = 0; jj < r; ++jj) {
          if (std::gcd(jj, r) != 1) continue;
          total += prob_point(inst, q * (jj * t) / tr.p);
        }
        tr.target_probability = total;
      }

      const ReductionOutcome fin = classical_reduction_step(config.n, x, r);
      if (fin.kind == ReductionOutcome::Kind::factor_found) {
        tr.factor = fin.factor;
        tr.success = true;
      } else {
        fresh_x = true;  // odd order or the -1 square root: new x
      }
      break;
    }
  }
  return tr;
}

}  // namespace qaup
