#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qaup/finite_fourier.hpp"
#include "qaup/sampling.hpp"

namespace qaup {

struct ReductionOutcome {
  enum class Kind { factor_found, retry, order_request };
  Kind kind = Kind::order_request;
  std::int64_t factor = 0;  // set when kind == factor_found
};

/// Classical scaffolding around order finding.  Without an order in hand
/// this either finds a factor outright (gcd shortcut) or asks for one.
/// Given a verified order r it finishes: odd r or x^{r/2} = -1 mod n mean
/// pick a new x; otherwise gcd(x^{r/2} - 1, n) is a nontrivial factor.
ReductionOutcome classical_reduction_step(std::int64_t n, std::int64_t x,
                                          std::optional<std::int64_t> r = std::nullopt);

/// {j t : 0 <= j < r, gcd(j, r) = 1} over Z_{r t}: the outcomes whose
/// reduced fraction recovers r when p = q = r t.  Size euler_phi(r).
IndexSet easy_case_target_set(std::int64_t r, std::int64_t t);

/// Exact verification of the unpadded case p = q = r t: the outcome
/// distribution must sit on the multiples of t with mass 1/r each, and
/// the target set must carry euler_phi(r) / r.
struct EasyCaseReport {
  std::int64_t r = 0;
  std::int64_t t = 0;
  std::int64_t p = 0;
  double target_probability = 0;
  double phi_over_r = 0;
  bool support_on_multiples = false;
  bool mass_uniform = false;
  bool target_mass_matches = false;
  /// phi(r)/r > loglog_constant / log(log(r)) for r >= 6 (below that the
  /// double log is too small for any constant); a deliberately slack
  /// explicit form of the classical totient lower bound.
  double loglog_constant = 0.15;
  bool loglog_witness = false;
  bool holds = false;
};
EasyCaseReport easy_case_check(std::int64_t r, std::int64_t t);

struct PipelineParams {
  std::int64_t p_prime = 0;  // power of two strictly between (r')^2 and 2(r')^2
  std::int64_t t = 0;        // floor(p_prime / r)
  std::int64_t p = 0;        // r t
  std::int64_t q = 0;        // least power of two with q/p above the slack floor
  double s = 0;              // q / p
};

/// Verification-side parameter selection from the true order r and a
/// search value r_prime in (2r, 4r).  The slack floor on s is
/// max(s_min, 2 pi): both padded-bound shapes need s > 2 pi.
PipelineParams choose_parameters(std::int64_t r, std::int64_t r_prime,
                                 double s_min = 0.0);

struct GeneralPreimage {
  IndexSet preimages;            // over Z_{p_prime}
  std::int64_t observed_value = 0;
  std::int64_t shift = 0;        // least element
  std::int64_t count = 0;        // t or t + 1
  bool extended = false;         // true when count == t + 1
};

/// Preimages of b under j -> x^j mod n on [0, p_prime): an arithmetic
/// progression with step the order of x, of length t or t + 1.
GeneralPreimage general_case_preimage(std::int64_t n, std::int64_t x,
                                      std::int64_t p_prime, std::int64_t b);

struct GeneralBound {
  double per_point = 0;  // lower bound on one target outcome
  double aggregate = 0;  // per_point * euler_phi(r)
};

/// Certified lower bounds for the padded pipeline.  The plain shape
/// (preimage count t) needs s > pi; the extended shape (count t + 1)
/// additionally needs s > 2 pi and 4 r <= t < 32 r, where its constants
/// are valid.
GeneralBound general_case_bound(std::int64_t r, std::int64_t t, double s,
                                bool extended);

/// Full certificate for one parameter choice: the target outcomes, the
/// per-point and aggregate bounds, and the exact probabilities that must
/// dominate them.
struct TargetCertificate {
  std::int64_t r = 0;
  std::int64_t t = 0;
  std::int64_t p_prime = 0;
  std::int64_t p = 0;
  std::int64_t q = 0;
  double s = 0;
  bool extended = false;
  std::int64_t shift = 0;
  std::vector<std::int64_t> targets;  // floor(q k / p) over the good k
  double per_point_bound = 0;
  double aggregate_bound = 0;
  double min_point_probability = 0;
  double target_probability = 0;
  bool per_point_holds = false;
  bool aggregate_holds = false;
  /// Extended shape only: |full sum| >= |head sum| (1 - s/(2t(s - pi)))
  /// at every target, the amplitude chain behind the extended constants.
  bool amplitude_chain_holds = true;
};
TargetCertificate certify_targets(std::int64_t r, std::int64_t r_prime,
                                  std::int64_t shift, bool extended,
                                  double s_min = 0.0);

struct FactoringConfig {
  std::int64_t n = 15;             // odd composite, >= 15
  std::uint64_t seed = 1;
  double s_min = 6.5;              // kept above 2 pi by the driver
  std::int64_t max_repetitions = 200;  // measurement budget
};

struct MeasurementRecord {
  std::int64_t x = 0;
  std::int64_t r_prime = 0;
  std::int64_t p_prime = 0;
  std::int64_t q = 0;
  std::int64_t observed_value = 0;
  std::int64_t preimage_count = 0;
  bool extended = false;
  std::int64_t k_prime = 0;
  std::optional<std::int64_t> candidate_r;
  bool accepted = false;
};

struct Transcript {
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::int64_t x = 0;        // x of the concluding attempt
  std::int64_t r_oracle = 0; // brute-force order, recorded for verification only
  std::int64_t p_prime = 0;
  std::int64_t p = 0;
  std::int64_t q = 0;
  double s = 0;
  std::vector<MeasurementRecord> measurements;
  std::vector<std::int64_t> r_candidates;
  std::int64_t factor = 0;
  bool success = false;
  double per_point_bound = 0;
  double aggregate_bound = 0;
  double target_probability = 0;
  /// Stable document; identical configs produce identical bytes.
  std::string to_json() const;
};

/// End-to-end driver.  The recovery path sees only the measurements, the
/// search values r_prime and the padded sizes; the true order enters the
/// transcript purely as a verification record.  Exhausting the budget
/// yields success = false, never an exception.
Transcript run_factoring(const FactoringConfig& config);

}  // namespace qaup
