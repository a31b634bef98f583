#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qaup/sampling.hpp"

namespace qaup {

/// Brute-force discrete log: least r >= 0 with g^r = x mod p.  The
/// simulator needs it to enumerate preimage sets; the recovery path only
/// ever touches it through mod_pow validation of candidates.
std::int64_t discrete_log_oracle(std::int64_t p, std::int64_t g, std::int64_t x);

/// True iff g generates the multiplicative group mod the odd prime p.
bool is_generator(std::int64_t p, std::int64_t g);

/// Preimage tuples {(a, b) : a = k + r b mod (p-1)} of the observed value
/// g^k under (a, b) -> g^a x^{-b} mod p.  Size exactly p - 1.
std::vector<std::vector<std::int64_t>> dlog_preimage_tuples(std::int64_t p,
                                                            std::int64_t g,
                                                            std::int64_t x,
                                                            std::int64_t k);

/// Unpadded two-register check: mass exactly 1/(p-1) on every pair of the
/// line d = -r c mod (p-1), zero off the line, and phi(p-1)/(p-1) on the
/// pairs with invertible c.
struct DlogEasyReport {
  std::int64_t p = 0;
  std::int64_t r = 0;  // oracle value
  double pair_mass = 0;
  double max_on_line_deviation = 0;
  double max_off_line_mass = 0;
  double target_probability = 0;
  double phi_ratio = 0;
  bool holds = false;
};
DlogEasyReport easy_case_dlog_check(std::int64_t p, std::int64_t g,
                                    std::int64_t x);

/// Exact padded distribution over (c', d'), flattened row-major, for the
/// observed value g^k.  q must be a power of two with q/(p-1) > 3 pi.
Distribution padded_dlog_distribution(std::int64_t p, std::int64_t g,
                                      std::int64_t x, std::int64_t q,
                                      std::int64_t k = 0);

/// Per-pair lower bound (1 / (s^2 (p-1))) (1 - 3 pi / s)^2 for s > 3 pi.
double dlog_pair_bound(std::int64_t p, double s);

/// Certificate over the rounded images of the good pairs: each must carry
/// at least the per-pair bound, their sum at least phi(p-1) times it, and
/// the same lower bound must be reproduced through the general
/// multi-register machinery with delta = 3 (p-1)^2 / (2 q).
struct DlogCertificate {
  std::int64_t p = 0;
  std::int64_t q = 0;
  double s = 0;
  std::int64_t k = 0;
  double per_pair_bound = 0;
  double aggregate_bound = 0;
  double min_pair_probability = 0;
  double target_probability = 0;
  bool per_pair_holds = false;
  bool aggregate_holds = false;
  bool v2_route_agrees = false;
};
DlogCertificate certify_dlog_targets(std::int64_t p, std::int64_t g,
                                     std::int64_t x, std::int64_t q,
                                     std::int64_t k = 0);

/// Invert c' = floor(q c / (p-1)) and d' = floor(q d / (p-1)) when the
/// preimages exist (they are unique because q > p-1); absent otherwise.
std::optional<std::pair<std::int64_t, std::int64_t>> invert_rounding(
    std::int64_t c_prime, std::int64_t d_prime, std::int64_t q, std::int64_t p);

/// r = -d c^{-1} mod (p-1) when c is invertible, accepted only if
/// g^r = x mod p; absent otherwise.
std::optional<std::int64_t> recover_r(std::int64_t c, std::int64_t d,
                                      std::int64_t p, std::int64_t g,
                                      std::int64_t x);

struct DlogConfig {
  std::int64_t p = 11;
  std::int64_t g = 2;
  std::int64_t x = 8;
  std::uint64_t seed = 1;
  double s_min = 10.0;  // kept above 3 pi by the driver
  /// Only exact floor images of the good pairs are accepted, so one round
  /// succeeds with probability around 1/400 at p = 11; the default budget
  /// keeps bare runs reliable.
  std::int64_t max_repetitions = 5000;
};

struct DlogMeasurement {
  std::int64_t k = 0;
  std::int64_t c_prime = 0;
  std::int64_t d_prime = 0;
  std::optional<std::int64_t> c;
  std::optional<std::int64_t> d;
  std::optional<std::int64_t> candidate_r;
  bool accepted = false;
};

struct DlogTranscript {
  std::int64_t p = 0;
  std::int64_t g = 0;
  std::int64_t x = 0;
  std::int64_t q = 0;
  double s = 0;
  std::uint64_t seed = 0;
  std::vector<DlogMeasurement> measurements;
  std::int64_t r = -1;  // -1 until recovered
  bool success = false;
  double per_pair_bound = 0;
  double aggregate_bound = 0;
  /// Stable document; identical configs produce identical bytes.
  std::string to_json() const;
};

/// End-to-end driver: sample (c', d') from the exact padded distribution,
/// invert the rounding, recover r, repeat within the budget.  Exhaustion
/// yields success = false, never an exception.
DlogTranscript run_dlog(const DlogConfig& config);

}  // namespace qaup
