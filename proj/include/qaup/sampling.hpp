#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "qaup/finite_fourier.hpp"

namespace qaup {

/// One run of the two-register template: the first register ranges over
/// [0, p), the transform is zero-padded to size q >= p, and preimages is
/// the set of first-register values consistent with the observed second
/// register, carried as a subset of Z_q with all members below p.
struct SamplingInstance {
  std::int64_t p = 1;
  std::int64_t q = 1;
  IndexSet preimages;
  std::optional<std::int64_t> observed_value;

  static SamplingInstance of(std::int64_t p, std::int64_t q, IndexSet preimages,
                             std::optional<std::int64_t> observed_value = std::nullopt);
};

/// One register of a multi-register instance: values live in [0, domain),
/// the transform is zero-padded to size q >= domain.
struct RegisterDim {
  std::int64_t domain = 1;
  std::int64_t q = 1;
};

struct MultiDimInstance {
  std::vector<RegisterDim> dims;
  /// Preimage tuples, one coordinate per register; sorted lexicographically,
  /// duplicate-free, nonempty.
  std::vector<std::vector<std::int64_t>> preimages;

  static MultiDimInstance of(std::vector<RegisterDim> dims,
                             std::vector<std::vector<std::int64_t>> preimages);
  std::int64_t flat_size() const;  // product of the per-register q
};

/// Probability mass over flat indices (row-major over the per-register
/// sizes).  Entries with mass at or below 1e-18 are omitted, which keeps
/// the stored support meaningful in the presence of roundoff; the running
/// sums back inverse-CDF sampling.
struct Distribution {
  std::vector<std::int64_t> sizes;
  std::vector<std::int64_t> indices;   // sorted, strictly increasing
  std::vector<double> probabilities;   // aligned with indices
  std::vector<double> cumulative;      // aligned running sums

  static Distribution of(std::vector<std::int64_t> sizes,
                         std::vector<std::int64_t> indices,
                         std::vector<double> probabilities);
  double probability_at(std::int64_t flat_index) const;  // 0 when absent
  double total() const;
};

/// All c in [0, p) with g(c) = b, as a subset of Z_q.  Empty preimages are
/// rejected: the template conditions on an observed value.
IndexSet preimage_set(const std::function<std::int64_t(std::int64_t)>& g,
                      std::int64_t p, std::int64_t b, std::int64_t q);

/// Exact single-outcome probability |sum_{c in B} exp(2 pi i c k / q)|^2
/// / (q |B|), by direct summation over the preimages.
double prob_point(const SamplingInstance& inst, std::int64_t k);

/// Sum of prob_point over T (which may be empty).
double prob_set(const SamplingInstance& inst, const IndexSet& T);

/// Same probability computed through the limiting operators applied to the
/// basis state at 0, scaled by q/|B|.  Must agree with prob_set to high
/// precision; this is the cross-check route, so it deliberately does NOT
/// share the direct-summation code path.  q is capped at 4096.
double prob_via_operators(const SamplingInstance& inst, const IndexSet& T);

/// Multi-register outcome probability
///   |sum_{tuples} prod_l exp(2 pi i a_l k_l / q_l)|^2 / (|B| prod q_l).
double prob_point_multi(const MultiDimInstance& inst,
                        const std::vector<std::int64_t>& k);

/// Exact enumeration of every outcome.  Caps: q (or the product of the
/// per-register q) at 2^24, preimage count at 2^16.
Distribution full_distribution(const SamplingInstance& inst);
Distribution full_distribution(const MultiDimInstance& inst);

/// Uniform double in [0, 1) from the top 53 bits of one generator draw.
/// Pinned here (rather than using a library distribution) so transcripts
/// are stable across standard-library versions.
double unit_double(std::mt19937_64& rng);

/// Inverse-CDF draw; deterministic given the generator state.
std::int64_t sample(const Distribution& dist, std::mt19937_64& rng);

/// Margin of the concentration/band-limiting lower bound over the exact
/// probability for the basis state at 0 and the single best outcome:
///   (q/|B|) (1 - sqrt((q-|B|)/q))^2 - |B|/q.
/// Strictly negative whenever |B| < q, i.e. that route certifies nothing
/// for this state; the zero-padded bounds exist to fix exactly this.
double v3_zero_state_margin(std::int64_t q, std::int64_t b_size);

namespace detail {
/// sum_{c in members} exp(2 pi i c k / q); members must be nonnegative.
std::complex<double> phase_sum(const std::vector<std::int64_t>& members,
                               std::int64_t k, std::int64_t q);
}  // namespace detail

}  // namespace qaup
