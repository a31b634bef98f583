#pragma once

#include <cstdint>
#include <vector>

#include "qaup/finite_fourier.hpp"
#include "qaup/sampling.hpp"

namespace qaup {

/// |exp(ix) - 1| <= |x|, within 1e-12.  Property-test helper; the padded
/// bounds lean on this estimate, so it gets checked in its own right.
bool phase_lemma_check(double x);

enum class RoundingKind { floor, round, ceil };

/// Inputs of the one-register padded lower bound.  The preimage set is
/// B = shift + offsets with offsets anchored at 0; epsilon is the exact
/// rounding error k_prime - q k / p, kept as a reduced signed rational so
/// the admissibility checks never depend on floating-point rounding.
struct QaupV1Input {
  std::int64_t p = 1;
  std::int64_t q = 2;
  std::int64_t k = 0;        // target outcome at size p
  std::int64_t k_prime = 0;  // observed outcome at size q
  std::int64_t shift = 0;
  IndexSet offsets;          // subset of Z_p; shift + max(offsets) < p
  std::int64_t epsilon_num = 0;
  std::int64_t epsilon_den = 1;
  double delta = 0;          // must dominate |epsilon| * sum(offsets)

  static QaupV1Input of(std::int64_t p, std::int64_t q, std::int64_t k,
                        std::int64_t k_prime, std::int64_t shift,
                        IndexSet offsets, double delta);
  double epsilon() const;
  /// shift + offsets as a subset of Z_q (the actual preimage set).
  IndexSet padded_preimages() const;
};

/// One certified bound.  The echo fields flatten multi-register outcomes
/// row-major (k over the small sides, k_prime over the padded sides);
/// epsilon echoes the signed rounding error for one register and the
/// aggregate phase-deviation sum for several.
struct BoundReport {
  double lower_bound = 0;
  double exact_probability = 0;
  bool condition_holds = false;
  bool inequality_holds = false;
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int64_t k = 0;
  std::int64_t k_prime = 0;
  std::int64_t preimage_count = 0;
  double epsilon = 0;
  double delta = 0;
};

/// Admissibility: 2 pi delta / q^2 <= (p/q) ||P_k R_B f||, with the norm
/// evaluated exactly as |sum over offsets of exp(2 pi i c k / p)| / p.
bool qaup_v1_condition(const QaupV1Input& in);

/// The one-register lower bound
///   (p/q) (sqrt(p/|B|) ||P_k R_B f|| - 2 pi delta / (q sqrt(|B| p)))^2
/// against the exact outcome probability at k_prime.  Throws when the
/// admissibility condition fails: a single bound call must not emit an
/// unsound certificate.  Sweeps check qaup_v1_condition first.
BoundReport qaup_v1_bound(const QaupV1Input& in);

/// Rounding-based corollary: k_prime is constructed from k by the chosen
/// rounding (|epsilon| < 1 automatically), and one uniform delta_bar valid
/// for every k is used; delta_bar must dominate sum(offsets).  A failed
/// admissibility condition comes back as condition_holds = false rather
/// than an exception, so grids can sweep every k.
BoundReport qaup_v1a_bound(RoundingKind kind, std::int64_t k, std::int64_t p,
                           std::int64_t q, const IndexSet& offsets,
                           double delta_bar, std::int64_t shift = 0);

/// Inputs of the multi-register bound.  Registers have small side
/// dims[j].domain and padded side dims[j].q; epsilon_j is the exact
/// rational k_prime_j - q_j k_j / domain_j.
struct QaupV2Input {
  std::vector<RegisterDim> dims;
  std::vector<std::int64_t> k;
  std::vector<std::int64_t> k_prime;
  std::vector<std::vector<std::int64_t>> preimages;  // tuples over the domains
  std::vector<std::int64_t> epsilon_num;
  std::vector<std::int64_t> epsilon_den;
  double delta = 0;  // must dominate phase_deviation_sum()

  static QaupV2Input of(std::vector<RegisterDim> dims, std::vector<std::int64_t> k,
                        std::vector<std::int64_t> k_prime,
                        std::vector<std::vector<std::int64_t>> preimages,
                        double delta);
  /// Sum over preimage tuples of |sum_l a_l epsilon_l / q_l|: the exact
  /// total phase deviation the rounding introduces, and the floor every
  /// admissible delta must dominate.
  double phase_deviation_sum() const;
};

/// Admissibility: 2 pi delta <= |sum over tuples of the small-side phases|.
bool qaup_v2_condition(const QaupV2Input& in);

/// Multi-register lower bound
///   (pbar/qbar) (sqrt(pbar/|B|) ||P_k R_B f|| - 2 pi delta / sqrt(|B| pbar))^2
/// with pbar, qbar the products of the small and padded sides.  A
/// one-register input reproduces qaup_v1_bound exactly when delta here
/// equals the one-register delta divided by q.
BoundReport qaup_v2_bound(const QaupV2Input& in);

}  // namespace qaup
