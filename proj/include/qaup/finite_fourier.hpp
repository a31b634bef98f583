#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace qaup {

/// Complex vector indexed by Z_q.
struct Signal {
  std::int64_t q = 1;
  std::vector<std::complex<double>> values;

  static Signal zeros(std::int64_t q);
  /// Standard basis vector: 1 at position x, 0 elsewhere.
  static Signal basis(std::int64_t q, std::int64_t x);
};

/// Sorted duplicate-free subset of Z_q.  May be empty in general; the
/// operator constructors below reject empty sets.
struct IndexSet {
  std::int64_t q = 1;
  std::vector<std::int64_t> members;

  /// Validates range, sorts, removes duplicates.
  static IndexSet of(std::int64_t q, std::vector<std::int64_t> members);
  static IndexSet full(std::int64_t q);
  std::int64_t size() const { return static_cast<std::int64_t>(members.size()); }
  bool empty() const { return members.empty(); }
  bool contains(std::int64_t x) const;
};

/// Forward transform, unnormalized, minus-sign phase:
///   out(y) = sum_x f(x) exp(-2 pi i x y / q).
/// Radix-2 in-place path when q is a power of two, direct summation
/// otherwise.  Agrees with dft_direct to high precision by construction.
Signal dft(const Signal& f);

/// Inverse transform with 1/q normalization and plus-sign phase.
Signal idft(const Signal& fhat);

/// Reference O(q^2) double-loop evaluation.  This is the normative
/// definition the optimized path is tested against.
Signal dft_direct(const Signal& f);
Signal idft_direct(const Signal& fhat);

/// Indices where |f(x)| > tol.
IndexSet support(const Signal& f, double tol = 1e-10);

/// Keep f on T, zero elsewhere.  T must be nonempty.
Signal time_limit(const Signal& f, const IndexSet& T);

/// Orthogonal projection onto signals whose spectrum lives in B:
/// idft(time_limit(dft(f), B)).  B must be nonempty.
Signal band_limit(const Signal& f, const IndexSet& B);

double norm2(const Signal& f);

/// Largest singular value of the composition (time-limit after
/// band-limit), by power iteration on the Gram operator applied
/// matrix-free through the transform.  Deterministic: all-ones start,
/// then one seeded random restart; the larger estimate wins.
/// q is capped at 1024.
double composed_operator_norm(const IndexSet& T, const IndexSet& B);

/// ||f - time_limit(f, T)|| / ||f||.  Zero signal is rejected.
double concentration_epsilon(const Signal& f, const IndexSet& T);

/// ||f - band_limit(f, B)|| / ||f||.  Zero signal is rejected.
double band_eta(const Signal& f, const IndexSet& B);

/// Support-size uncertainty check: |supp f| * |supp fhat| >= q.
bool check_up_v1(const Signal& f, double tol = 1e-10);

struct UncertaintyReport {
  double epsilon = 0;
  double eta = 0;
  double lower = 0;              // 1 - epsilon - eta (may be negative)
  double operator_term_norm = 0; // ||P_T R_B f|| / ||f||
  double upper = 0;              // sqrt(|T||B|/q)
  bool holds = false;
};

/// Concentration/band-limiting uncertainty report for one signal.
/// holds means lower <= operator_term_norm <= upper, with a negative
/// lower treated as vacuously satisfied.
UncertaintyReport check_up_v3(const Signal& f, const IndexSet& T,
                              const IndexSet& B);

namespace detail {
/// Table of exp(+2 pi i j / q) for j in [0, q); cached per thread for
/// the most recent q.  Sizes above 2^20 are rejected; callers fall back
/// to std::polar.
const std::vector<std::complex<double>>& unit_roots(std::int64_t q);
constexpr std::int64_t kRootsTableCap = std::int64_t{1} << 20;
}  // namespace detail

}  // namespace qaup
