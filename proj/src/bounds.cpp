#include "qaup/bounds.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qaup {

namespace {

using cd = std::complex<double>;

constexpr double kInequalityTol = 1e-10;

std::int64_t flatten(const std::vector<std::int64_t>& idx,
                     const std::vector<std::int64_t>& sizes) {
  std::int64_t flat = 0;
  for (std::size_t j = 0; j < idx.size(); ++j) flat = flat * sizes[j] + idx[j];
  return flat;
}

// sum over tuples of exp(2 pi i sum_l a_l k_l / m_l).
cd tuple_phase_sum(const std::vector<std::vector<std::int64_t>>& tuples,
                   const std::vector<std::int64_t>& k,
                   const std::vector<std::int64_t>& moduli) {
  cd acc = 0;
  for (const auto& tuple : tuples) {
    double ang = 0;
    for (std::size_t l = 0; l < moduli.size(); ++l)
      ang += 2.0 * std::numbers::pi *
             static_cast<double>(tuple[l] * k[l] % moduli[l]) /
             static_cast<double>(moduli[l]);
    acc += std::polar(1.0, ang);
  }
  return acc;
}

}  // namespace

bool phase_lemma_check(double x) {
  return std::abs(std::polar(1.0, x) - 1.0) <= std::abs(x) + 1e-12;
}

QaupV1Input QaupV1Input::of(std::int64_t p, std::int64_t q, std::int64_t k,
                            std::int64_t k_prime, std::int64_t shift,
                            IndexSet offsets, double delta) {
  if (p < 1 || q <= p) throw std::invalid_argument("QaupV1Input: need q > p >= 1");
  if (k < 0 || k >= p) throw std::invalid_argument("QaupV1Input: k out of [0, p)");
  if (k_prime < 0 || k_prime >= q)
    throw std::invalid_argument("QaupV1Input: k_prime out of [0, q)");
  if (offsets.q != p)
    throw std::invalid_argument("QaupV1Input: offsets must live in Z_p");
  if (offsets.empty()) throw std::invalid_argument("QaupV1Input: offsets empty");
  if (shift < 0 || shift + offsets.members.back() >= p)
    throw std::invalid_argument("QaupV1Input: shifted preimages must stay below p");
  if (!(delta >= 0)) throw std::invalid_argument("QaupV1Input: delta must be >= 0");

  QaupV1Input in;
  in.p = p;
  in.q = q;
  in.k = k;
  in.k_prime = k_prime;
  in.shift = shift;
  in.offsets = std::move(offsets);
  in.delta = delta;
  in.epsilon_num = k_prime * p - q * k;
  in.epsilon_den = p;
  const std::int64_t g = std::gcd(std::abs(in.epsilon_num), in.epsilon_den);
  in.epsilon_num /= g;
  in.epsilon_den /= g;

  // delta must dominate |epsilon| * sum(offsets); the product is exact in
  // 128-bit, the final division is the only rounding.
  std::int64_t offset_sum = 0;
  for (std::int64_t c : in.offsets.members) offset_sum += c;
  const __int128 prod =
      static_cast<__int128>(std::abs(in.epsilon_num)) * offset_sum;
  const long double floor_value =
      static_cast<long double>(prod) / static_cast<long double>(in.epsilon_den);
  if (static_cast<long double>(delta) < floor_value * (1 - 1e-12L))
    throw std::invalid_argument(
        "QaupV1Input: delta below |epsilon| * sum(offsets)");
  return in;
}

double QaupV1Input::epsilon() const {
  return static_cast<double>(epsilon_num) / static_cast<double>(epsilon_den);
}

IndexSet QaupV1Input::padded_preimages() const {
  std::vector<std::int64_t> members;
  members.reserve(offsets.members.size());
  for (std::int64_t c : offsets.members) members.push_back(shift + c);
  return IndexSet::of(q, std::move(members));
}

bool qaup_v1_condition(const QaupV1Input& in) {
  const double amp = std::abs(detail::phase_sum(in.offsets.members, in.k, in.p));
  return 2.0 * std::numbers::pi * in.delta / static_cast<double>(in.q) <= amp;
}

BoundReport qaup_v1_bound(const QaupV1Input& in) {
  if (!qaup_v1_condition(in))
    throw std::domain_error("qaup_v1_bound: admissibility condition fails");
  const double p = static_cast<double>(in.p);
  const double q = static_cast<double>(in.q);
  const double b = static_cast<double>(in.offsets.size());
  const double amp = std::abs(detail::phase_sum(in.offsets.members, in.k, in.p));
  const double norm_small = amp / p;
  const double root = std::sqrt(p / b) * norm_small -
                      2.0 * std::numbers::pi * in.delta / (q * std::sqrt(b * p));

  BoundReport rep;
  rep.lower_bound = p / q * root * root;
  const SamplingInstance inst = SamplingInstance::of(in.p, in.q, in.padded_preimages());
  rep.exact_probability = prob_point(inst, in.k_prime);
  rep.condition_holds = true;
  rep.inequality_holds = rep.lower_bound <= rep.exact_probability + kInequalityTol;
  rep.p = in.p;
  rep.q = in.q;
  rep.k = in.k;
  rep.k_prime = in.k_prime;
  rep.preimage_count = in.offsets.size();
  rep.epsilon = in.epsilon();
  rep.delta = in.delta;
  return rep;
}

BoundReport qaup_v1a_bound(RoundingKind kind, std::int64_t k, std::int64_t p,
                           std::int64_t q, const IndexSet& offsets,
                           double delta_bar, std::int64_t shift) {
  if (offsets.empty()) throw std::invalid_argument("qaup_v1a_bound: offsets empty");
  std::int64_t offset_sum = 0;
  for (std::int64_t c : offsets.members) offset_sum += c;
  if (!(delta_bar >= static_cast<double>(offset_sum)))
    throw std::invalid_argument("qaup_v1a_bound: delta_bar below sum(offsets)");
  if (p < 1 || q <= p || k < 0 || k >= p)
    throw std::invalid_argument("qaup_v1a_bound: bad p, q, k");

  std::int64_t k_prime = 0;
  switch (kind) {
    case RoundingKind::floor:
      k_prime = q * k / p;
      break;
    case RoundingKind::round:
      k_prime = (2 * q * k + p) / (2 * p);  // half rounds up
      break;
    case RoundingKind::ceil:
      k_prime = (q * k + p - 1) / p;
      break;
  }
  const QaupV1Input in =
      QaupV1Input::of(p, q, k, k_prime, shift, offsets, delta_bar);
  if (!qaup_v1_condition(in)) {
    // Vacuous case: report it instead of throwing so grids can sweep
    // every k with one uniform delta_bar.
    BoundReport rep;
    rep.condition_holds = false;
    rep.inequality_holds = false;
    rep.lower_bound = 0;
    const SamplingInstance inst =
        SamplingInstance::of(in.p, in.q, in.padded_preimages());
    rep.exact_probability = prob_point(inst, in.k_prime);
    rep.p = in.p;
    rep.q = in.q;
    rep.k = in.k;
    rep.k_prime = in.k_prime;
    rep.preimage_count = in.offsets.size();
    rep.epsilon = in.epsilon();
    rep.delta = in.delta;
    return rep;
  }
  return qaup_v1_bound(in);
}

QaupV2Input QaupV2Input::of(std::vector<RegisterDim> dims,
                            std::vector<std::int64_t> k,
                            std::vector<std::int64_t> k_prime,
                            std::vector<std::vector<std::int64_t>> preimages,
                            double delta) {
  // MultiDimInstance::of performs the dimension/tuple validation and
  // canonicalizes the tuple order.
  MultiDimInstance inst = MultiDimInstance::of(std::move(dims), std::move(preimages));
  const std::size_t n = inst.dims.size();
  if (k.size() != n || k_prime.size() != n)
    throw std::invalid_argument("QaupV2Input: outcome arity mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    if (k[j] < 0 || k[j] >= inst.dims[j].domain)
      throw std::invalid_argument("QaupV2Input: k out of range");
    if (k_prime[j] < 0 || k_prime[j] >= inst.dims[j].q)
      throw std::invalid_argument("QaupV2Input: k_prime out of range");
    if (inst.dims[j].q <= inst.dims[j].domain)
      throw std::invalid_argument("QaupV2Input: padded side must exceed domain");
  }
  if (!(delta >= 0)) throw std::invalid_argument("QaupV2Input: delta must be >= 0");

  QaupV2Input in;
  in.dims = std::move(inst.dims);
  in.preimages = std::move(inst.preimages);
  in.k = std::move(k);
  in.k_prime = std::move(k_prime);
  in.epsilon_num.resize(n);
  in.epsilon_den.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    in.epsilon_num[j] = in.k_prime[j] * in.dims[j].domain - in.dims[j].q * in.k[j];
    in.epsilon_den[j] = in.dims[j].domain;
    const std::int64_t g = std::gcd(std::abs(in.epsilon_num[j]), in.epsilon_den[j]);
    in.epsilon_num[j] /= g;
    in.epsilon_den[j] /= g;
  }
  in.delta = delta;
  if (static_cast<long double>(delta) <
      static_cast<long double>(in.phase_deviation_sum()) * (1 - 1e-9L))
    throw std::invalid_argument("QaupV2Input: delta below the phase deviation sum");
  return in;
}

double QaupV2Input::phase_deviation_sum() const {
  // Each per-register product is exact in 128-bit integers; only the
  // cross-register sum rounds, and at desk scale the summands are exact
  // long doubles, so the result is accurate to ~1e-18 relative.
  long double total = 0;
  for (const auto& tuple : preimages) {
    long double acc = 0;
    for (std::size_t l = 0; l < dims.size(); ++l) {
      const __int128 num = static_cast<__int128>(tuple[l]) * epsilon_num[l];
      const long double den = static_cast<long double>(epsilon_den[l]) *
                              static_cast<long double>(dims[l].q);
      acc += static_cast<long double>(num) / den;
    }
    total += acc < 0 ? -acc : acc;
  }
  return static_cast<double>(total);
}

bool qaup_v2_condition(const QaupV2Input& in) {
  std::vector<std::int64_t> domains;
  for (const RegisterDim& d : in.dims) domains.push_back(d.domain);
  const double amp = std::abs(tuple_phase_sum(in.preimages, in.k, domains));
  return 2.0 * std::numbers::pi * in.delta <= amp;
}

BoundReport qaup_v2_bound(const QaupV2Input& in) {
  if (!qaup_v2_condition(in))
    throw std::domain_error("qaup_v2_bound: admissibility condition fails");
  std::vector<std::int64_t> domains, padded;
  for (const RegisterDim& d : in.dims) {
    domains.push_back(d.domain);
    padded.push_back(d.q);
  }
  double p_bar = 1, q_bar = 1;
  for (const RegisterDim& d : in.dims) {
    p_bar *= static_cast<double>(d.domain);
    q_bar *= static_cast<double>(d.q);
  }
  const double b = static_cast<double>(in.preimages.size());
  const double amp = std::abs(tuple_phase_sum(in.preimages, in.k, domains));
  const double norm_small = amp / p_bar;
  const double root = std::sqrt(p_bar / b) * norm_small -
                      2.0 * std::numbers::pi * in.delta / std::sqrt(b * p_bar);

  BoundReport rep;
  rep.lower_bound = p_bar / q_bar * root * root;
  const MultiDimInstance inst = MultiDimInstance::of(in.dims, in.preimages);
  rep.exact_probability = prob_point_multi(inst, in.k_prime);
  rep.condition_holds = true;
  rep.inequality_holds = rep.lower_bound <= rep.exact_probability + kInequalityTol;
  rep.p = static_cast<std::int64_t>(p_bar + 0.5);
  rep.q = static_cast<std::int64_t>(q_bar + 0.5);
  rep.k = flatten(in.k, domains);
  rep.k_prime = flatten(in.k_prime, padded);
  rep.preimage_count = static_cast<std::int64_t>(in.preimages.size());
  rep.epsilon = in.phase_deviation_sum();
  rep.delta = in.delta;
  return rep;
}

}  // namespace qaup
