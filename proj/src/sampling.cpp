#include "qaup/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qaup {

namespace {

using cd = std::complex<double>;

constexpr std::int64_t kEnumerationCap = std::int64_t{1} << 24;
constexpr std::int64_t kPreimageCap = std::int64_t{1} << 16;
constexpr std::int64_t kOperatorRouteCap = 4096;
constexpr double kMassFloor = 1e-18;

std::int64_t checked_flat_size(const std::vector<RegisterDim>& dims) {
  std::int64_t total = 1;
  for (const RegisterDim& d : dims) {
    if (d.domain < 1 || d.q < d.domain)
      throw std::invalid_argument("RegisterDim: need 1 <= domain <= q");
    if (total > kEnumerationCap / d.q)
      throw std::out_of_range("MultiDimInstance: flat size above 2^24");
    total *= d.q;
  }
  return total;
}

}  // namespace

namespace detail {

cd phase_sum(const std::vector<std::int64_t>& members, std::int64_t k,
             std::int64_t q) {
  const std::int64_t kk = ((k % q) + q) % q;
  cd acc = 0;
  if (q <= kRootsTableCap) {
    const auto& roots = unit_roots(q);
    for (std::int64_t c : members) acc += roots[c % q * kk % q];
  } else {
    for (std::int64_t c : members) {
      const double ang = 2.0 * std::numbers::pi *
                         static_cast<double>(c % q * kk % q) /
                         static_cast<double>(q);
      acc += std::polar(1.0, ang);
    }
  }
  return acc;
}

}  // namespace detail

SamplingInstance SamplingInstance::of(std::int64_t p, std::int64_t q,
                                      IndexSet preimages,
                                      std::optional<std::int64_t> observed_value) {
  if (p < 1 || q < p) throw std::invalid_argument("SamplingInstance: need 1 <= p <= q");
  if (preimages.q != q)
    throw std::invalid_argument("SamplingInstance: preimage set must live in Z_q");
  if (preimages.empty())
    throw std::invalid_argument("SamplingInstance: preimage set must be nonempty");
  if (preimages.members.back() >= p)
    throw std::invalid_argument("SamplingInstance: preimages must lie below p");
  SamplingInstance inst;
  inst.p = p;
  inst.q = q;
  inst.preimages = std::move(preimages);
  inst.observed_value = observed_value;
  return inst;
}

MultiDimInstance MultiDimInstance::of(
    std::vector<RegisterDim> dims,
    std::vector<std::vector<std::int64_t>> preimages) {
  if (dims.empty()) throw std::invalid_argument("MultiDimInstance: no registers");
  checked_flat_size(dims);
  if (preimages.empty())
    throw std::invalid_argument("MultiDimInstance: preimage set must be nonempty");
  for (const auto& tuple : preimages) {
    if (tuple.size() != dims.size())
      throw std::invalid_argument("MultiDimInstance: tuple arity mismatch");
    for (std::size_t j = 0; j < tuple.size(); ++j)
      if (tuple[j] < 0 || tuple[j] >= dims[j].domain)
        throw std::invalid_argument("MultiDimInstance: coordinate out of range");
  }
  std::sort(preimages.begin(), preimages.end());
  preimages.erase(std::unique(preimages.begin(), preimages.end()), preimages.end());
  MultiDimInstance inst;
  inst.dims = std::move(dims);
  inst.preimages = std::move(preimages);
  return inst;
}

std::int64_t MultiDimInstance::flat_size() const { return checked_flat_size(dims); }

Distribution Distribution::of(std::vector<std::int64_t> sizes,
                              std::vector<std::int64_t> indices,
                              std::vector<double> probabilities) {
  if (sizes.empty()) throw std::invalid_argument("Distribution: no sizes");
  std::int64_t flat = 1;
  for (std::int64_t s : sizes) {
    if (s < 1) throw std::invalid_argument("Distribution: sizes must be >= 1");
    if (flat > kEnumerationCap / s)
      throw std::out_of_range("Distribution: flat size above 2^24");
    flat *= s;
  }
  if (indices.size() != probabilities.size())
    throw std::invalid_argument("Distribution: index/probability length mismatch");
  double running = 0;
  std::vector<double> cumulative(probabilities.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= flat)
      throw std::invalid_argument("Distribution: index out of range");
    if (i > 0 && indices[i] <= indices[i - 1])
      throw std::invalid_argument("Distribution: indices must strictly increase");
    if (probabilities[i] < 0 || probabilities[i] > 1 + 1e-9)
      throw std::invalid_argument("Distribution: probability out of [0, 1]");
    running += probabilities[i];
    cumulative[i] = running;
  }
  if (std::abs(running - 1.0) > 1e-9)
    throw std::invalid_argument("Distribution: total mass must be 1");
  Distribution d;
  d.sizes = std::move(sizes);
  d.indices = std::move(indices);
  d.probabilities = std::move(probabilities);
  d.cumulative = std::move(cumulative);
  return d;
}

double Distribution::probability_at(std::int64_t flat_index) const {
  auto it = std::lower_bound(indices.begin(), indices.end(), flat_index);
  if (it == indices.end() || *it != flat_index) return 0.0;
  return probabilities[static_cast<std::size_t>(it - indices.begin())];
}

double Distribution::total() const {
  return cumulative.empty() ? 0.0 : cumulative.back();
}

IndexSet preimage_set(const std::function<std::int64_t(std::int64_t)>& g,
                      std::int64_t p, std::int64_t b, std::int64_t q) {
  if (p < 1 || q < p) throw std::invalid_argument("preimage_set: need 1 <= p <= q");
  std::vector<std::int64_t> members;
  for (std::int64_t c = 0; c < p; ++c)
    if (g(c) == b) members.push_back(c);
  if (members.empty())
    throw std::invalid_argument("preimage_set: value is not attained");
  return IndexSet::of(q, std::move(members));
}

double prob_point(const SamplingInstance& inst, std::int64_t k) {
  const cd s = detail::phase_sum(inst.preimages.members, k, inst.q);
  return std::norm(s) /
         (static_cast<double>(inst.q) * static_cast<double>(inst.preimages.size()));
}

double prob_set(const SamplingInstance& inst, const IndexSet& T) {
  if (T.q != inst.q) throw std::invalid_argument("prob_set: modulus mismatch");
  double acc = 0;
  for (std::int64_t k : T.members) acc += prob_point(inst, k);
  return acc;
}

double prob_via_operators(const SamplingInstance& inst, const IndexSet& T) {
  if (T.q != inst.q) throw std::invalid_argument("prob_via_operators: modulus mismatch");
  if (inst.q > kOperatorRouteCap)
    throw std::out_of_range("prob_via_operators: q too large for the operator route");
  if (T.empty()) return 0.0;
  const Signal start = Signal::basis(inst.q, 0);
  const Signal projected = time_limit(band_limit(start, inst.preimages), T);
  const double n = norm2(projected);
  return static_cast<double>(inst.q) / static_cast<double>(inst.preimages.size()) *
         n * n;
}

double prob_point_multi(const MultiDimInstance& inst,
                        const std::vector<std::int64_t>& k) {
  const std::size_t n = inst.dims.size();
  if (k.size() != n) throw std::invalid_argument("prob_point_multi: arity mismatch");
  for (std::size_t j = 0; j < n; ++j)
    if (k[j] < 0 || k[j] >= inst.dims[j].q)
      throw std::invalid_argument("prob_point_multi: outcome out of range");

  bool same_q = true;
  for (const RegisterDim& d : inst.dims) same_q = same_q && d.q == inst.dims[0].q;

  cd acc = 0;
  if (same_q && inst.dims[0].q <= detail::kRootsTableCap) {
    const std::int64_t q = inst.dims[0].q;
    const auto& roots = detail::unit_roots(q);
    for (const auto& tuple : inst.preimages) {
      std::int64_t idx = 0;
      for (std::size_t j = 0; j < n; ++j) idx = (idx + tuple[j] * k[j]) % q;
      acc += roots[idx];
    }
  } else {
    for (const auto& tuple : inst.preimages) {
      double ang = 0;
      for (std::size_t j = 0; j < n; ++j)
        ang += 2.0 * std::numbers::pi *
               static_cast<double>(tuple[j] * k[j] % inst.dims[j].q) /
               static_cast<double>(inst.dims[j].q);
      acc += std::polar(1.0, ang);
    }
  }
  return std::norm(acc) / (static_cast<double>(inst.preimages.size()) *
                           static_cast<double>(inst.flat_size()));
}

Distribution full_distribution(const SamplingInstance& inst) {
  if (inst.q > kEnumerationCap)
    throw std::out_of_range("full_distribution: q above 2^24");
  if (inst.preimages.size() > kPreimageCap)
    throw std::out_of_range("full_distribution: preimage set above 2^16");
  std::vector<std::int64_t> indices;
  std::vector<double> probs;
  for (std::int64_t k = 0; k < inst.q; ++k) {
    const double pr = prob_point(inst, k);
    if (pr > kMassFloor) {
      indices.push_back(k);
      probs.push_back(pr);
    }
  }
  return Distribution::of({inst.q}, std::move(indices), std::move(probs));
}

Distribution full_distribution(const MultiDimInstance& inst) {
  const std::int64_t flat = inst.flat_size();
  if (static_cast<std::int64_t>(inst.preimages.size()) > kPreimageCap)
    throw std::out_of_range("full_distribution: preimage set above 2^16");
  const std::size_t n = inst.dims.size();
  std::vector<std::int64_t> k(n, 0);
  std::vector<std::int64_t> indices;
  std::vector<double> probs;
  for (std::int64_t flat_index = 0; flat_index < flat; ++flat_index) {
    std::int64_t rest = flat_index;
    for (std::size_t j = n; j-- > 0;) {
      k[j] = rest % inst.dims[j].q;
      rest /= inst.dims[j].q;
    }
    const double pr = prob_point_multi(inst, k);
    if (pr > kMassFloor) {
      indices.push_back(flat_index);
      probs.push_back(pr);
    }
  }
  return Distribution::of(
      [&] {
        std::vector<std::int64_t> sizes;
        for (const RegisterDim& d : inst.dims) sizes.push_back(d.q);
        return sizes;
      }(),
      std::move(indices), std::move(probs));
}

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::int64_t sample(const Distribution& dist, std::mt19937_64& rng) {
  if (dist.indices.empty()) throw std::invalid_argument("sample: empty distribution");
  const double u = unit_double(rng) * dist.total();
  auto it = std::upper_bound(dist.cumulative.begin(), dist.cumulative.end(), u);
  if (it == dist.cumulative.end()) --it;
  return dist.indices[static_cast<std::size_t>(it - dist.cumulative.begin())];
}

double v3_zero_state_margin(std::int64_t q, std::int64_t b_size) {
  if (q < 1 || b_size < 1 || b_size > q)
    throw std::invalid_argument("v3_zero_state_margin: need 1 <= |B| <= q");
  const double qq = static_cast<double>(q);
  const double bb = static_cast<double>(b_size);
  const double eta = std::sqrt((qq - bb) / qq);
  const double bound = qq / bb * (1.0 - eta) * (1.0 - eta);
  return bound - bb / qq;
}

}  // namespace qaup
