// qaup: command-line surface over the library.  Three families of
// subcommands: pipeline drivers (factor, dlog) that print transcripts,
// inequality suites (verify) that exit nonzero when any case fails, and
// bound tables (bound, sweep) pairing certified lower bounds with the
// exact probabilities they must stay below.
//
// Reports are JSON arrays (default) or RFC-4180 CSV with a header row;
// rows are sorted by their case key before emission.  Exit codes:
// 0 success, 1 algorithmic failure (a failing case or an exhausted
// budget), 2 usage or precondition error.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qaup/bounds.hpp"
#include "qaup/dlog.hpp"
#include "qaup/factoring.hpp"
#include "qaup/finite_fourier.hpp"
#include "qaup/numtheory.hpp"
#include "qaup/sampling.hpp"

namespace {

using nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

std::string pad_int(std::int64_t v, int width) {
  std::ostringstream os;
  os << std::setw(width) << std::setfill('0') << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Report plumbing.

std::string csv_field(const ordered_json& v) {
  const std::string raw = v.is_string() ? v.get<std::string>() : v.dump();
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string to_csv(const std::vector<ordered_json>& rows) {
  std::string out;
  if (rows.empty()) return out;
  bool first = true;
  for (auto it = rows.front().begin(); it != rows.front().end(); ++it) {
    if (!first) out += ',';
    first = false;
    out += csv_field(ordered_json(it.key()));
  }
  out += "\r\n";
  for (const ordered_json& row : rows) {
    first = true;
    for (auto it = row.begin(); it != row.end(); ++it) {
      if (!first) out += ',';
      first = false;
      out += csv_field(it.value());
    }
    out += "\r\n";
  }
  return out;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  require(static_cast<bool>(file), "cannot open output file: " + out_path);
  file << text;
}

void emit_report(std::vector<ordered_json> rows, const std::string& format,
                 const std::string& out_path) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ordered_json& a, const ordered_json& b) {
                     return a.at("case").get<std::string>() <
                            b.at("case").get<std::string>();
                   });
  std::string text;
  if (format == "csv") {
    text = to_csv(rows);
  } else {
    ordered_json arr = ordered_json::array();
    for (ordered_json& row : rows) arr.push_back(std::move(row));
    text = arr.dump(2);
    text += '\n';
  }
  write_output(text, out_path);
}

bool all_hold(const std::vector<ordered_json>& rows) {
  for (const ordered_json& row : rows)
    if (!row.at("holds").get<bool>()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Randomized case material.  Drawn through unit_double so a seed pins the
// whole suite, independent of standard-library distribution details.

qaup::Signal random_signal(std::int64_t q, std::mt19937_64& rng) {
  qaup::Signal f = qaup::Signal::zeros(q);
  for (auto& v : f.values)
    v = {2.0 * qaup::unit_double(rng) - 1.0, 2.0 * qaup::unit_double(rng) - 1.0};
  return f;
}

qaup::IndexSet random_nonempty_subset(std::int64_t q, std::mt19937_64& rng) {
  std::vector<std::int64_t> members;
  for (std::int64_t x = 0; x < q; ++x)
    if (qaup::unit_double(rng) < 0.5) members.push_back(x);
  if (members.empty())
    members.push_back(
        static_cast<std::int64_t>(qaup::unit_double(rng) * static_cast<double>(q)));
  return qaup::IndexSet::of(q, std::move(members));
}

qaup::IndexSet mask_subset(std::int64_t q, std::uint64_t mask) {
  std::vector<std::int64_t> members;
  for (std::int64_t x = 0; x < q; ++x)
    if (mask >> x & 1) members.push_back(x);
  return qaup::IndexSet::of(q, std::move(members));
}

std::int64_t rounded_outcome(qaup::RoundingKind kind, std::int64_t k,
                             std::int64_t p, std::int64_t q) {
  switch (kind) {
    case qaup::RoundingKind::floor: return q * k / p;
    case qaup::RoundingKind::round: return (2 * q * k + p) / (2 * p);
    case qaup::RoundingKind::ceil: return (q * k + p - 1) / p;
  }
  throw std::logic_error("unknown rounding kind");
}

std::string kind_name(qaup::RoundingKind kind) {
  switch (kind) {
    case qaup::RoundingKind::floor: return "floor";
    case qaup::RoundingKind::round: return "round";
    case qaup::RoundingKind::ceil: return "ceil";
  }
  return "?";
}

std::int64_t smallest_generator(std::int64_t p) {
  for (std::int64_t g = 2; g < p; ++g)
    if (qaup::is_generator(p, g)) return g;
  throw std::invalid_argument("p has no generator; it must be an odd prime");
}

std::int64_t dlog_padded_size(std::int64_t p, double s_min) {
  require(s_min > 3.0 * kPi, "dlog slack floor must exceed 3 pi");
  const std::int64_t m = p - 1;
  std::int64_t q = qaup::next_power_of_two_at_least(m + 1);
  while (static_cast<double>(q) / static_cast<double>(m) <= s_min) q <<= 1;
  return q;
}

// ---------------------------------------------------------------------------
// verify suites.

struct VerifyOptions {
  std::string mode;
  std::vector<std::int64_t> qs;
  std::vector<std::int64_t> rs;
  std::vector<std::int64_t> ps;
  std::vector<std::int64_t> dlog_ps;
  std::int64_t trials = 500;
  std::uint64_t seed = 12345;
  double s_min = 0.0;  // 0 picks the mode default
  std::int64_t p_max = 6;
  std::int64_t q_max = 12;
  std::int64_t r_easy_max = 12;
  std::int64_t t_easy_max = 16;
  std::string format = "json";
  std::string out;
};

double factor_slack(const VerifyOptions& opt) {
  return opt.s_min > 0.0 ? opt.s_min : 6.5;
}
double dlog_slack(const VerifyOptions& opt) {
  return opt.s_min > 0.0 ? opt.s_min : 10.0;
}

ordered_json up1_row(std::int64_t q, const std::string& label,
                     const qaup::Signal& f) {
  const std::int64_t time_size = qaup::support(f).size();
  const std::int64_t band_size = qaup::support(qaup::dft(f)).size();
  ordered_json row;
  row["case"] = "q=" + pad_int(q, 4) + "/" + label;
  row["q"] = q;
  row["trial"] = label;
  row["time_support"] = time_size;
  row["band_support"] = band_size;
  row["product"] = time_size * band_size;
  row["holds"] = qaup::check_up_v1(f);
  return row;
}

std::vector<ordered_json> up1_rows(const VerifyOptions& opt) {
  const std::vector<std::int64_t> qs =
      opt.qs.empty() ? std::vector<std::int64_t>{8, 16, 32} : opt.qs;
  for (std::int64_t q : qs)
    require(q >= 2 && q <= 4096, "up1: q must lie in [2, 4096]");
  std::vector<ordered_json> rows;
  std::mt19937_64 rng(opt.seed);
  for (std::int64_t q : qs) {
    for (std::int64_t d = 1; d <= q; ++d) {
      if (q % d != 0) continue;
      qaup::Signal f = qaup::Signal::zeros(q);
      for (std::int64_t x = 0; x < q; x += d)
        f.values[static_cast<std::size_t>(x)] = 1.0;
      rows.push_back(up1_row(q, "div" + pad_int(d, 4), f));
    }
    for (std::int64_t i = 0; i < opt.trials; ++i)
      rows.push_back(up1_row(q, "rand" + pad_int(i, 4), random_signal(q, rng)));
  }
  return rows;
}

ordered_json up2_row(std::int64_t q, const std::string& label,
                     const qaup::IndexSet& T, const qaup::IndexSet& B) {
  const double sizes = static_cast<double>(T.size()) * static_cast<double>(B.size());
  const double lower = std::sqrt(sizes) / static_cast<double>(q);
  const double upper = std::sqrt(sizes / static_cast<double>(q));
  const double op = qaup::composed_operator_norm(T, B);
  ordered_json row;
  row["case"] = "q=" + pad_int(q, 4) + "/" + label;
  row["q"] = q;
  row["t_size"] = T.size();
  row["b_size"] = B.size();
  row["lower"] = lower;
  row["operator_norm"] = op;
  row["upper"] = upper;
  row["holds"] = lower <= op + 1e-9 && op <= upper + 1e-9;
  return row;
}

std::vector<ordered_json> up2_rows(const VerifyOptions& opt) {
  const std::vector<std::int64_t> qs =
      opt.qs.empty() ? std::vector<std::int64_t>{4, 8} : opt.qs;
  for (std::int64_t q : qs)
    require(q >= 2 && q <= 1024, "up2: q must lie in [2, 1024]");
  std::vector<ordered_json> rows;
  std::mt19937_64 rng(opt.seed);
  for (std::int64_t q : qs) {
    if (q <= 8) {
      // Exhaustive below 2^8 subsets; beyond that the pair count explodes
      // and the suite switches to seeded random sampling.
      const std::uint64_t limit = std::uint64_t{1} << q;
      for (std::uint64_t tm = 1; tm < limit; ++tm)
        for (std::uint64_t bm = 1; bm < limit; ++bm)
          rows.push_back(up2_row(q,
                                 "T=" + pad_int(static_cast<std::int64_t>(tm), 3) +
                                     "/B=" + pad_int(static_cast<std::int64_t>(bm), 3),
                                 mask_subset(q, tm), mask_subset(q, bm)));
    } else {
      for (std::int64_t i = 0; i < opt.trials; ++i)
        rows.push_back(up2_row(q, "trial" + pad_int(i, 4),
                               random_nonempty_subset(q, rng),
                               random_nonempty_subset(q, rng)));
    }
  }
  return rows;
}

std::vector<ordered_json> up3_rows(const VerifyOptions& opt) {
  const std::vector<std::int64_t> qs =
      opt.qs.empty() ? std::vector<std::int64_t>{32} : opt.qs;
  for (std::int64_t q : qs)
    require(q >= 2 && q <= 4096, "up3: q must lie in [2, 4096]");
  std::vector<ordered_json> rows;
  std::mt19937_64 rng(opt.seed);
  for (std::int64_t q : qs) {
    for (std::int64_t i = 0; i < opt.trials; ++i) {
      const qaup::Signal f = random_signal(q, rng);
      const qaup::IndexSet T = random_nonempty_subset(q, rng);
      const qaup::IndexSet B = random_nonempty_subset(q, rng);
      const qaup::UncertaintyReport rep = qaup::check_up_v3(f, T, B);
      ordered_json row;
      row["case"] = "q=" + pad_int(q, 4) + "/trial" + pad_int(i, 4);
      row["q"] = q;
      row["trial"] = i;
      row["epsilon"] = rep.epsilon;
      row["eta"] = rep.eta;
      row["lower"] = rep.lower;
      row["operator_term"] = rep.operator_term_norm;
      row["upper"] = rep.upper;
      row["holds"] = rep.holds;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ordered_json qaup1_row(const std::string& key, const qaup::QaupV1Input& in,
                       qaup::RoundingKind kind) {
  ordered_json row;
  row["case"] = key;
  row["p"] = in.p;
  row["q"] = in.q;
  row["k"] = in.k;
  row["k_prime"] = in.k_prime;
  row["kind"] = kind_name(kind);
  const bool cond = qaup::qaup_v1_condition(in);
  row["condition"] = cond;
  if (cond) {
    const qaup::BoundReport rep = qaup::qaup_v1_bound(in);
    row["lower_bound"] = rep.lower_bound;
    row["exact_probability"] = rep.exact_probability;
    row["margin"] = rep.exact_probability - rep.lower_bound;
    row["holds"] = rep.inequality_holds;
  } else {
    row["lower_bound"] = 0.0;
    row["exact_probability"] = 0.0;
    row["margin"] = 0.0;
    row["holds"] = true;  // nothing is claimed when the condition fails
  }
  return row;
}

std::vector<ordered_json> qaup1_rows(const VerifyOptions& opt) {
  require(opt.p_max >= 1 && opt.p_max <= 10, "qaup1: p-max must lie in [1, 10]");
  require(opt.q_max >= 2 && opt.q_max <= 64, "qaup1: q-max must lie in [2, 64]");
  const std::vector<std::int64_t> rs =
      opt.rs.empty() ? std::vector<std::int64_t>{3, 4, 5, 6} : opt.rs;
  for (std::int64_t r : rs)
    require(r >= 1 && r <= 16, "qaup1: r must lie in [1, 16]");
  const std::vector<qaup::RoundingKind> kinds = {qaup::RoundingKind::floor,
                                                 qaup::RoundingKind::round,
                                                 qaup::RoundingKind::ceil};

  std::vector<ordered_json> rows;
  for (std::int64_t p = 1; p <= opt.p_max; ++p) {
    for (std::int64_t q = p + 1; q <= opt.q_max; ++q) {
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << p); ++mask) {
        const qaup::IndexSet offsets = mask_subset(p, mask);
        const double delta_bar = static_cast<double>(std::accumulate(
            offsets.members.begin(), offsets.members.end(), std::int64_t{0}));
        for (std::int64_t k = 0; k < p; ++k) {
          for (qaup::RoundingKind kind : kinds) {
            const std::int64_t kp = rounded_outcome(kind, k, p, q);
            const qaup::QaupV1Input in =
                qaup::QaupV1Input::of(p, q, k, kp, 0, offsets, delta_bar);
            const std::string key = "tiny/p=" + pad_int(p, 2) + "/q=" +
                                    pad_int(q, 2) + "/B=" +
                                    pad_int(static_cast<std::int64_t>(mask), 4) +
                                    "/k=" + pad_int(k, 2) + "/" + kind_name(kind);
            rows.push_back(qaup1_row(key, in, kind));
          }
        }
      }
    }
  }

  for (std::int64_t r : rs) {
    const qaup::PipelineParams params =
        qaup::choose_parameters(r, 2 * r + 1, factor_slack(opt));
    std::vector<std::int64_t> members;
    for (std::int64_t j = 0; j < params.t; ++j) members.push_back(j * r);
    const qaup::IndexSet offsets = qaup::IndexSet::of(params.p, members);
    const double delta_bar = 0.5 * static_cast<double>(r) *
                             static_cast<double>(params.t) *
                             static_cast<double>(params.t);
    for (std::int64_t j = 0; j < r; ++j) {
      if (std::gcd(j, r) != 1) continue;
      const std::int64_t k = j * params.t;
      const std::int64_t kp = params.q * k / params.p;
      const qaup::QaupV1Input in = qaup::QaupV1Input::of(
          params.p, params.q, k, kp, 0, offsets, delta_bar);
      const std::string key =
          "pipe/r=" + pad_int(r, 3) + "/k=" + pad_int(k, 6);
      rows.push_back(qaup1_row(key, in, qaup::RoundingKind::floor));
    }
  }
  return rows;
}

// Shared by the qaup2 suite, "bound dlog" and "sweep dlog": the good-pair
// cases of one padded discrete-log instance, with the closed-form bound
// recomputed through the general multi-register route.
struct DlogPairCase {
  std::int64_t c = 0;
  std::int64_t d = 0;
  std::int64_t c_prime = 0;
  std::int64_t d_prime = 0;
  bool condition = false;
  double exact = 0;
  bool holds = false;
};

struct DlogPairSweep {
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int64_t m = 0;
  double s = 0;
  double pair_bound = 0;
  double aggregate_bound = 0;
  double total = 0;
  std::vector<DlogPairCase> cases;
  bool aggregate_holds = false;
};

DlogPairSweep dlog_pair_sweep(std::int64_t p, std::int64_t g, std::int64_t x,
                              std::int64_t q, std::int64_t k) {
  DlogPairSweep sweep;
  sweep.p = p;
  sweep.q = q;
  sweep.m = p - 1;
  sweep.s = static_cast<double>(q) / static_cast<double>(sweep.m);
  sweep.pair_bound = qaup::dlog_pair_bound(p, sweep.s);
  sweep.aggregate_bound =
      sweep.pair_bound * static_cast<double>(qaup::euler_phi(sweep.m));

  const std::int64_t m = sweep.m;
  const std::int64_t r = qaup::discrete_log_oracle(p, g, x);
  const auto tuples = qaup::dlog_preimage_tuples(p, g, x, k);
  const std::vector<qaup::RegisterDim> dims{{m, q}, {m, q}};
  const qaup::MultiDimInstance inst = qaup::MultiDimInstance::of(dims, tuples);
  const double delta = 1.5 * static_cast<double>(m) * static_cast<double>(m) /
                       static_cast<double>(q);

  for (std::int64_t c = 0; c < m; ++c) {
    if (std::gcd(c, m) != 1) continue;
    DlogPairCase pc;
    pc.c = c;
    pc.d = ((m - r * c % m) % m + m) % m;
    pc.c_prime = q * c / m;
    pc.d_prime = q * pc.d / m;
    pc.exact = qaup::prob_point_multi(inst, {pc.c_prime, pc.d_prime});
    sweep.total += pc.exact;

    const qaup::QaupV2Input in = qaup::QaupV2Input::of(
        dims, {c, pc.d}, {pc.c_prime, pc.d_prime}, tuples, delta);
    pc.condition = qaup::qaup_v2_condition(in);
    bool route_ok = false;
    if (pc.condition) {
      const qaup::BoundReport rep = qaup::qaup_v2_bound(in);
      route_ok = rep.inequality_holds &&
                 std::abs(rep.lower_bound - sweep.pair_bound) <=
                     1e-12 * std::max(1.0, sweep.pair_bound);
    }
    pc.holds = pc.condition && route_ok && pc.exact >= sweep.pair_bound - 1e-12;
    sweep.cases.push_back(pc);
  }
  sweep.aggregate_holds = sweep.total >= sweep.aggregate_bound - 1e-12;
  return sweep;
}

std::vector<ordered_json> qaup2_rows(const VerifyOptions& opt) {
  const std::vector<std::int64_t> small =
      opt.ps.empty() ? std::vector<std::int64_t>{2, 3} : opt.ps;
  const std::vector<std::int64_t> padded =
      opt.qs.empty() ? std::vector<std::int64_t>{8, 16} : opt.qs;
  require(small.size() == 2 && padded.size() == 2,
          "qaup2: --p and --q each take exactly two register sizes");
  const std::int64_t p1 = small[0], p2 = small[1];
  const std::int64_t q1 = padded[0], q2 = padded[1];
  require(p1 >= 2 && p2 >= 2 && p1 * p2 <= 12,
          "qaup2: small sides must be >= 2 with product <= 12");
  require(q1 > p1 && q2 > p2, "qaup2: padded sides must exceed the small sides");
  require(q1 * q2 <= (std::int64_t{1} << 24), "qaup2: padded product too large");

  const std::vector<qaup::RegisterDim> dims{{p1, q1}, {p2, q2}};
  const std::string registers = std::to_string(p1) + "->" + std::to_string(q1) +
                                "|" + std::to_string(p2) + "->" +
                                std::to_string(q2);
  std::vector<ordered_json> rows;

  const std::int64_t cells = p1 * p2;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << cells); ++mask) {
    std::vector<std::vector<std::int64_t>> tuples;
    for (std::int64_t a = 0; a < p1; ++a)
      for (std::int64_t b = 0; b < p2; ++b)
        if (mask >> (a * p2 + b) & 1) tuples.push_back({a, b});
    for (std::int64_t k1 = 0; k1 < p1; ++k1) {
      for (std::int64_t k2 = 0; k2 < p2; ++k2) {
        const std::vector<std::int64_t> kp{q1 * k1 / p1, q2 * k2 / p2};
        // Two passes: the first input only measures the exact phase
        // deviation, the second uses it as the tightest admissible delta.
        const qaup::QaupV2Input probe = qaup::QaupV2Input::of(
            dims, {k1, k2}, kp, tuples,
            2.0 * static_cast<double>(tuples.size()));
        const qaup::QaupV2Input in = qaup::QaupV2Input::of(
            dims, {k1, k2}, kp, tuples, probe.phase_deviation_sum());
        ordered_json row;
        row["case"] = "tiny/B=" + pad_int(static_cast<std::int64_t>(mask), 5) +
                      "/k=" + pad_int(k1 * p2 + k2, 3);
        row["registers"] = registers;
        row["k"] = k1 * p2 + k2;
        row["k_prime"] = kp[0] * q2 + kp[1];
        const bool cond = qaup::qaup_v2_condition(in);
        row["condition"] = cond;
        if (cond) {
          const qaup::BoundReport rep = qaup::qaup_v2_bound(in);
          row["lower_bound"] = rep.lower_bound;
          row["exact_probability"] = rep.exact_probability;
          row["margin"] = rep.exact_probability - rep.lower_bound;
          row["holds"] = rep.inequality_holds;
        } else {
          row["lower_bound"] = 0.0;
          row["exact_probability"] = 0.0;
          row["margin"] = 0.0;
          row["holds"] = true;
        }
        rows.push_back(std::move(row));
      }
    }
  }

  const std::vector<std::int64_t> dlog_ps =
      opt.dlog_ps.empty() ? std::vector<std::int64_t>{11} : opt.dlog_ps;
  for (std::int64_t p : dlog_ps) {
    require(p >= 3 && p <= 64 && p % 2 == 1 && qaup::is_prime(p),
            "qaup2: dlog primes must be odd primes <= 64");
    const std::int64_t g = smallest_generator(p);
    const std::int64_t q = dlog_padded_size(p, dlog_slack(opt));
    const DlogPairSweep sweep = dlog_pair_sweep(p, g, g, q, 0);
    const std::string regs = std::to_string(sweep.m) + "->" + std::to_string(q) +
                             "|" + std::to_string(sweep.m) + "->" +
                             std::to_string(q);
    for (const DlogPairCase& pc : sweep.cases) {
      ordered_json row;
      row["case"] = "dlog/p=" + pad_int(p, 3) + "/c=" + pad_int(pc.c, 3);
      row["registers"] = regs;
      row["k"] = pc.c * sweep.m + pc.d;
      row["k_prime"] = pc.c_prime * q + pc.d_prime;
      row["condition"] = pc.condition;
      row["lower_bound"] = sweep.pair_bound;
      row["exact_probability"] = pc.exact;
      row["margin"] = pc.exact - sweep.pair_bound;
      row["holds"] = pc.holds;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ordered_json factor_row(const std::string& key, const std::string& kind,
                        std::int64_t r, std::int64_t t, std::int64_t q, double s,
                        bool condition, double lower, double exact, bool holds) {
  ordered_json row;
  row["case"] = key;
  row["kind"] = kind;
  row["r"] = r;
  row["t"] = t;
  row["q"] = q;
  row["s"] = s;
  row["condition"] = condition;
  row["lower_bound"] = lower;
  row["exact_probability"] = exact;
  row["margin"] = exact - lower;
  row["holds"] = holds;
  return row;
}

std::vector<ordered_json> certificate_rows(std::int64_t r, bool extended,
                                           std::int64_t shift, double s_min,
                                           const std::string& prefix) {
  const qaup::TargetCertificate cert =
      qaup::certify_targets(r, 2 * r + 1, shift, extended, s_min);
  std::vector<ordered_json> rows;
  const std::string base = prefix + "/r=" + pad_int(r, 3) + "/ext=" +
                           (extended ? "1" : "0");
  rows.push_back(factor_row(base + "/per_point", "per_point", r, cert.t, cert.q,
                            cert.s, cert.amplitude_chain_holds,
                            cert.per_point_bound, cert.min_point_probability,
                            cert.per_point_holds && cert.amplitude_chain_holds));
  rows.push_back(factor_row(base + "/aggregate", "aggregate", r, cert.t, cert.q,
                            cert.s, cert.amplitude_chain_holds,
                            cert.aggregate_bound, cert.target_probability,
                            cert.aggregate_holds));
  return rows;
}

std::vector<ordered_json> factor_verify_rows(const VerifyOptions& opt) {
  require(opt.r_easy_max >= 1 && opt.r_easy_max <= 32,
          "factor: r-max must lie in [1, 32]");
  require(opt.t_easy_max >= 1 && opt.t_easy_max <= 32,
          "factor: t-max must lie in [1, 32]");
  const std::vector<std::int64_t> rs =
      opt.rs.empty() ? std::vector<std::int64_t>{3, 4, 5, 6} : opt.rs;
  for (std::int64_t r : rs)
    require(r >= 1 && r <= 16, "factor: r must lie in [1, 16]");

  std::vector<ordered_json> rows;
  for (std::int64_t r = 1; r <= opt.r_easy_max; ++r) {
    for (std::int64_t t = 1; t <= opt.t_easy_max; ++t) {
      const qaup::EasyCaseReport rep = qaup::easy_case_check(r, t);
      rows.push_back(factor_row(
          "easy/r=" + pad_int(r, 3) + "/t=" + pad_int(t, 3), "easy", r, t,
          r * t, 1.0, true, rep.phi_over_r, rep.target_probability, rep.holds));
    }
  }
  for (std::int64_t r : rs) {
    const qaup::PipelineParams params =
        qaup::choose_parameters(r, 2 * r + 1, factor_slack(opt));
    for (bool extended : {false, true}) {
      // A t+1-point progression exists only when r t < p_prime; when r
      // divides the power of two exactly there is nothing to certify.
      if (extended && r * params.t == params.p_prime) continue;
      auto cert_rows =
          certificate_rows(r, extended, 0, factor_slack(opt), "padded");
      rows.insert(rows.end(), cert_rows.begin(), cert_rows.end());
    }
  }
  return rows;
}

ordered_json dlog_row(const std::string& key, const std::string& kind,
                      std::int64_t p, std::int64_t q, double s, bool condition,
                      double lower, double exact, bool holds) {
  ordered_json row;
  row["case"] = key;
  row["kind"] = kind;
  row["p"] = p;
  row["q"] = q;
  row["s"] = s;
  row["condition"] = condition;
  row["lower_bound"] = lower;
  row["exact_probability"] = exact;
  row["margin"] = exact - lower;
  row["holds"] = holds;
  return row;
}

std::vector<ordered_json> dlog_verify_rows(const VerifyOptions& opt) {
  const std::vector<std::int64_t> ps =
      opt.ps.empty() ? std::vector<std::int64_t>{11, 13, 17, 23} : opt.ps;
  std::vector<ordered_json> rows;
  for (std::int64_t p : ps) {
    require(p >= 3 && p <= 64 && p % 2 == 1 && qaup::is_prime(p),
            "dlog: p must be an odd prime <= 64");
    const std::int64_t g = smallest_generator(p);
    const qaup::DlogEasyReport easy = qaup::easy_case_dlog_check(p, g, g);
    rows.push_back(dlog_row("easy/p=" + pad_int(p, 3), "easy", p, p - 1, 1.0,
                            true, easy.phi_ratio, easy.target_probability,
                            easy.holds));

    const std::int64_t q = dlog_padded_size(p, dlog_slack(opt));
    const qaup::DlogCertificate cert = qaup::certify_dlog_targets(p, g, g, q, 0);
    const std::string base = "padded/p=" + pad_int(p, 3);
    rows.push_back(dlog_row(base + "/per_pair", "per_pair", p, q, cert.s,
                            cert.v2_route_agrees, cert.per_pair_bound,
                            cert.min_pair_probability,
                            cert.per_pair_holds && cert.v2_route_agrees));
    rows.push_back(dlog_row(base + "/aggregate", "aggregate", p, q, cert.s,
                            cert.v2_route_agrees, cert.aggregate_bound,
                            cert.target_probability, cert.aggregate_holds));
  }
  return rows;
}

int run_verify(const VerifyOptions& opt) {
  std::vector<ordered_json> rows;
  if (opt.mode == "up1") rows = up1_rows(opt);
  else if (opt.mode == "up2") rows = up2_rows(opt);
  else if (opt.mode == "up3") rows = up3_rows(opt);
  else if (opt.mode == "qaup1") rows = qaup1_rows(opt);
  else if (opt.mode == "qaup2") rows = qaup2_rows(opt);
  else if (opt.mode == "factor") rows = factor_verify_rows(opt);
  else if (opt.mode == "dlog") rows = dlog_verify_rows(opt);
  else throw std::invalid_argument("unknown verify mode: " + opt.mode);
  const bool ok = all_hold(rows);
  emit_report(std::move(rows), opt.format, opt.out);
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// bound tables.

struct BoundOptions {
  std::string kind;
  std::int64_t r = 0;
  std::int64_t t = 0;
  double s = 0;
  bool extended = false;
  std::int64_t shift = 0;
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int64_t g = 0;  // 0 picks the smallest generator
  std::int64_t x = 0;  // 0 picks g itself
  std::int64_t k = 0;
  std::string format = "json";
  std::string out;
};

std::vector<ordered_json> factor_bound_rows(const BoundOptions& opt) {
  const std::int64_t r = opt.r, t = opt.t;
  const double s = opt.s;
  require(r >= 1 && r <= 64, "bound factor: --r must lie in [1, 64]");
  require(t >= 1 && t <= 4096, "bound factor: --t must lie in [1, 4096]");
  require(s > kPi, "bound factor: --s must exceed pi");

  // The padded size is s * r * t and must come out integral.
  const double q_real = s * static_cast<double>(r) * static_cast<double>(t);
  const std::int64_t q = std::llround(q_real);
  require(std::abs(q_real - static_cast<double>(q)) <= 1e-6 &&
              q <= (std::int64_t{1} << 24),
          "bound factor: s*r*t must be an integral padded size <= 2^24");

  const qaup::GeneralBound gb = qaup::general_case_bound(r, t, s, opt.extended);
  const std::int64_t count = opt.extended ? t + 1 : t;
  require(opt.shift >= 0 && opt.shift + (count - 1) * r < q,
          "bound factor: shifted preimages must fit below the padded size");
  std::vector<std::int64_t> members, head;
  for (std::int64_t j = 0; j < count; ++j) {
    members.push_back(opt.shift + j * r);
    if (j < t) head.push_back(j * r);
  }
  const std::int64_t p_small = r * t;
  const qaup::SamplingInstance inst = qaup::SamplingInstance::of(
      opt.shift + (count - 1) * r + 1, q, qaup::IndexSet::of(q, members));
  const double delta = 0.5 * static_cast<double>(r) * static_cast<double>(t) *
                       static_cast<double>(t);
  const double corr =
      1.0 - s / (2.0 * static_cast<double>(t) * (s - kPi));

  std::vector<ordered_json> rows;
  double total = 0;
  const std::string base =
      "bound/r=" + pad_int(r, 3) + "/ext=" + (opt.extended ? "1" : "0");
  for (std::int64_t j = 0; j < r; ++j) {
    if (std::gcd(j, r) != 1) continue;
    const std::int64_t k = j * t;
    const std::int64_t kp = q * k / p_small;
    const double exact = qaup::prob_point(inst, kp);
    total += exact;
    bool condition =
        2.0 * kPi * delta / static_cast<double>(q) <=
        std::abs(qaup::detail::phase_sum(head, k, p_small));
    if (opt.extended) {
      const double amp_full =
          std::abs(qaup::detail::phase_sum(members, kp, q));
      const double amp_head = std::abs(qaup::detail::phase_sum(
          std::vector<std::int64_t>(members.begin(), members.end() - 1), kp, q));
      condition = condition && amp_full + 1e-12 >= amp_head * corr;
    }
    rows.push_back(factor_row(base + "/k=" + pad_int(kp, 6), "per_point", r, t,
                              q, s, condition, gb.per_point, exact,
                              condition && exact >= gb.per_point - 1e-12));
  }
  rows.push_back(factor_row(base + "/total", "aggregate", r, t, q, s, true,
                            gb.aggregate, total,
                            total >= gb.aggregate - 1e-12));
  return rows;
}

std::vector<ordered_json> dlog_bound_rows(std::int64_t p, std::int64_t g_in,
                                          std::int64_t x_in, std::int64_t q,
                                          std::int64_t k,
                                          const std::string& prefix) {
  require(p >= 3 && p <= 64 && p % 2 == 1 && qaup::is_prime(p),
          "bound dlog: --p must be an odd prime <= 64");
  const std::int64_t g = g_in == 0 ? smallest_generator(p) : g_in;
  const std::int64_t x = x_in == 0 ? g : x_in;
  const DlogPairSweep sweep = dlog_pair_sweep(p, g, x, q, k);
  std::vector<ordered_json> rows;
  for (const DlogPairCase& pc : sweep.cases)
    rows.push_back(dlog_row(prefix + "/c=" + pad_int(pc.c, 3), "per_pair", p, q,
                            sweep.s, pc.condition, sweep.pair_bound, pc.exact,
                            pc.holds));
  rows.push_back(dlog_row(prefix + "/total", "aggregate", p, q, sweep.s, true,
                          sweep.aggregate_bound, sweep.total,
                          sweep.aggregate_holds));
  return rows;
}

int run_bound(const BoundOptions& opt) {
  std::vector<ordered_json> rows;
  if (opt.kind == "factor") {
    require(opt.r > 0 && opt.t > 0 && opt.s > 0,
            "bound factor requires --r, --t and --s");
    rows = factor_bound_rows(opt);
  } else {
    require(opt.p > 0 && opt.q > 0, "bound dlog requires --p and --q");
    rows = dlog_bound_rows(opt.p, opt.g, opt.x, opt.q, opt.k,
                           "bound/p=" + pad_int(opt.p, 3));
  }
  const bool ok = all_hold(rows);
  emit_report(std::move(rows), opt.format, opt.out);
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sweep: certificate tables across parameter ranges.

struct SweepOptions {
  std::string kind;
  std::vector<std::int64_t> rs;
  std::vector<std::int64_t> ps;
  double s_min = 0.0;
  std::int64_t shift = 0;
  std::int64_t k = 0;
  std::string format = "json";
  std::string out;
};

int run_sweep(const SweepOptions& opt) {
  std::vector<ordered_json> rows;
  if (opt.kind == "factor") {
    const std::vector<std::int64_t> rs =
        opt.rs.empty() ? std::vector<std::int64_t>{3, 4, 5, 6} : opt.rs;
    const double s_min = opt.s_min > 0.0 ? opt.s_min : 6.5;
    for (std::int64_t r : rs) {
      require(r >= 1 && r <= 16, "sweep factor: r must lie in [1, 16]");
      const qaup::PipelineParams params =
          qaup::choose_parameters(r, 2 * r + 1, s_min);
      for (bool extended : {false, true}) {
        // Skip the t+1 shape when no progression of that length fits.
        if (extended && r * params.t + opt.shift >= params.p_prime) continue;
        auto cert_rows = certificate_rows(r, extended, opt.shift, s_min, "sweep");
        rows.insert(rows.end(), cert_rows.begin(), cert_rows.end());
      }
    }
  } else {
    const std::vector<std::int64_t> ps =
        opt.ps.empty() ? std::vector<std::int64_t>{11, 13, 17, 23} : opt.ps;
    const double s_min = opt.s_min > 0.0 ? opt.s_min : 10.0;
    for (std::int64_t p : ps) {
      const std::int64_t q = dlog_padded_size(p, s_min);
      auto p_rows =
          dlog_bound_rows(p, 0, 0, q, opt.k, "sweep/p=" + pad_int(p, 3));
      rows.insert(rows.end(), p_rows.begin(), p_rows.end());
    }
  }
  const bool ok = all_hold(rows);
  emit_report(std::move(rows), opt.format, opt.out);
  return ok ? 0 : 1;
}

void add_report_flags(CLI::App* cmd, std::string& format, std::string& out) {
  cmd->add_option("--format", format, "Report format: json or csv")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", out,
                  "Write the report to this file instead of standard output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact two-register sampling pipelines with certified probability "
      "lower bounds"};
  app.require_subcommand(1);

  VerifyOptions vopt;
  CLI::App* verify = app.add_subcommand(
      "verify", "Run an inequality suite; exit 0 only if every case holds");
  verify->add_option("--mode", vopt.mode,
                     "Suite: up1, up2, up3, qaup1, qaup2, factor, dlog")
      ->required()
      ->check(CLI::IsMember({"up1", "up2", "up3", "qaup1", "qaup2", "factor",
                             "dlog"}));
  verify->add_option("--q", vopt.qs,
                     "Transform sizes (up1 default 8 16 32, up2 default 4 8, "
                     "up3 default 32) or the two padded sides (qaup2 default "
                     "8 16)");
  verify->add_option("--r", vopt.rs,
                     "Pipeline orders for qaup1/factor (default 3 4 5 6)");
  verify->add_option("--p", vopt.ps,
                     "Two small sides (qaup2 default 2 3) or dlog primes "
                     "(dlog default 11 13 17 23)");
  verify->add_option("--dlog-p", vopt.dlog_ps,
                     "Primes for the qaup2 cross-route cases (default 11)");
  verify->add_option("--trials", vopt.trials,
                     "Random cases per size where enumeration is infeasible")
      ->capture_default_str();
  verify->add_option("--seed", vopt.seed, "Seed for the randomized cases")
      ->capture_default_str();
  verify->add_option("--s-min", vopt.s_min,
                     "Padding slack floor; 0 picks the mode default (6.5 on "
                     "the factoring side, 10 on the dlog side)")
      ->capture_default_str();
  verify->add_option("--p-max", vopt.p_max, "qaup1 small-side ceiling")
      ->capture_default_str();
  verify->add_option("--q-max", vopt.q_max, "qaup1 padded-side ceiling")
      ->capture_default_str();
  verify->add_option("--r-max", vopt.r_easy_max, "factor easy-grid r ceiling")
      ->capture_default_str();
  verify->add_option("--t-max", vopt.t_easy_max, "factor easy-grid t ceiling")
      ->capture_default_str();
  add_report_flags(verify, vopt.format, vopt.out);

  qaup::FactoringConfig fcfg;
  std::string factor_out;
  CLI::App* factor = app.add_subcommand(
      "factor", "Factor an odd composite; prints the run transcript as JSON");
  factor->add_option("n", fcfg.n, "Odd composite to factor")->required();
  factor->add_option("--seed", fcfg.seed, "Sampling seed")->capture_default_str();
  factor->add_option("--max-reps", fcfg.max_repetitions, "Measurement budget")
      ->capture_default_str();
  factor->add_option("--s-min", fcfg.s_min, "Padding slack floor (above 2 pi)")
      ->capture_default_str();
  factor->add_option("--out", factor_out,
                     "Write the transcript to this file instead of stdout");

  qaup::DlogConfig dcfg;
  std::string dlog_out;
  CLI::App* dlog = app.add_subcommand(
      "dlog", "Recover a discrete log; prints the run transcript as JSON");
  dlog->add_option("p", dcfg.p, "Odd prime modulus")->required();
  dlog->add_option("g", dcfg.g, "Generator mod p")->required();
  dlog->add_option("x", dcfg.x, "Target value in [1, p)")->required();
  dlog->add_option("--seed", dcfg.seed, "Sampling seed")->capture_default_str();
  dlog->add_option("--max-reps", dcfg.max_repetitions, "Measurement budget")
      ->capture_default_str();
  dlog->add_option("--s-min", dcfg.s_min, "Padding slack floor (above 3 pi)")
      ->capture_default_str();
  dlog->add_option("--out", dlog_out,
                   "Write the transcript to this file instead of stdout");

  BoundOptions bopt;
  CLI::App* bound = app.add_subcommand(
      "bound", "Tabulate one certified bound against the exact probabilities");
  bound->add_option("kind", bopt.kind, "factor or dlog")
      ->required()
      ->check(CLI::IsMember({"factor", "dlog"}));
  bound->add_option("--r", bopt.r, "Order (factor kind)");
  bound->add_option("--t", bopt.t, "Preimage count before extension (factor kind)");
  bound->add_option("--s", bopt.s, "Padding ratio q/(r t) (factor kind)");
  bound->add_flag("--extended", bopt.extended,
                  "Use the t+1-point shape (factor kind)");
  bound->add_option("--shift", bopt.shift, "Preimage shift (factor kind)")
      ->capture_default_str();
  bound->add_option("--p", bopt.p, "Odd prime modulus (dlog kind)");
  bound->add_option("--q", bopt.q, "Padded size, a power of two (dlog kind)");
  bound->add_option("--g", bopt.g, "Generator; 0 picks the smallest (dlog kind)")
      ->capture_default_str();
  bound->add_option("--x", bopt.x, "Target value; 0 picks g itself (dlog kind)")
      ->capture_default_str();
  bound->add_option("--k", bopt.k, "Observed-value exponent (dlog kind)")
      ->capture_default_str();
  add_report_flags(bound, bopt.format, bopt.out);

  SweepOptions sopt;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Tabulate certificates across parameter ranges");
  sweep->add_option("kind", sopt.kind, "factor or dlog")
      ->required()
      ->check(CLI::IsMember({"factor", "dlog"}));
  sweep->add_option("--r", sopt.rs, "Orders (factor kind, default 3 4 5 6)");
  sweep->add_option("--p", sopt.ps,
                    "Odd prime moduli (dlog kind, default 11 13 17 23)");
  sweep->add_option("--s-min", sopt.s_min,
                    "Padding slack floor; 0 picks the kind default (6.5 "
                    "factor, 10 dlog)")
      ->capture_default_str();
  sweep->add_option("--shift", sopt.shift, "Preimage shift (factor kind)")
      ->capture_default_str();
  sweep->add_option("--k", sopt.k, "Observed-value exponent (dlog kind)")
      ->capture_default_str();
  add_report_flags(sweep, sopt.format, sopt.out);

  try {
    app.parse(argc, argv);
    if (*verify) return run_verify(vopt);
    if (*factor) {
      const qaup::Transcript tr = qaup::run_factoring(fcfg);
      write_output(tr.to_json() + "\n", factor_out);
      return tr.success ? 0 : 1;
    }
    if (*dlog) {
      const qaup::DlogTranscript tr = qaup::run_dlog(dcfg);
      write_output(tr.to_json() + "\n", dlog_out);
      return tr.success ? 0 : 1;
    }
    if (*bound) return run_bound(bopt);
    if (*sweep) return run_sweep(sopt);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
