#include "tnlab/constructor.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "tnlab/errors.hpp"
#include "tnlab/tn_engine.hpp"

namespace tnlab {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

using Words = std::vector<std::uint64_t>;

std::vector<Words> to_bitsets(const std::vector<TagSet>& subsets) {
  std::vector<Tag> universe;
  for (const auto& s : subsets) universe.insert(universe.end(), s.begin(), s.end());
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  const std::size_t words = std::max<std::size_t>(1, (universe.size() + 63) / 64);
  std::vector<Words> out(subsets.size(), Words(words, 0));
  for (std::size_t i = 0; i < subsets.size(); ++i)
    for (const auto tag : subsets[i]) {
      const auto k = static_cast<std::size_t>(
          std::lower_bound(universe.begin(), universe.end(), tag) - universe.begin());
      out[i][k / 64] |= std::uint64_t{1} << (k % 64);
    }
  return out;
}

std::size_t xor_weight(const Words& a, const Words& b) {
  std::size_t w = 0;
  for (std::size_t k = 0; k < a.size(); ++k) w += static_cast<std::size_t>(std::popcount(a[k] ^ b[k]));
  return w;
}

PipelineParameters clamp_parameters(std::uint64_t x, long double y, long double L_formula) {
  PipelineParameters p;
  p.y = y;
  p.L_formula = L_formula;
  const long double clamp = static_cast<long double>(isqrt(x));
  p.L = static_cast<std::uint64_t>(std::floor(std::min(L_formula, clamp)));
  return p;
}

// sqrt(ln x * ln ln x); PipelineFailed when ln ln x <= 0.
long double scale(std::uint64_t x) {
  if (x < 3) throw PipelineFailed("parameters", "x must be at least 3");
  const long double lx = std::log(static_cast<long double>(x));
  return std::sqrt(lx * std::log(lx));
}

void check_parameters(const PipelineParameters& p) {
  if (p.y < 2 || p.L < 4 || !(p.y < static_cast<long double>(p.L))) {
    throw PipelineFailed("parameters", "degenerate parameters: y=" + std::to_string(static_cast<double>(p.y)) +
                                           " L=" + std::to_string(p.L));
  }
}

PipelineParameters resolve(PipelineParameters p, const PipelineOptions& opts) {
  if (opts.y) p.y = *opts.y;
  if (opts.L) p.L = *opts.L;
  return p;
}

std::uint64_t pi_of(long double y) { return prime_pi(static_cast<std::uint64_t>(std::floor(y))); }

}  // namespace

PipelineFailed::PipelineFailed(std::string stage, const std::string& detail)
    : std::runtime_error("pipeline failed at " + stage + ": " + detail), stage_(std::move(stage)) {}

std::vector<SmoothInterval> find_smooth_rich_intervals(std::uint64_t x, long double y,
                                                       std::uint64_t L, long double delta) {
  if (L == 0 || L > x) return {};
  if (!(y < static_cast<long double>(L))) throw DomainError("need y < L");
  if (!(delta >= 0 && delta < 1)) throw DomainError("need 0 <= delta < 1");
  if (x < 3) return {};
  const auto ys = static_cast<std::uint64_t>(std::floor(y));
  const long double start = static_cast<long double>(x) / std::log(static_cast<long double>(x));
  const auto k_min = static_cast<std::uint64_t>(std::ceil(start / static_cast<long double>(L)));
  const std::uint64_t k_max = x / L - 1;
  if (k_min > k_max) return {};

  const long double threshold = delta * static_cast<long double>(L) *
                                static_cast<long double>(psi_count_segmented(x, ys)) /
                                static_cast<long double>(x);
  const auto smooth = smooth_in_interval_segmented(k_min * L, (k_max + 1) * L, ys);
  std::vector<std::uint64_t> counts(k_max - k_min + 1, 0);
  for (const auto m : smooth) ++counts[(m - 1) / L - k_min];

  std::vector<SmoothInterval> out;
  for (std::uint64_t k = k_min; k <= k_max; ++k) {
    const auto c = counts[k - k_min];
    if (static_cast<long double>(c) > threshold) out.push_back({k * L, (k + 1) * L, c});
  }
  return out;
}

std::optional<SmallTnCertificate> build_small_tn(std::uint64_t lo, std::uint64_t hi,
                                                 long double y, const SpfTable& table) {
  if (lo >= hi) throw RangeError("interval (lo, hi] must be nonempty");
  const auto ys = static_cast<std::uint64_t>(std::floor(y));
  const auto smooth = smooth_in_interval_segmented(lo, hi, ys);
  if (smooth.size() <= pi_of(y)) return std::nullopt;

  const auto supports = odd_prime_supports(lo + 1, hi - lo, table);
  std::vector<TaggedVector> family;
  for (const auto m : smooth) family.push_back({m, ParityVector::from_primes(supports[m - lo - 1])});
  const auto kernel = nullspace_subsets(family);

  // Echelon form keyed by least element: the smallest key is the least
  // element of any nonzero kernel vector.
  std::map<Tag, TagSet> by_least;
  for (auto v : kernel) {
    while (!v.empty()) {
      const auto it = by_least.find(v.front());
      if (it == by_least.end()) {
        by_least.emplace(v.front(), v);
        break;
      }
      v = symmetric_difference(v, it->second);
    }
  }
  const auto& [n, members] = *by_least.begin();
  SmallTnCertificate cert{n, {}};
  for (const auto m : members)
    if (m != n) cert.offsets.push_back(m - n);
  return cert;
}

SymdiffPair max_symdiff_pair(const std::vector<TagSet>& subsets) {
  if (subsets.size() < 2) throw UsageError("max_symdiff_pair needs at least two subsets");
  {
    std::set<TagSet> seen;
    for (const auto& s : subsets)
      if (!seen.insert(s).second) throw UsageError("max_symdiff_pair needs distinct subsets");
  }
  const auto bits = to_bitsets(subsets);
  SymdiffPair best{0, 1, xor_weight(bits[0], bits[1])};

  if (subsets.size() <= kExhaustivePairLimit) {
    for (std::size_t i = 0; i < bits.size(); ++i)
      for (std::size_t j = i + 1; j < bits.size(); ++j) {
        const auto w = xor_weight(bits[i], bits[j]);
        if (w > best.size) best = {i, j, w};
      }
    return best;
  }

  std::size_t anchor = 0;
  std::set<std::size_t> visited{anchor};
  for (int round = 0; round < 8; ++round) {
    std::size_t far = anchor == 0 ? 1 : 0;
    std::size_t far_w = xor_weight(bits[anchor], bits[far]);
    for (std::size_t k = 0; k < bits.size(); ++k) {
      if (k == anchor) continue;
      const auto w = xor_weight(bits[anchor], bits[k]);
      if (w > far_w) {
        far = k;
        far_w = w;
      }
    }
    const SymdiffPair candidate{std::min(anchor, far), std::max(anchor, far), far_w};
    if (candidate.size > best.size ||
        (candidate.size == best.size && std::pair(candidate.i, candidate.j) < std::pair(best.i, best.j))) {
      best = candidate;
    }
    if (!visited.insert(far).second) break;
    anchor = far;
  }
  return best;
}

PipelineParameters small_tn_parameters(std::uint64_t x) {
  const long double s = scale(x);
  const long double lx = std::log(static_cast<long double>(x));
  const long double y = std::exp(std::numbers::sqrt2_v<long double> / 2 * s);
  const long double L = std::exp((std::numbers::sqrt2_v<long double> + 1 / std::sqrt(std::log(lx))) * s);
  return clamp_parameters(x, y, L);
}

PipelineParameters curve_point_parameters(std::uint64_t x, long double c) {
  if (!(c > 0 && c < 1)) throw DomainError("c must lie in (0, 1)");
  const long double s = scale(x);
  const long double y = std::exp(std::numbers::sqrt2_v<long double> / 2 * s);
  const long double L = std::exp(std::numbers::sqrt2_v<long double> / c * s);
  return clamp_parameters(x, y, L);
}

CurvePointCertificate construct_curve_point(std::uint64_t x, long double c, const SpfTable& table,
                                            const PipelineOptions& opts) {
  CurvePointCertificate cert;
  cert.c = c;
  auto t0 = Clock::now();
  cert.parameters = resolve(curve_point_parameters(x, c), opts);
  check_parameters(cert.parameters);
  const auto& params = cert.parameters;
  cert.pi_y = pi_of(params.y);
  cert.timings.parameters_ms = elapsed_ms(t0);

  t0 = Clock::now();
  const auto intervals = find_smooth_rich_intervals(x, params.y, params.L, opts.delta);
  cert.intervals_found = intervals.size();
  const auto chosen = std::find_if(intervals.begin(), intervals.end(), [&](const SmoothInterval& iv) {
    return iv.smooth_count > cert.pi_y;
  });
  if (chosen == intervals.end()) {
    throw PipelineFailed("interval", std::to_string(intervals.size()) +
                                         " smooth-rich intervals, none with more than pi(y)=" +
                                         std::to_string(cert.pi_y) + " smooth members");
  }
  cert.interval = *chosen;
  if (!table.can_factor(cert.interval.hi)) throw RangeError("sieve limit too small for x");
  cert.timings.intervals_ms = elapsed_ms(t0);

  t0 = Clock::now();
  const auto ys = static_cast<std::uint64_t>(std::floor(params.y));
  const auto smooth = smooth_in_interval_segmented(cert.interval.lo, cert.interval.hi, ys);
  const auto supports = odd_prime_supports(cert.interval.lo + 1, cert.interval.hi - cert.interval.lo, table);
  std::vector<ParityVector> theta;
  std::vector<TaggedVector> family;
  for (std::size_t i = 0; i < smooth.size(); ++i) {
    theta.push_back(ParityVector::from_primes(supports[smooth[i] - cert.interval.lo - 1]));
    family.push_back({i, theta.back()});
  }
  const auto kernel = nullspace_subsets(family);
  cert.kernel_dim = kernel.size();
  cert.timings.kernel_ms = elapsed_ms(t0);

  // Candidate subsets (indices into `smooth`): base XOR random kernel
  // combination, so each base spans one theta-coset.
  t0 = Clock::now();
  std::mt19937_64 rng(opts.seed);
  const std::size_t n_bases = std::max<std::size_t>(1, opts.family_size / 1024);
  std::vector<TagSet> bases(n_bases);
  for (auto& b : bases)
    for (std::size_t i = 0; i < smooth.size(); ++i)
      if (rng() & 1) b.push_back(i);

  std::map<std::vector<std::uint64_t>, std::size_t> bucket_of;
  std::vector<std::vector<TagSet>> buckets;
  std::vector<std::set<TagSet>> bucket_seen;
  for (std::size_t k = 0; k < opts.family_size; ++k) {
    TagSet s = bases[k % n_bases];
    for (const auto& w : kernel)
      if (rng() & 1) s = symmetric_difference(s, w);
    ParityVector v;
    for (const auto i : s) v ^= theta[i];
    const auto [it, inserted] = bucket_of.emplace(v.support(), buckets.size());
    if (inserted) {
      buckets.emplace_back();
      bucket_seen.emplace_back();
    }
    if (bucket_seen[it->second].insert(s).second) buckets[it->second].push_back(std::move(s));
  }
  std::size_t largest = 0;
  for (std::size_t b = 1; b < buckets.size(); ++b)
    if (buckets[b].size() > buckets[largest].size()) largest = b;
  const auto& bucket = buckets[largest];
  cert.bucket_size = bucket.size();
  if (bucket.size() < 2) throw PipelineFailed("family", "no two distinct subsets share a theta value");
  cert.timings.family_ms = elapsed_ms(t0);

  t0 = Clock::now();
  const auto pair = max_symdiff_pair(bucket);
  const auto diff = symmetric_difference(bucket[pair.i], bucket[pair.j]);
  if (diff.size() < 2) throw PipelineFailed("symdiff", "symmetric difference has fewer than two members");
  cert.timings.symdiff_ms = elapsed_ms(t0);

  t0 = Clock::now();
  ParityVector acc;
  for (const auto i : diff) acc ^= theta[i];
  if (!acc.empty()) throw std::logic_error("curve point product is not a square");
  cert.n = smooth[diff.front()];
  cert.J = smooth[diff.back()] - cert.n;
  for (std::size_t k = 1; k + 1 < diff.size(); ++k) cert.offsets.push_back(smooth[diff[k]] - cert.n);
  cert.N = cert.offsets.size();
  auto full = cert.offsets;
  full.push_back(cert.J);
  if (!verify_witness(cert.n, full, table)) throw std::logic_error("curve point failed verify_witness");
  cert.parity_empty = true;
  const long double need = std::pow(static_cast<long double>(cert.J), 1 - c);
  cert.required_N = static_cast<std::uint64_t>(std::ceil(need - 1e-12L));
  cert.meets_exponent = cert.N >= cert.required_N;
  cert.timings.verify_ms = elapsed_ms(t0);
  return cert;
}

SmallTnRun run_small_tn_pipeline(std::uint64_t x, const SpfTable& table, const PipelineOptions& opts,
                                 unsigned workers) {
  SmallTnRun run;
  run.x = x;
  run.delta = opts.delta;
  run.parameters = resolve(small_tn_parameters(x), opts);
  check_parameters(run.parameters);
  const auto intervals = find_smooth_rich_intervals(x, run.parameters.y, run.parameters.L, opts.delta);
  if (!intervals.empty() && !table.can_factor(intervals.back().hi)) {
    throw RangeError("sieve limit too small for x");
  }
  run.entries.resize(intervals.size());
  parallel_for(intervals.size(), workers, [&](std::uint64_t k) {
    auto& e = run.entries[k];
    e.interval = intervals[k];
    e.certificate = build_small_tn(e.interval.lo, e.interval.hi, run.parameters.y, table);
    if (e.certificate) {
      const auto& off = e.certificate->offsets;
      e.verified = verify_witness(e.certificate->n, off, table) &&
                   (off.empty() || e.certificate->n + off.back() <= e.interval.hi);
    }
  });
  for (const auto& e : run.entries) run.successes += e.certificate && e.verified;
  return run;
}

}  // namespace tnlab
