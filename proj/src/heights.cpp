#include "tnlab/heights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tnlab/errors.hpp"
#include "tnlab/gf2.hpp"
#include "tnlab/tn_engine.hpp"

namespace tnlab {

namespace {

std::string num(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Lg", v);
  return buf;
}

long double log_mpz(const mpz_class& v) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(static_cast<long double>(mant)) + static_cast<long double>(exp) * std::log(2.0L);
}

std::vector<std::uint64_t> divisors(std::uint64_t m) {
  std::vector<std::uint64_t> out{1};
  for (const auto& pp : factorize_trial(m).factors) {
    const auto base = out.size();
    std::uint64_t pk = 1;
    for (unsigned e = 0; e < pp.exponent; ++e) {
      pk *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_square128(unsigned __int128 v, std::uint64_t& root) {
  auto r = static_cast<unsigned __int128>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  root = static_cast<std::uint64_t>(r);
  return r * r == v;
}

long double beg_exponent(long double n, long double log_h) {
  const long double n4 = n * n * n * n;
  return 212 * n4 * std::log(4 * n) + 50 * n4 * log_h;
}

}  // namespace

PellReport pell_solutions(std::uint64_t J, std::uint64_t search_limit) {
  if (J < 1) throw DomainError("pell_solutions needs J >= 1");
  if (J > (std::uint64_t{1} << 31)) throw RangeError("pell_solutions supports J <= 2^31");
  PellReport out;
  out.J = J;

  std::set<PellPoint> found;
  for (const auto d : divisors(J)) {
    const std::uint64_t m = J / d;
    for (const auto e : divisors(m)) {
      const std::uint64_t f = m / e;
      if (e >= f || (e ^ f) & 1) continue;
      const std::uint64_t a = (f - e) / 2;
      const std::uint64_t b = (f + e) / 2;
      found.insert({d * a * a, d * a * b});
    }
  }
  out.solutions.assign(found.begin(), found.end());

  out.brute_limit = std::min(J * J, search_limit);
  std::vector<PellPoint> brute;
  for (std::uint64_t x = 1; x <= out.brute_limit; ++x) {
    std::uint64_t y = 0;
    if (is_square128(static_cast<unsigned __int128>(x) * (x + J), y)) brute.push_back({x, y});
  }
  std::vector<PellPoint> in_range;
  for (const auto& p : out.solutions)
    if (p.x <= out.brute_limit) in_range.push_back(p);
  out.brute_agrees = brute == in_range;
  return out;
}

HeightBoundReport beg_log_bound(int degree, const mpz_class& H) {
  if (degree < 3) throw DomainError("beg_log_bound needs degree >= 3");
  if (H < 1) throw DomainError("beg_log_bound needs H >= 1");
  HeightBoundReport r;
  r.label = "beg";
  r.quantity = "log log x";
  r.value = beg_exponent(degree, log_mpz(H));
  r.inputs = {{"degree", std::to_string(degree)}, {"H", H.get_str()}};
  r.constant_policy = "explicit: 212 n^4 ln(4n) + 50 n^4 ln H";
  return r;
}

HeightBoundReport small_s_log_bound(std::uint64_t s, std::uint64_t J, std::optional<long double> constant) {
  if (s < 1 || s >= J) throw DomainError("small_s_log_bound needs 1 <= s < J");
  HeightBoundReport r;
  r.label = "small_s";
  r.quantity = "log log x";
  const long double lj = std::log(static_cast<long double>(J));
  r.inputs = {{"s", std::to_string(s)}, {"J", std::to_string(J)}};
  if (constant) {
    if (*constant < 0) throw DomainError("constant must be >= 0");
    const long double sl = static_cast<long double>(s);
    r.value = *constant * sl * sl * sl * sl * sl * lj;
    r.inputs.emplace_back("constant", num(*constant));
    r.constant_policy = "given: constant * s^5 * ln J with constant = " + num(*constant);
  } else {
    const long double n = static_cast<long double>(s + 2);
    r.value = beg_exponent(n, static_cast<long double>(s + 1) * lj);
    r.constant_policy = "derived: degree s+2, H = J^(s+1) in 212 n^4 ln(4n) + 50 n^4 ln H";
  }
  return r;
}

LowOmegaSelection select_low_omega(std::span<const std::uint64_t> bs, std::uint64_t J) {
  const std::size_t t = bs.size();
  if (t < 3) throw PreconditionError("select_low_omega needs at least three entries");
  if (J < 2) throw PreconditionError("select_low_omega needs J >= 2");
  std::vector<std::vector<std::uint64_t>> supports(t);
  for (std::size_t i = 0; i < t; ++i) {
    if (bs[i] == 0) throw PreconditionError("entry " + std::to_string(i) + " is zero");
    for (const auto& pp : factorize_trial(bs[i]).factors) {
      if (pp.prime > J) {
        throw PreconditionError("entry " + std::to_string(i) + " has prime factor " +
                                std::to_string(pp.prime) + " > J");
      }
      supports[i].push_back(pp.prime);
    }
  }
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t k = i + 1; k < t; ++k)
      if (const auto g = std::gcd(bs[i], bs[k]); g > J) {
        throw PreconditionError("gcd(b_" + std::to_string(i) + ", b_" + std::to_string(k) +
                                ") = " + std::to_string(g) + " > J");
      }

  LowOmegaSelection out;
  out.order.resize(t);
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return supports[a].size() > supports[b].size(); });
  for (std::size_t k = 0; k < 3; ++k) {
    out.indices[k] = out.order[t - 1 - k];
    out.omegas[k] = supports[out.indices[k]].size();
  }

  const long double lj = std::log(static_cast<long double>(J));
  std::set<std::uint64_t> uni;
  out.union_inequality_holds = true;
  for (std::size_t r = 1; r <= t; ++r) {
    const auto& s = supports[out.order[r - 1]];
    uni.insert(s.begin(), s.end());
    const long double rl = static_cast<long double>(r);
    UnionCheck c{r, uni.size(), rl * static_cast<long double>(s.size()) - rl * (rl - 1) / 2 * lj};
    c.holds = static_cast<long double>(c.union_size) >= c.rhs;
    out.union_inequality_holds = out.union_inequality_holds && c.holds;
    out.union_checks.push_back(c);
  }

  const long double tl = static_cast<long double>(t);
  const long double cap = static_cast<long double>(uni.size()) / (tl - 2) + (tl - 1) / 2 * lj + 1;
  out.selection_bound_holds = std::all_of(out.omegas.begin(), out.omegas.end(),
                                          [&](std::size_t w) { return static_cast<long double>(w) <= cap; });
  return out;
}

PellSystem pell_system_decompose(std::uint64_t x, std::span<const std::uint64_t> offsets,
                                 const SpfTable& table) {
  if (x < 1) throw DomainError("pell_system_decompose needs x >= 1");
  if (offsets.size() < 2 || offsets.front() != 0) throw DomainError("offsets must start at 0 and hold J");
  for (std::size_t i = 1; i < offsets.size(); ++i)
    if (offsets[i] <= offsets[i - 1]) throw DomainError("offsets must be strictly increasing");
  PellSystem out;
  out.x = x;
  out.J = offsets.back();
  if (!table.can_factor(x + out.J)) {
    throw ResourceError("x + J = " + std::to_string(x + out.J) + " is beyond the factoring budget");
  }

  ParityVector acc;
  for (const auto j : offsets) {
    const auto f = factorize_any(x + j, table);
    acc ^= parity_vector(f);
    PellEntry e{j, f.squarefree_kernel(), 0};
    e.z = isqrt((x + j) / e.b);
    if (e.b * e.z * e.z != x + j) throw std::logic_error("squarefree split does not reconstruct");
    for (const auto& pp : f.factors)
      if (pp.exponent % 2 == 1) out.max_b_prime = std::max(out.max_b_prime, pp.prime);
    out.entries.push_back(e);
  }
  out.product_is_square = acc.empty();
  if (out.product_is_square && out.max_b_prime > out.J) {
    throw std::logic_error("square product with an odd-multiplicity prime above J");
  }
  for (std::size_t i = 0; i < out.entries.size(); ++i)
    for (std::size_t k = i + 1; k < out.entries.size(); ++k)
      if (std::gcd(out.entries[i].b, out.entries[k].b) > out.J) {
        throw std::logic_error("gcd(b_i, b_k) exceeds J");
      }
  return out;
}

long double tn_lower_bound_from_log(long double ln_n, long double constant) {
  if (!(ln_n >= std::log(16.0L))) throw DomainError("tn lower bound needs n >= 16");
  if (!(constant >= 0)) throw DomainError("constant must be >= 0");
  const long double ll = std::log(ln_n);
  const long double lll = std::log(ll);
  return constant * std::pow(ll, 1.2L) * std::pow(lll, -0.2L);
}

HeightBoundReport tn_lower_bound_eval(const mpz_class& n, long double constant) {
  if (n < 16) throw DomainError("tn lower bound needs n >= 16");
  HeightBoundReport r;
  r.label = "tn_lower";
  r.quantity = "t_n";
  r.value = tn_lower_bound_from_log(log_mpz(n), constant);
  r.inputs = {{"n", n.get_str()}, {"constant", num(constant)}};
  r.constant_policy = constant == kTnLowerDefaultConstant
                          ? "default: implied constant unspecified, set to 1"
                          : "given: constant = " + num(constant);
  return r;
}

TnLowerCheck tn_lower_bound_check(std::uint64_t x, long double constant, const SpfTable& table,
                                  unsigned workers) {
  if (x < 16) throw DomainError("tn_lower_bound_check needs x >= 16");
  TnLowerCheck out;
  out.x = x;
  out.constant = constant;
  const long double top = tn_lower_bound_from_log(std::log(static_cast<long double>(x)), constant);
  if (!table.can_factor(x + static_cast<std::uint64_t>(top) + 1)) throw RangeError("x exceeds sieve limit");

  const std::uint64_t count = x - 15;
  std::vector<std::uint8_t> violated(count, 0);
  parallel_for(count, workers, [&](std::uint64_t i) {
    const std::uint64_t n = 16 + i;
    if (is_square(n)) return;
    const long double b = tn_lower_bound_from_log(std::log(static_cast<long double>(n)), constant);
    const auto cap = static_cast<std::uint64_t>(std::floor(b));
    if (cap == 0) return;
    try {
      const auto r = compute_tn(n, table, {.cap = cap, .use_shortcut = true});
      if (static_cast<long double>(r.t) < b) violated[i] = 1;
    } catch (const CapExceeded&) {
    }
  });
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!is_square(16 + i)) ++out.scanned;
    if (violated[i]) out.violations.push_back(16 + i);
  }
  return out;
}

}  // namespace tnlab
