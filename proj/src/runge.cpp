#include "tnlab/runge.hpp"

#include <algorithm>
#include <stdexcept>

#include "tnlab/detail/parallel.hpp"
#include "tnlab/errors.hpp"

namespace tnlab {

namespace {

mpz_class pow4(unsigned e) {
  mpz_class r = 1;
  r <<= 2 * e;
  return r;
}

mpz_class pow_mpz(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

void validate_offsets(std::span<const std::uint64_t> offsets) {
  if (offsets.size() % 2 != 0) throw DomainError("offset count must be even");
  if (offsets.size() < 4) throw DomainError("need u >= 2, i.e. at least four offsets");
  if (offsets.front() != 0) throw DomainError("first offset must be 0");
  for (std::size_t i = 1; i < offsets.size(); ++i)
    if (offsets[i] <= offsets[i - 1]) throw DomainError("offsets must be strictly increasing");
}

}  // namespace

Dyadic::Dyadic(mpz_class num, unsigned k) : num_(std::move(num)), k_(k) { canonicalize(); }

void Dyadic::canonicalize() {
  if (num_ == 0) {
    k_ = 0;
    return;
  }
  while (k_ > 0 && mpz_divisible_2exp_p(num_.get_mpz_t(), 2)) {
    num_ >>= 2;
    --k_;
  }
}

Dyadic Dyadic::half() const { return Dyadic(num_ * 2, k_ + 1); }

Dyadic Dyadic::times_pow4(unsigned e) const {
  const unsigned drop = std::min(e, k_);
  mpz_class n = num_;
  n <<= 2 * (e - drop);
  return Dyadic(n, k_ - drop);
}

bool Dyadic::abs_at_most(const mpz_class& bound) const {
  return abs(num_) <= bound * pow4(k_);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  const unsigned k = std::max(a.k_, b.k_);
  mpz_class na = a.num_, nb = b.num_;
  na <<= 2 * (k - a.k_);
  nb <<= 2 * (k - b.k_);
  return Dyadic(na + nb, k);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) { return Dyadic(a.num_ * b.num_, a.k_ + b.k_); }

std::string Dyadic::str() const {
  if (k_ == 0) return num_.get_str();
  mpq_class q(num_, pow4(k_));
  q.canonicalize();
  return q.get_str();
}

RationalPoly::RationalPoly(std::vector<Dyadic> coeffs) : c_(std::move(coeffs)) { trim(); }

RationalPoly::RationalPoly(const IntPoly& p) {
  for (const auto& v : p) c_.emplace_back(v);
  trim();
}

void RationalPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
  std::vector<Dyadic> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return RationalPoly(std::move(c));
}

RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
  std::vector<Dyadic> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] - b[i];
  return RationalPoly(std::move(c));
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Dyadic> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
  return RationalPoly(std::move(c));
}

std::string RationalPoly::str() const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const auto& v = c_[i];
    if (v.is_zero()) continue;
    const bool neg = v.sign() < 0;
    const auto mag = (neg ? -v : v).str();
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (i == 0) {
      out += mag;
    } else {
      if (mag != "1") out += mag + "*";
      out += i == 1 ? "x" : "x^" + std::to_string(i);
    }
  }
  return out;
}

IntPoly expand_offset_poly(std::span<const std::uint64_t> offsets) {
  validate_offsets(offsets);
  IntPoly p{1};
  for (const auto j : offsets) {
    IntPoly next(p.size() + 1, 0);
    const mpz_class mj(static_cast<unsigned long>(j));
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i + 1] += p[i];
      next[i] += p[i] * mj;
    }
    p = std::move(next);
  }
  while (p.size() > 1 && p.back() == 0) p.pop_back();

  const unsigned long deg = offsets.size();
  const mpz_class J(static_cast<unsigned long>(offsets.back()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0 || p[i] > binomial(deg, i) * pow_mpz(J, deg - i)) {
      throw std::logic_error("coefficient bound violated in expand_offset_poly");
    }
  }
  return p;
}

NearSquareDecomposition compute_f_g(const IntPoly& P) {
  if (P.empty() || P.back() != 1) throw DomainError("P must be monic");
  const std::size_t deg = P.size() - 1;
  if (deg % 2 != 0 || deg < 4) throw DomainError("P must have even degree >= 4");
  const unsigned u = static_cast<unsigned>(deg / 2);

  std::vector<Dyadic> a(u + 1);
  a[u] = Dyadic(1);
  for (unsigned j = u; j-- > 0;) {
    Dyadic s(P[u + j]);
    for (unsigned i = j + 1; i <= u - 1; ++i) s = s - a[i] * a[u - i + j];
    a[j] = s.half();
  }

  NearSquareDecomposition d;
  d.u = u;
  d.P = P;
  d.f = RationalPoly(std::move(a));
  const RationalPoly p(P);
  d.g = p - d.f * d.f;
  d.g_is_zero = d.g.is_zero();
  d.reconstructs = d.f * d.f + d.g == p;
  return d;
}

BoundChecks verify_bounds(const NearSquareDecomposition& d, const mpz_class& J) {
  BoundChecks b;
  const unsigned u = d.u;
  const mpz_class U(static_cast<unsigned long>(u));
  b.degree_g = d.g.degree() < static_cast<int>(u);

  b.a_bound = true;
  for (unsigned k = 1; k <= u; ++k) {
    const mpz_class base = mpz_class(static_cast<unsigned long>(k)) * U * J;
    b.a_bound = b.a_bound && d.f[u - k].abs_at_most(pow_mpz(base, k));
  }

  b.denominators = true;
  for (unsigned i = 0; i <= u; ++i) b.denominators = b.denominators && d.f[i].times_pow4(u - i).is_integer();

  b.b_bound = true;
  for (int i = 0; i <= d.g.degree(); ++i) {
    const unsigned long iu = static_cast<unsigned long>(i);
    const mpz_class bound = 5 * pow_mpz(U, 4 * u - 2 * iu) * pow_mpz(J, 2 * u - iu);
    b.b_bound = b.b_bound && d.g[iu].abs_at_most(bound);
  }
  return b;
}

RungeReport runge_decompose(std::span<const std::uint64_t> offsets) {
  RungeReport r;
  r.offsets.assign(offsets.begin(), offsets.end());
  const auto P = expand_offset_poly(offsets);
  r.J = offsets.back();
  const mpz_class J(static_cast<unsigned long>(r.J));
  r.decomposition = compute_f_g(P);
  r.bounds = verify_bounds(r.decomposition, J);
  r.height_bound = height_bound(r.decomposition.u, J);
  return r;
}

mpz_class height_bound(unsigned u, const mpz_class& J) {
  if (u < 2) throw DomainError("height_bound needs u >= 2");
  if (J < 1) throw DomainError("height_bound needs J >= 1");
  return 5 * pow_mpz(mpz_class(2UL * u), 4UL * u) * pow_mpz(J, 2UL * u);
}

std::vector<IntegralPoint> search_integral_points(std::span<const std::uint64_t> offsets,
                                                  std::uint64_t x_limit, unsigned workers) {
  validate_offsets(offsets);
  const auto bound = height_bound(static_cast<unsigned>(offsets.size() / 2),
                                  mpz_class(static_cast<unsigned long>(offsets.back())));
  constexpr std::uint64_t kChunk = 1 << 14;
  const std::uint64_t chunks = (x_limit + kChunk - 1) / kChunk;
  std::vector<std::vector<IntegralPoint>> found(chunks);
  parallel_for(chunks, workers, [&](std::uint64_t c) {
    const std::uint64_t lo = 1 + c * kChunk;
    const std::uint64_t hi = std::min(x_limit, lo + kChunk - 1);
    mpz_class prod, root;
    for (std::uint64_t x = lo; x <= hi; ++x) {
      prod = 1;
      for (const auto j : offsets) prod *= static_cast<unsigned long>(x + j);
      if (!mpz_perfect_square_p(prod.get_mpz_t())) continue;
      mpz_sqrt(root.get_mpz_t(), prod.get_mpz_t());
      if (mpz_class(static_cast<unsigned long>(x)) > bound) {
        throw std::logic_error("integral point above the height bound");
      }
      found[c].push_back({x, root});
    }
  });
  std::vector<IntegralPoint> out;
  for (auto& v : found)
    for (auto& p : v) out.push_back(std::move(p));
  return out;
}

}  // namespace tnlab
