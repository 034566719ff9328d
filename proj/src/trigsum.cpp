#include "sfw/trigsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sfw/errors.hpp"
#include "sfw/phase.hpp"

namespace sfw {

namespace {

using u128 = unsigned __int128;

u128 to_u128(const mpz_class& z) {
  mpz_class hi = z >> 64;
  mpz_class lo = z - (hi << 64);
  return (static_cast<u128>(mpz_get_ui(hi.get_mpz_t())) << 64) | static_cast<u128>(mpz_get_ui(lo.get_mpz_t()));
}

constexpr double kTwo128 = 3.402823669209384634633746e38;

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  splitmix64(s);
  return splitmix64(s);
}

TrigPoly TrigPoly::from_ext(const std::vector<std::pair<mpz_class, ExtCoeff>>& in, double drop_bits) {
  TrigPoly p;
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : in)
    if (!t.second.is_zero()) top = std::max(top, t.second.log2abs);
  if (std::isinf(top)) return p;
  p.scale_log2 = top;
  for (const auto& [f, c] : in) {
    if (c.is_zero()) continue;
    if (f <= 0) throw PreconditionError("trigonometric terms need f >= 1");
    double rel = c.log2abs - top;
    if (rel < -drop_bits) {
      p.dropped_l1 += 2.0 * std::exp2(rel);
      continue;
    }
    p.terms.push_back({f, std::polar(std::exp2(rel), c.arg)});
  }
  return p;
}

double TrigPoly::l1() const {
  double s = 0.0;
  for (const auto& t : terms) s += 2.0 * std::abs(t.a);
  return s;
}

double TrigPoly::lipschitz_log2() const {
  double s = 0.0;
  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  for (const auto& t : terms) {
    double l = std::log2(4.0 * std::numbers::pi * std::abs(t.a)) + log2_mpz(t.f);
    logs.push_back(l);
    top = std::max(top, l);
  }
  if (std::isinf(top)) return top;
  for (double l : logs) s += std::exp2(l - top);
  return top + std::log2(s) + scale_log2;
}

double TrigPoly::max_frequency_log2() const {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) top = std::max(top, log2_mpz(t.f));
  return top;
}

double value_at(const TrigPoly& p, double x) {
  double v = 0.0;
  for (const auto& t : p.terms) v += 2.0 * (t.a * e2pi(frac_mul(t.f, x))).real();
  return v;
}

std::vector<double> grid_values(const TrigPoly& p, long G, bool midpoint) {
  if (G < 1 || (G & (G - 1)) != 0) throw PreconditionError("grid size must be a power of two");
  const long P = midpoint ? 2 * G : G;
  std::vector<double> ct(static_cast<std::size_t>(P)), st(static_cast<std::size_t>(P));
  for (long j = 0; j < P; ++j) {
    double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(P);
    ct[static_cast<std::size_t>(j)] = std::cos(a);
    st[static_cast<std::size_t>(j)] = std::sin(a);
  }
  std::vector<double> v(static_cast<std::size_t>(G), 0.0);
  const unsigned long mask = static_cast<unsigned long>(P) - 1;
  for (const auto& t : p.terms) {
    mpz_class r;
    mpz_fdiv_r_2exp(r.get_mpz_t(), t.f.get_mpz_t(), static_cast<mp_bitcnt_t>(std::log2(static_cast<double>(P)) + 0.5));
    const unsigned long fr = r.get_ui();
    const double re = 2.0 * t.a.real(), im = 2.0 * t.a.imag();
    unsigned long idx = midpoint ? fr : 0;
    const unsigned long step = midpoint ? (2 * fr) & mask : fr;
    for (long j = 0; j < G; ++j) {
      v[static_cast<std::size_t>(j)] += re * ct[idx] - im * st[idx];
      idx = (idx + step) & mask;
    }
  }
  return v;
}

std::vector<double> sample_values(const TrigPoly& p, long N, std::uint64_t seed, bool stratify) {
  if (N < 1) throw PreconditionError("sample count must be >= 1");
  std::size_t maxbits = 1;
  for (const auto& t : p.terms) maxbits = std::max(maxbits, mpz_sizeinbase(t.f.get_mpz_t(), 2));
  const std::size_t L = (maxbits + 64 + 63) / 64 + 1;
  const long B = static_cast<long>(64 * L);

  int pbits = 0;
  while ((1L << pbits) < N) ++pbits;
  // W[t][i] = floor(frac(f 2^{64 i - B}) 2^128) for limb i of x = u / 2^B.
  struct Pre {
    std::size_t first;
    std::vector<u128> w;
    double re, im;
  };
  std::vector<Pre> pre;
  pre.reserve(p.terms.size());
  for (const auto& t : p.terms) {
    Pre q;
    q.re = 2.0 * t.a.real();
    q.im = 2.0 * t.a.imag();
    const long fb = static_cast<long>(mpz_sizeinbase(t.f.get_mpz_t(), 2));
    q.first = L;
    for (std::size_t i = 0; i < L; ++i) {
      long s = B - 64 * static_cast<long>(i);
      if (fb <= s - 128) continue;
      if (q.first == L) q.first = i;
      mpz_class r;
      mpz_fdiv_r_2exp(r.get_mpz_t(), t.f.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
      if (s >= 128)
        r >>= static_cast<mp_bitcnt_t>(s - 128);
      else
        r <<= static_cast<mp_bitcnt_t>(128 - s);
      mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), 128);
      q.w.push_back(to_u128(r));
    }
    pre.push_back(std::move(q));
  }

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> u(L);
  std::vector<double> out(static_cast<std::size_t>(N), 0.0);
  if ((1L << pbits) != N) stratify = false;
  for (long n = 0; n < N; ++n) {
    for (auto& x : u) x = rng();
    if (stratify && pbits > 0) {
      // Top pbits of u select the stratum.
      long j = n;
      std::uint64_t top = u[L - 1];
      top = (top & (~0ULL >> pbits)) | (static_cast<std::uint64_t>(j) << (64 - pbits));
      u[L - 1] = top;
    }
    double v = 0.0;
    for (const auto& q : pre) {
      u128 acc = 0;
      for (std::size_t i = q.first, k = 0; i < L; ++i, ++k) acc += static_cast<u128>(u[i]) * q.w[k];
      double ph = static_cast<double>(acc) / kTwo128;
      double a = 2.0 * std::numbers::pi * (ph >= 0.5 ? ph - 1.0 : ph);
      v += q.re * std::cos(a) - q.im * std::sin(a);
    }
    out[static_cast<std::size_t>(n)] = v;
  }
  return out;
}

}  // namespace sfw
