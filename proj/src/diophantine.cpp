#include "sfw/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "sfw/errors.hpp"

namespace sfw {

namespace {

std::size_t bits(const mpz_class& z) { return z == 0 ? 0 : mpz_sizeinbase(z.get_mpz_t(), 2); }

double log2_of(const mpz_class& z) {
  if (z <= 0) return -std::numeric_limits<double>::infinity();
  if (bits(z) > 1000) {
    long e = 0;
    double m = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log2(m) + static_cast<double>(e);
  }
  return std::log2(z.get_d());
}

// Largest exponent we are willing to hand to MPFR as a lower bound 2^L.
constexpr double kMaxBoundExponent = 4.0e18;

}  // namespace

PartialQuotients PartialQuotients::finite(std::vector<mpz_class> a) {
  if (a.empty()) throw PreconditionError("finite quotient list must contain a_0");
  for (std::size_t k = 1; k < a.size(); ++k)
    if (a[k] < 1) throw PreconditionError("partial quotients a_k must be >= 1 for k >= 1");
  if (a[0] < 0) throw PreconditionError("a_0 must be >= 0");
  PartialQuotients pq;
  pq.kind_ = Kind::Finite;
  pq.head_ = std::move(a);
  return pq;
}

PartialQuotients PartialQuotients::constant(const mpz_class& c) { return periodic({0}, {c}); }

PartialQuotients PartialQuotients::periodic(std::vector<mpz_class> prefix, std::vector<mpz_class> period) {
  if (prefix.empty()) prefix.push_back(0);
  if (period.empty()) throw PreconditionError("period must be nonempty");
  for (std::size_t k = 1; k < prefix.size(); ++k)
    if (prefix[k] < 1) throw PreconditionError("partial quotients a_k must be >= 1 for k >= 1");
  for (const auto& a : period)
    if (a < 1) throw PreconditionError("partial quotients a_k must be >= 1 for k >= 1");
  PartialQuotients pq;
  pq.kind_ = Kind::Periodic;
  pq.head_ = std::move(prefix);
  pq.period_ = std::move(period);
  return pq;
}

PartialQuotients PartialQuotients::pow2_growth(std::vector<mpz_class> seed) {
  if (seed.empty()) seed.push_back(0);
  for (std::size_t k = 1; k < seed.size(); ++k)
    if (seed[k] < 1) throw PreconditionError("rule produces a_{n+1} < 1");
  PartialQuotients pq;
  pq.kind_ = Kind::Pow2Growth;
  pq.head_ = std::move(seed);
  return pq;
}

PartialQuotients PartialQuotients::power_growth(std::vector<mpz_class> seed, unsigned exponent, long offset) {
  if (seed.empty()) seed.push_back(0);
  for (std::size_t k = 1; k < seed.size(); ++k)
    if (seed[k] < 1) throw PreconditionError("rule produces a_{n+1} < 1");
  // q_n >= 1, so q^e + offset >= 1 for every n iff 1 + offset >= 1.
  if (offset < 0) throw PreconditionError("rule produces a_{n+1} < 1 (negative offset)");
  PartialQuotients pq;
  pq.kind_ = Kind::PowerGrowth;
  pq.head_ = std::move(seed);
  pq.exponent_ = exponent;
  pq.offset_ = offset;
  return pq;
}

PartialQuotients PartialQuotients::euler() {
  PartialQuotients pq;
  pq.kind_ = Kind::Euler;
  pq.head_ = {0};
  return pq;
}

std::optional<QuotientTerm> PartialQuotients::term(std::size_t k, const mpz_class& q_prev) const {
  QuotientTerm t;
  switch (kind_) {
    case Kind::Finite:
      if (k >= head_.size()) return std::nullopt;
      t.value = head_[k];
      return t;
    case Kind::Periodic:
      if (k < head_.size()) {
        t.value = head_[k];
      } else {
        t.value = period_[(k - head_.size()) % period_.size()];
      }
      return t;
    case Kind::Euler:
      t.value = (k % 3 == 2) ? mpz_class(2 * (static_cast<long>(k) + 1) / 3) : mpz_class(1);
      return t;
    case Kind::Pow2Growth:
      if (k < head_.size()) {
        t.value = head_[k];
        return t;
      }
      if (q_prev > static_cast<unsigned long>(max_term_bits)) {
        t.exact = false;
        t.log2_lower = bits(q_prev) > 62 ? kMaxBoundExponent : std::min(q_prev.get_d(), kMaxBoundExponent);
        return t;
      }
      mpz_ui_pow_ui(t.value.get_mpz_t(), 2, q_prev.get_ui());
      return t;
    case Kind::PowerGrowth: {
      if (k < head_.size()) {
        t.value = head_[k];
        return t;
      }
      double lb = static_cast<double>(exponent_) * log2_of(q_prev);
      if (lb > static_cast<double>(max_term_bits)) {
        t.exact = false;
        t.log2_lower = lb;
        return t;
      }
      mpz_pow_ui(t.value.get_mpz_t(), q_prev.get_mpz_t(), exponent_);
      t.value += offset_;
      if (t.value < 1) throw PreconditionError("rule produces a_{n+1} < 1");
      return t;
    }
  }
  return std::nullopt;
}

std::string PartialQuotients::describe() const {
  std::ostringstream os;
  auto list = [&](const std::vector<mpz_class>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  };
  switch (kind_) {
    case Kind::Finite:
      os << "finite[";
      list(head_);
      os << "]";
      break;
    case Kind::Periodic:
      os << "periodic[";
      list(head_);
      os << ";(";
      list(period_);
      os << ")]";
      break;
    case Kind::Euler:
      os << "e-2";
      break;
    case Kind::Pow2Growth:
      os << "a_{n+1}=2^(q_n) seed[";
      list(head_);
      os << "]";
      break;
    case Kind::PowerGrowth:
      os << "a_{n+1}=q_n^" << exponent_ << "+" << offset_ << " seed[";
      list(head_);
      os << "]";
      break;
  }
  return os.str();
}

RotationNumber::RotationNumber(PartialQuotients pq, int precision_bits)
    : RotationNumber(std::move(pq), precision_bits, Limits{}) {}

RotationNumber::RotationNumber(PartialQuotients pq, int precision_bits, Limits limits)
    : pq_(std::move(pq)), prec_(precision_bits), limits_(limits) {
  if (prec_ < 64) throw PreconditionError("precision_bits must be >= 64");
  build();
}

const Convergent& RotationNumber::at(std::size_t n) const {
  if (n >= conv_.size())
    throw InsufficientQuotients("convergent index " + std::to_string(n) + " not available (have " +
                                std::to_string(conv_.size()) + ")");
  return conv_[n];
}

const QuotientTerm& RotationNumber::quotient(std::size_t k) const {
  if (k == 0 || k > terms_.size())
    throw InsufficientQuotients("partial quotient a_" + std::to_string(k) + " not materialised");
  return terms_[k - 1];
}

void RotationNumber::build() {
  const mpfr_prec_t wp = prec_ + 32;
  const std::size_t tail_extra = static_cast<std::size_t>(prec_) + 64;
  const std::size_t total = limits_.max_convergents + tail_extra;

  std::vector<mpz_class> qs{1};
  std::vector<mpz_class> ps{0};
  mpz_class q_prev2 = 0, p_prev2 = 1;
  for (std::size_t k = 1; k <= total; ++k) {
    auto t = pq_.term(k, qs.back());
    if (!t) {
      ended_ = true;
      break;
    }
    terms_.push_back(*t);
    if (!t->exact) break;
    mpz_class qn = t->value * qs.back() + q_prev2;
    mpz_class pn = t->value * ps.back() + p_prev2;
    q_prev2 = qs.back();
    p_prev2 = ps.back();
    bool too_big = bits(qn) > limits_.max_q_bits;
    qs.push_back(std::move(qn));
    ps.push_back(std::move(pn));
    if (too_big && pq_.is_growth_rule()) {
      // The next term would be astronomically large; record it as a bound.
      auto nt = pq_.term(k + 1, qs.back());
      if (nt) terms_.push_back(*nt);
      break;
    }
  }

  // Backward sweep of directed-rounding intervals for the complete quotients
  // alpha_j = [a_j; a_{j+1}, ...], j = 1 .. terms_.size().
  const std::size_t J = terms_.size();
  std::vector<Real> lo(J + 2, Real(wp)), hi(J + 2, Real(wp));
  Real one(1L, wp);
  Real inf(wp);
  mpfr_set_inf(inf.get(), 1);
  // alpha_{J+1} in [1, inf]: any continuation is >= 1.
  lo[J + 1] = one;
  hi[J + 1] = inf;
  for (std::size_t j = J; j >= 1; --j) {
    const QuotientTerm& t = terms_[j - 1];
    if (!t.exact) {
      double L = std::min(t.log2_lower, kMaxBoundExponent);
      mpfr_set_ui_2exp(lo[j].get(), 1, static_cast<mpfr_exp_t>(L), MPFR_RNDD);
      hi[j] = inf;
      continue;
    }
    Real r(wp);
    mpfr_ui_div(r.get(), 1, hi[j + 1].get(), MPFR_RNDD);
    mpfr_add_z(lo[j].get(), r.get(), t.value.get_mpz_t(), MPFR_RNDD);
    mpfr_ui_div(r.get(), 1, lo[j + 1].get(), MPFR_RNDU);
    mpfr_add_z(hi[j].get(), r.get(), t.value.get_mpz_t(), MPFR_RNDU);
  }

  const std::size_t ncap = std::min(limits_.max_convergents, qs.size());
  const mpfr_prec_t P = prec_;
  for (std::size_t n = 0; n < ncap; ++n) {
    if (bits(qs[n]) > limits_.max_q_bits) break;
    // theta_n needs alpha_{n+1}; an index past the materialised terms has [1, inf].
    const std::size_t j = n + 1;
    const Real& alo = j <= J + 1 ? lo[j] : lo[J + 1];
    const Real& ahi = j <= J + 1 ? hi[j] : hi[J + 1];
    const mpz_class& qm1 = n == 0 ? mpz_class(0) : qs[n - 1];
    Real den_hi(wp), den_lo(wp), th_lo(wp), th_hi(wp);
    mpfr_mul_z(den_hi.get(), ahi.get(), qs[n].get_mpz_t(), MPFR_RNDU);
    mpfr_add_z(den_hi.get(), den_hi.get(), qm1.get_mpz_t(), MPFR_RNDU);
    mpfr_mul_z(den_lo.get(), alo.get(), qs[n].get_mpz_t(), MPFR_RNDD);
    mpfr_add_z(den_lo.get(), den_lo.get(), qm1.get_mpz_t(), MPFR_RNDD);
    mpfr_ui_div(th_lo.get(), 1, den_hi.get(), MPFR_RNDD);
    mpfr_ui_div(th_hi.get(), 1, den_lo.get(), MPFR_RNDU);
    Convergent c;
    c.n = static_cast<int>(n);
    c.q = qs[n];
    c.p = ps[n];
    c.theta = Real(wp);
    c.theta_err = Real(wp);
    mpfr_add(c.theta.get(), th_lo.get(), th_hi.get(), MPFR_RNDN);
    mpfr_div_2ui(c.theta.get(), c.theta.get(), 1, MPFR_RNDN);
    mpfr_sub(c.theta_err.get(), th_hi.get(), th_lo.get(), MPFR_RNDU);
    mpfr_div_2ui(c.theta_err.get(), c.theta_err.get(), 1, MPFR_RNDU);
    // Add one ulp of the value for the midpoint rounding.
    Real ulp = mul_2exp(abs(c.theta), -(static_cast<long>(wp) - 2));
    c.theta_err += ulp;
    c.resolved = !c.theta.is_zero() && c.theta_err <= mul_2exp(c.theta, -(static_cast<long>(P) - 8));
    conv_.push_back(std::move(c));
  }
  if (conv_.empty()) throw InsufficientQuotients("no convergents could be materialised");
}

std::vector<Convergent> convergents(const RotationNumber& alpha, std::size_t N) {
  if (N < 1) throw PreconditionError("N must be >= 1");
  if (N > alpha.size())
    throw InsufficientQuotients("requested " + std::to_string(N) + " convergents, stream supplies " +
                                std::to_string(alpha.size()));
  std::vector<Convergent> out;
  out.reserve(N);
  for (std::size_t n = 0; n < N; ++n) out.push_back(alpha.at(n));
  return out;
}

Real circle_norm(const Real& x) { return abs(x - round_nearest(x)); }

NormValue residue_of_multiple(const RotationNumber& alpha, const mpz_class& m) {
  const mpfr_prec_t wp = alpha.precision_bits() + 32;
  NormValue out{Real(wp), Real(wp)};
  mpz_class N = abs(m);
  if (N == 0) return out;

  // Largest index with q_j <= N.
  std::size_t lo = 0, hi = alpha.size();
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (alpha.q(mid) <= N)
      lo = mid;
    else
      hi = mid;
  }
  Real sum(wp), err(wp), mass(wp);
  mpz_class b;
  for (std::size_t j = lo + 1; j-- > 0 && N > 0;) {
    const Convergent& c = alpha.at(j);
    if (c.q > N) continue;
    mpz_fdiv_q(b.get_mpz_t(), N.get_mpz_t(), c.q.get_mpz_t());
    N -= b * c.q;
    Real t = c.theta * b;
    if (j % 2 == 0)
      sum += t;
    else
      sum -= t;
    mass += t;
    err += c.theta_err * b;
  }
  err += mul_2exp(mass, -(static_cast<long>(wp) - 4));
  sum -= round_nearest(sum);
  out.value = m < 0 ? -sum : sum;
  out.error = err;
  return out;
}

NormValue norm_of_multiple(const RotationNumber& alpha, const mpz_class& m) {
  if (m == 0) throw PreconditionError("norm_of_multiple requires m != 0");
  NormValue r = residue_of_multiple(alpha, m);
  r.value = abs(r.value);
  if (r.value.is_zero() || mul_2exp(r.error, 2) >= r.value)
    throw PrecisionExhausted("||m alpha|| for m with " + std::to_string(mpz_sizeinbase(m.get_mpz_t(), 2)) +
                             " bits is not separated from its error bound; raise precision_bits");
  return r;
}

namespace {

using u128 = unsigned __int128;

// floor(alpha * 2^128) for a 128-bit fixed-point prefilter.
u128 fixed_alpha(const RotationNumber& alpha) {
  Real a = mul_2exp(alpha.value(), 128);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), a.get(), MPFR_RNDD);
  u128 hi = 0;
  mpz_class top = z >> 64;
  mpz_class low = z - (top << 64);
  hi = static_cast<u128>(mpz_get_ui(top.get_mpz_t())) << 64;
  return hi | static_cast<u128>(mpz_get_ui(low.get_mpz_t()));
}

long double approx_norm(u128 A, unsigned long q) {
  u128 f = static_cast<u128>(q) * A;
  u128 d = f > (~static_cast<u128>(0)) / 2 ? (~f) + 1 : f;
  return static_cast<long double>(d) / 3.402823669209384634633746e38L;
}

// Compare ||m alpha|| against 1/(2 m^k); true when strictly below (k = 1) or
// at most (k = 2).
bool compare_threshold(const RotationNumber& alpha, const mpz_class& m, int k) {
  NormValue v = norm_of_multiple(alpha, m);
  const mpfr_prec_t wp = alpha.precision_bits() + 32;
  Real lhs = v.value * m;
  if (k == 2) lhs = lhs * m;
  lhs = mul_2exp(lhs, 1);
  Real one(1L, wp);
  Real scaled_err = mul_2exp(v.error * m, 1);
  if (k == 2) scaled_err = scaled_err * m;
  Real gap = abs(lhs - one);
  if (gap <= scaled_err) throw PrecisionExhausted("threshold comparison not separated at m = " + m.get_str());
  return k == 1 ? lhs < one : lhs <= one;
}

}  // namespace

namespace {

// x < q_{n+1}, using a_{n+1} when q_{n+1} itself was not stored. An inexact
// a_{n+1} means q_{n+1} exceeds every stored quantity.
bool below_next(const RotationNumber& alpha, std::size_t n, const mpz_class& x) {
  if (n + 1 < alpha.size()) return x < alpha.q(n + 1);
  if (alpha.quotient_count() <= n) return false;
  const QuotientTerm& t = alpha.quotient(n + 1);
  if (!t.exact) return true;
  mpz_class next = t.value * alpha.q(n) + (n ? alpha.q(n - 1) : mpz_class(0));
  return x < next;
}

}  // namespace

GoodReturn factor_over_best_returns(const RotationNumber& alpha, const mpz_class& q) {
  GoodReturn g;
  g.q = q;
  for (std::size_t n = alpha.size(); n-- > 0;) {
    const mpz_class& qn = alpha.q(n);
    if (qn > q) continue;
    if (q % qn == 0) {
      g.l = q / qn;
      g.n = static_cast<int>(n);
      g.l_bound_ok = below_next(alpha, n, g.l * g.l * qn);
      return g;
    }
  }
  return g;
}

GoodReturns good_returns(const RotationNumber& alpha, const mpz_class& Q) {
  if (Q < 1) throw PreconditionError("Q must be >= 1");
  GoodReturns out;
  out.Q = Q;
  if (Q <= kFullScanLimit) {
    out.full_scan = true;
    const u128 A = fixed_alpha(alpha);
    const unsigned long qmax = Q.get_ui();
    for (unsigned long q = 1; q <= qmax; ++q) {
      long double d = approx_norm(A, q);
      long double margin = static_cast<long double>(q) * 1.2e-38L + 1e-30L;
      if (d >= 0.5L / static_cast<long double>(q) + margin) continue;
      mpz_class mq(q);
      if (compare_threshold(alpha, mq, 1)) out.items.push_back(factor_over_best_returns(alpha, mq));
    }
    return out;
  }
  std::set<mpz_class> seen;
  for (std::size_t n = 0; n < alpha.size(); ++n) {
    const mpz_class& qn = alpha.q(n);
    if (qn > Q) break;
    for (mpz_class l = 1; l * qn <= Q; ++l) {
      mpz_class m = l * qn;
      if (n + 1 < alpha.size() && l * l * qn >= alpha.q(n + 1)) break;
      if (seen.count(m)) continue;
      if (!compare_threshold(alpha, m, 1)) break;
      seen.insert(m);
      if (seen.size() > 1000000) break;
    }
  }
  for (const auto& m : seen) out.items.push_back(factor_over_best_returns(alpha, m));
  return out;
}

bool in_class_M(const RotationNumber& alpha, const mpz_class& m) {
  if (m == 0) return true;
  return compare_threshold(alpha, abs(m), 2);
}

bool square_growth_at(const RotationNumber& alpha, std::size_t n) {
  const mpz_class& qn = alpha.q(n);
  return below_next(alpha, n, qn * qn);
}

MMember annotate_member(const RotationNumber& alpha, const mpz_class& m) {
  MMember mm;
  mm.m = m;
  if (m == 0) {
    mm.tag = MMember::Tag::Zero;
    mm.norm = Real(alpha.precision_bits() + 32);
    return mm;
  }
  GoodReturn g = factor_over_best_returns(alpha, m);
  mm.l = g.l;
  mm.n = g.n;
  mm.factor_ok = g.l_bound_ok;
  mm.tag = g.l == 1 ? MMember::Tag::BestReturn : MMember::Tag::Multiple;
  mm.norm = norm_of_multiple(alpha, m).value;
  if (mm.tag == MMember::Tag::BestReturn) {
    const std::size_t n = static_cast<std::size_t>(g.n);
    const mpz_class& qn = alpha.q(n);
    mm.square_growth = below_next(alpha, n, qn * qn);
  }
  return mm;
}

FrequencyClassM class_M(const RotationNumber& alpha, const mpz_class& horizon, std::size_t member_cap) {
  if (horizon < 1) throw PreconditionError("horizon must be >= 1");
  FrequencyClassM out;
  out.horizon = horizon;
  out.members.push_back(annotate_member(alpha, 0));
  if (horizon <= kFullScanLimit) {
    out.full_scan = true;
    const u128 A = fixed_alpha(alpha);
    const unsigned long H = horizon.get_ui();
    for (unsigned long m = 1; m <= H; ++m) {
      long double d = approx_norm(A, m);
      long double mm = static_cast<long double>(m);
      long double margin = mm * 1.2e-38L + 1e-30L;
      if (d > 0.5L / (mm * mm) + margin) continue;
      mpz_class z(m);
      if (compare_threshold(alpha, z, 2)) {
        if (out.members.size() >= member_cap) {
          out.truncated = true;
          break;
        }
        out.members.push_back(annotate_member(alpha, z));
      }
    }
    return out;
  }
  std::set<mpz_class> found;
  for (std::size_t n = 0; n < alpha.size() && !out.truncated; ++n) {
    const mpz_class& qn = alpha.q(n);
    if (qn > horizon) break;
    for (mpz_class l = 1; l * qn <= horizon; ++l) {
      if (n + 1 < alpha.size() && l * l * qn >= alpha.q(n + 1)) break;
      mpz_class m = l * qn;
      if (!compare_threshold(alpha, m, 2)) break;
      found.insert(m);
      if (found.size() >= member_cap) {
        out.truncated = true;
        break;
      }
    }
  }
  if (!out.truncated && alpha.stream_ended() && alpha.q(alpha.size() - 1) <= horizon)
    throw InsufficientQuotients("class M up to the horizon needs more partial quotients than were given");
  if (!out.truncated && (alpha.size() == 0 || alpha.q(alpha.size() - 1) <= horizon))
    throw PrecisionExhausted("class M up to " + std::to_string(mpz_sizeinbase(horizon.get_mpz_t(), 2)) +
                             " bits needs convergents past q_" + std::to_string(alpha.size() - 1) +
                             "; raise precision_bits");
  for (const auto& m : found) out.members.push_back(annotate_member(alpha, m));
  return out;
}

RotationNumber make_liouville_alpha(const PartialQuotients& rule, int precision_bits) {
  if (!rule.is_growth_rule()) throw PreconditionError("make_liouville_alpha expects a growth rule");
  return RotationNumber(rule, precision_bits);
}

}  // namespace sfw
