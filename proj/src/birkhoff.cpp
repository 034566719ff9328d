#include "sfw/birkhoff.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>

#include "sfw/errors.hpp"
#include "sfw/lacunary.hpp"
#include "sfw/phase.hpp"

namespace sfw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ExtCoeff ext_mul(const ExtCoeff& a, const ExtCoeff& b) {
  if (a.is_zero() || b.is_zero()) return {};
  ExtCoeff r;
  r.log2abs = a.log2abs + b.log2abs;
  r.arg = std::remainder(a.arg + b.arg, 2.0 * std::numbers::pi);
  return r;
}

ExtCoeff ext_sum(const std::vector<ExtCoeff>& xs) {
  double top = -kInf;
  for (const auto& x : xs)
    if (!x.is_zero()) top = std::max(top, x.log2abs);
  if (std::isinf(top)) return {};
  std::complex<double> s = 0.0;
  for (const auto& x : xs)
    if (!x.is_zero()) s += std::polar(std::exp2(x.log2abs - top), x.arg);
  ExtCoeff r = ExtCoeff::from_complex(s);
  if (!r.is_zero()) r.log2abs += top;
  return r;
}

Real resolved_residue(const RotationNumber& alpha, const mpz_class& m) {
  NormValue r = residue_of_multiple(alpha, m);
  if (r.value.is_zero() || mul_2exp(r.error, 20) >= abs(r.value))
    throw PrecisionExhausted("kernel denominator at a multiple with " +
                             std::to_string(mpz_sizeinbase(m.get_mpz_t(), 2)) + " bits is not resolved");
  return r.value;
}

double dist_int(double v) { return std::fabs(v - std::nearbyint(v)); }

double safe_exp2(double e) { return std::isinf(e) && e < 0 ? 0.0 : std::exp2(e); }

}  // namespace

double Spectrum::truncation_bound(const mpz_class& m) const {
  double b = 2.0 * tail_k2;
  if (tail_far > 0.0) b += 2.0 * tail_far * m.get_d();
  return b;
}

Spectrum spectrum_of(const FourierRoof& phi, const RotationNumber& alpha, long dense, const mpz_class& sparse_horizon) {
  Spectrum s;
  s.c0 = phi.c0();
  if (phi.is_constant()) return s;
  if (phi.is_table()) {
    s.terms = phi.entries();
    return s;
  }
  for (long k = 1; k <= dense; ++k) {
    ExtCoeff c = phi.ext_coeff(k);
    if (!c.is_zero()) s.terms.push_back({mpz_class(k), c});
  }
  s.tail_k2 = phi.moment_tail(2, dense);
  if (sparse_horizon > dense) {
    FrequencyClassM M = class_M(alpha, sparse_horizon);
    for (const auto& mm : M.members) {
      if (mm.m <= dense) continue;
      ExtCoeff c = phi.ext_coeff(mm.m);
      if (!c.is_zero()) s.terms.push_back({mm.m, c});
    }
    long far = sparse_horizon.fits_slong_p() ? sparse_horizon.get_si() : std::numeric_limits<long>::max();
    s.tail_far = phi.moment_tail(0, far);
  } else {
    s.tail_far = phi.moment_tail(0, dense);
  }
  return s;
}

Spectrum spectrum_of(const ReducedRoof& r) {
  Spectrum s;
  s.c0 = r.c0;
  s.terms = r.kept;
  return s;
}

KernelValue birkhoff_kernel(const RotationNumber& alpha, const mpz_class& m, const mpz_class& k) {
  if (m < 1) throw PreconditionError("Birkhoff sums need m >= 1");
  KernelValue kv;
  Real x2 = resolved_residue(alpha, k);
  Real x1 = resolved_residue(alpha, m * k);
  Real s1 = sin_pi(x1), s2 = sin_pi(x2);
  kv.K.log2abs = s1.log2_abs() - s2.log2_abs();
  double arg = std::numbers::pi * (x1.to_double() - x2.to_double());
  if (s1.sign() != s2.sign()) arg += std::numbers::pi;
  kv.K.arg = std::remainder(arg, 2.0 * std::numbers::pi);
  kv.ratio_log2 = x1.log2_abs() - x2.log2_abs();
  double gap = kv.K.log2abs - kv.ratio_log2;
  kv.sandwich_ok = gap > -1.0 && gap < 1.0;
  return kv;
}

double birkhoff_direct(const FourierRoof& phi, const RotationNumber& alpha, long m, double x, long horizon) {
  if (m < 1) throw PreconditionError("Birkhoff sums need m >= 1");
  const mpfr_prec_t wp = alpha.precision_bits() + 32;
  Real shift(x - std::floor(x), wp);
  Real one(1L, wp);
  long double sum = 0.0L, comp = 0.0L;
  for (long j = 0; j < m; ++j) {
    double y = shift.to_double();
    if (y >= 1.0) y = 0.0;
    long double term = static_cast<long double>(evaluate(phi, y, horizon)) - comp;
    long double t = sum + term;
    comp = (t - sum) - term;
    sum = t;
    shift += alpha.value();
    if (shift >= one) shift -= one;
  }
  return static_cast<double>(sum);
}

BirkhoffPoly birkhoff_poly(const Spectrum& s, const RotationNumber& alpha, const mpz_class& m,
                           const mpz_class& divisor) {
  if (m < 1) throw PreconditionError("Birkhoff sums need m >= 1");
  if (divisor < 1) throw PreconditionError("divisor must be >= 1");
  BirkhoffPoly bp;
  bp.mean = m.get_d() * s.c0;
  std::vector<std::pair<mpz_class, ExtCoeff>> terms;
  terms.reserve(s.terms.size());
  for (const auto& t : s.terms) {
    if (t.c.is_zero()) continue;
    if (t.m % divisor != 0) throw PreconditionError("frequency " + t.m.get_str() + " is not a multiple of the divisor");
    KernelValue kv = birkhoff_kernel(alpha, m, t.m);
    ++bp.kernels;
    bp.kernels_ok = bp.kernels_ok && kv.sandwich_ok;
    terms.emplace_back(t.m / divisor, ext_mul(t.c, kv.K));
  }
  bp.osc = TrigPoly::from_ext(terms);
  return bp;
}

SumEvaluation birkhoff_fourier(const Spectrum& s, const RotationNumber& alpha, const mpz_class& m, long grid) {
  SumEvaluation ev;
  ev.m = m;
  ev.grid = grid;
  BirkhoffPoly bp = birkhoff_poly(s, alpha, m);
  ev.kernels_ok = bp.kernels_ok;
  std::vector<double> rel = grid_values(bp.osc, grid);
  const double scale = safe_exp2(bp.osc.scale_log2);
  ev.values.resize(rel.size());
  double lo = kInf, hi = -kInf;
  for (std::size_t j = 0; j < rel.size(); ++j) {
    double o = scale * rel[j];
    lo = std::min(lo, o);
    hi = std::max(hi, o);
    ev.values[j] = bp.mean + o;
  }
  ev.R = hi - lo;
  ev.D_log2 = bp.osc.lipschitz_log2();
  return ev;
}

double birkhoff_fourier_at(const Spectrum& s, const RotationNumber& alpha, const mpz_class& m, double x) {
  BirkhoffPoly bp = birkhoff_poly(s, alpha, m);
  return bp.mean + safe_exp2(bp.osc.scale_log2) * value_at(bp.osc, x);
}

const char* plan_kind_name(BirkhoffPlan::Kind k) {
  switch (k) {
    case BirkhoffPlan::Kind::SingleFrequency:
      return "single_frequency";
    case BirkhoffPlan::Kind::MultiFrequency:
      return "multi_frequency";
    case BirkhoffPlan::Kind::ReturnTimes:
      return "return_times";
  }
  return "single_frequency";
}

mpz_class plan_multiplier(const RotationNumber& alpha, int s, mpz_class* q_next) {
  const std::size_t n = static_cast<std::size_t>(s);
  mpz_class next;
  if (n + 1 < alpha.size()) {
    next = alpha.q(n + 1);
  } else if (n + 1 <= alpha.quotient_count() && alpha.quotient(n + 1).exact) {
    next = alpha.quotient(n + 1).value * alpha.q(n) + (n ? alpha.q(n - 1) : mpz_class(0));
  } else {
    throw InsufficientQuotients("q_" + std::to_string(s + 1) + " is not materialised");
  }
  if (q_next) *q_next = next;
  mpz_class den = 4 * alpha.q(n), b;
  mpz_cdiv_q(b.get_mpz_t(), next.get_mpz_t(), den.get_mpz_t());
  return b;
}

BirkhoffPlan make_single_frequency_plan(const RotationNumber& alpha, const std::vector<int>& indices,
                                        std::size_t count) {
  if (indices.empty()) throw PreconditionError("plan refused: no best-return subsequence enters class M");
  BirkhoffPlan plan;
  plan.kind = BirkhoffPlan::Kind::SingleFrequency;
  for (int s : indices) {
    if (count > 0 && plan.entries.size() >= count) break;
    PlanEntry e;
    try {
      e.b = plan_multiplier(alpha, s, &e.q_next);
    } catch (const InsufficientQuotients& ex) {
      plan.warnings.push_back(std::string("index ") + std::to_string(s) + " skipped: " + ex.what());
      continue;
    }
    e.n = static_cast<int>(plan.entries.size());
    e.s = s;
    e.q = alpha.q(static_cast<std::size_t>(s));
    e.m = e.b * e.q;
    e.norm_log2 = norm_of_multiple(alpha, e.m).value.log2_abs();
    e.bound_log2 = log2_mpz(e.b) + alpha.at(static_cast<std::size_t>(s)).theta.log2_abs();
    plan.entries.push_back(std::move(e));
  }
  if (plan.entries.empty() || (count > 0 && plan.entries.size() < count))
    throw PreconditionError("plan refused: only " + std::to_string(plan.entries.size()) +
                            " usable indices at this horizon; raise the horizon or max_convergents");
  return plan;
}

BirkhoffPlan make_single_frequency_plan(const RotationNumber& alpha, const DichotomyVerdict& v, std::size_t count) {
  if (v.outcome != Outcome::WeakMixingSingleFrequency)
    throw PreconditionError(std::string("plan refused: no subsequence of best returns stays in class M with ratios "
                                        "above the floor (verdict ") +
                            outcome_name(v.outcome) + ")");
  return make_single_frequency_plan(alpha, v.subsequence, count);
}

BirkhoffPlan make_multi_frequency_plan(const RotationNumber& alpha, const ReducedRoof& phi2, double variance_target,
                                       double delta, int first_index) {
  if (phi2.stage != ReducedRoof::Stage::BestReturnsOnly)
    throw PreconditionError("multi-frequency plans need a best-returns-only representative");
  if (!(variance_target > 0.0) || !(delta > 0.0 && delta < 1.0))
    throw PreconditionError("variance target must be > 0 and delta in (0, 1)");
  BirkhoffPlan plan;
  plan.kind = BirkhoffPlan::Kind::MultiFrequency;
  plan.variance_target = variance_target;
  plan.delta = delta;
  struct Cand {
    int n;
    mpz_class q, b;
    double d, r;
  };
  std::vector<Cand> cands;
  for (std::size_t i = 0; i < phi2.kept.size(); ++i) {
    const MMember& mm = phi2.kept_members[i];
    if (mm.n < first_index || phi2.kept[i].c.is_zero()) continue;
    Cand c;
    c.n = mm.n;
    c.q = phi2.kept[i].m;
    try {
      c.b = plan_multiplier(alpha, mm.n);
    } catch (const InsufficientQuotients& ex) {
      plan.warnings.push_back(std::string("index ") + std::to_string(mm.n) + " skipped: " + ex.what());
      continue;
    }
    KernelValue kv = birkhoff_kernel(alpha, c.b * c.q, c.q);
    ExtCoeff a = ext_mul(phi2.kept[i].c, kv.K);
    c.d = 2.0 * std::exp2(a.log2abs);
    c.r = a.arg < 0 ? a.arg + 2.0 * std::numbers::pi : a.arg;
    cands.push_back(std::move(c));
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.n < y.n; });
  double total = 0.0;
  for (const auto& c : cands) total += c.d * c.d;
  const double lo = variance_target * (1.0 - delta), hi = variance_target * (1.0 + delta);
  if (total < lo)
    throw PreconditionError("plan refused: sum of d_k^2 at this horizon is " + std::to_string(total) +
                            ", below the variance target; the ratio series looks convergent");
  std::size_t i = 0;
  while (i < cands.size()) {
    double acc = 0.0;
    std::size_t j = i;
    while (j < cands.size() && acc < lo) {
      acc += cands[j].d * cands[j].d;
      ++j;
    }
    if (acc < lo) {
      plan.warnings.push_back("variance target unreachable from index " + std::to_string(cands[i].n) +
                              " at this horizon; plan truncated");
      break;
    }
    if (acc > hi) {
      plan.warnings.push_back("window from index " + std::to_string(cands[i].n) + " overshoots the variance band");
      ++i;
      continue;
    }
    PlanEntry e;
    e.n = static_cast<int>(plan.entries.size());
    e.s = cands[i].n;
    e.q = cands[i].q;
    e.b = cands[i].b;
    e.m = 0;
    for (std::size_t k = i; k < j; ++k) {
      e.window.push_back(cands[k].n);
      e.wq.push_back(cands[k].q);
      e.wb.push_back(cands[k].b);
      e.d.push_back(cands[k].d);
      e.r.push_back(cands[k].r);
      e.m += cands[k].b * cands[k].q;
    }
    e.variance = acc;
    e.norm_log2 = norm_of_multiple(alpha, e.m).value.log2_abs();
    e.bound_log2 = log2_mpz(e.b) + alpha.at(static_cast<std::size_t>(e.s)).theta.log2_abs();
    plan.entries.push_back(std::move(e));
    i = j;
  }
  if (plan.entries.empty()) throw PreconditionError("plan refused: no window meets the variance band");
  return plan;
}

BirkhoffPlan make_return_time_plan(const RotationNumber& alpha, int from, int to) {
  if (from < 0 || to < from) throw PreconditionError("return-time plan needs 0 <= from <= to");
  BirkhoffPlan plan;
  plan.kind = BirkhoffPlan::Kind::ReturnTimes;
  for (int n = from; n <= to; ++n) {
    if (static_cast<std::size_t>(n) >= alpha.size()) {
      plan.warnings.push_back("q_" + std::to_string(n) + " is not materialised; plan truncated");
      break;
    }
    PlanEntry e;
    e.n = n;
    e.s = n;
    e.q = alpha.q(static_cast<std::size_t>(n));
    e.b = 1;
    e.m = e.q;
    e.norm_log2 = alpha.at(static_cast<std::size_t>(n)).theta.log2_abs();
    e.bound_log2 = e.norm_log2;
    plan.entries.push_back(std::move(e));
  }
  if (plan.entries.empty()) throw PreconditionError("return-time plan is empty");
  return plan;
}

LambdaRepresentative lambda_representative(const ReducedRoof& r, double lambda, double far_tail_m1) {
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw PreconditionError("lambda must be finite and nonzero (0 is the trivial eigenvalue)");
  LambdaRepresentative rep;
  rep.lambda = lambda;
  rep.certificate_bound = 1.0 / (16.0 * std::fabs(lambda));
  const double far = 2.0 * far_tail_m1;
  if (far >= rep.certificate_bound)
    throw PreconditionError("cannot satisfy the lambda certificate at this horizon: the tail alone gives " +
                            std::to_string(far) + " >= " + std::to_string(rep.certificate_bound));
  std::vector<TableEntry> kept = r.kept;
  std::sort(kept.begin(), kept.end(), [](const TableEntry& a, const TableEntry& b) { return a.m < b.m; });
  std::vector<double> suffix(kept.size() + 1, 0.0);
  for (std::size_t i = kept.size(); i-- > 0;)
    suffix[i] = suffix[i + 1] + 2.0 * std::exp2(kept[i].c.log2abs + log2_mpz(kept[i].m));
  std::size_t cut = 0;
  while (suffix[cut] + far >= rep.certificate_bound) ++cut;
  rep.spectrum.c0 = r.c0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (i < cut)
      rep.dropped.push_back(kept[i].m);
    else
      rep.spectrum.terms.push_back(kept[i]);
  }
  rep.certificate_sum = suffix[cut] + far;
  return rep;
}

Spectrum multiples_of(const Spectrum& s, const mpz_class& q) {
  Spectrum out;
  out.c0 = s.c0;
  for (const auto& t : s.terms)
    if (t.m % q == 0) out.terms.push_back(t);
  return out;
}

double lambda_shift(double lambda, double c0, const mpz_class& m) {
  mpq_class p(lambda);
  p *= mpq_class(c0);
  p *= m;
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), p.get_num_mpz_t(), p.get_den_mpz_t());
  p -= f;
  return p.get_d();
}

CriterionValue criterion_integral(const Spectrum& s, const RotationNumber& alpha, const mpz_class& m, double lambda,
                                  const QuadratureSettings& q, std::uint64_t stream) {
  if (lambda == 0.0) throw PreconditionError("lambda must be nonzero");
  CriterionValue cv;
  cv.m = m;
  cv.lambda = lambda;
  cv.z = lambda_shift(lambda, s.c0, m);
  BirkhoffPoly bp = birkhoff_poly(s, alpha, m);
  const double al = std::fabs(lambda);
  const double factor = lambda * safe_exp2(bp.osc.scale_log2);
  double trunc = al * (s.truncation_bound(m) + safe_exp2(bp.osc.scale_log2) * bp.osc.dropped_l1);
  if (bp.osc.empty()) {
    cv.integral = dist_int(cv.z);
    cv.error = trunc;
    cv.method = "exact";
    cv.points = 1;
    return cv;
  }
  const double L = al * safe_exp2(bp.osc.lipschitz_log2());
  long G = q.min_grid;
  while (L / (4.0 * static_cast<double>(G)) > q.tol && G < q.max_grid) G *= 2;
  if (L / (4.0 * static_cast<double>(G)) <= q.tol) {
    std::vector<double> v = grid_values(bp.osc, G, true);
    double sum = 0.0;
    for (double x : v) sum += dist_int(cv.z + factor * x);
    cv.integral = sum / static_cast<double>(G);
    cv.error = L / (4.0 * static_cast<double>(G)) + trunc;
    cv.method = "grid";
    cv.points = G;
    return cv;
  }
  std::vector<double> v = sample_values(bp.osc, q.samples, sub_seed(q.seed, stream));
  double sum = 0.0, sum2 = 0.0;
  for (double x : v) {
    double g = dist_int(cv.z + factor * x);
    sum += g;
    sum2 += g * g;
  }
  const double N = static_cast<double>(v.size());
  cv.integral = sum / N;
  double var = std::max(0.0, sum2 / N - cv.integral * cv.integral);
  cv.error = 3.0 * std::sqrt(var / N) + trunc;
  cv.method = "monte_carlo";
  cv.points = q.samples;
  return cv;
}

std::vector<CriterionValue> criterion_integrals(const BirkhoffPlan& plan, const Spectrum& s,
                                                const RotationNumber& alpha, double lambda,
                                                const QuadratureSettings& q) {
  if (plan.entries.empty()) throw PreconditionError("plan is empty");
  std::vector<CriterionValue> out;
  for (const auto& e : plan.entries) {
    CriterionValue cv = criterion_integral(s, alpha, e.m, lambda, q, static_cast<std::uint64_t>(e.n));
    cv.n = e.n;
    cv.norm_log2 = e.norm_log2;
    out.push_back(std::move(cv));
  }
  return out;
}

RangeMeasure range_derivative_measure(const PlanEntry& e, const Spectrum& phi_n, const RotationNumber& alpha,
                                      double lambda, double K1, double K2, long max_grid) {
  if (lambda == 0.0) throw PreconditionError("lambda must be nonzero");
  RangeMeasure rm;
  rm.n = e.n;
  rm.lambda = lambda;
  BirkhoffPoly bp = birkhoff_poly(phi_n, alpha, e.m, e.q);
  const double z = lambda_shift(lambda, phi_n.c0, e.m);
  const double scale = safe_exp2(bp.osc.scale_log2);
  const double Dy = safe_exp2(bp.osc.lipschitz_log2());
  rm.D_log2 = bp.osc.lipschitz_log2() + log2_mpz(e.q);
  long G = 1L << 12;
  while (G < max_grid && static_cast<double>(G) < 64.0 * std::fabs(lambda) * Dy) G *= 2;
  rm.grid = G;
  std::vector<double> v = bp.osc.empty() ? std::vector<double>(static_cast<std::size_t>(G), 0.0)
                                         : grid_values(bp.osc, G);
  double lo = kInf, hi = -kInf;
  long hits = 0;
  for (double x : v) {
    double o = scale * x;
    lo = std::min(lo, o);
    hi = std::max(hi, o);
    if (dist_int(z + lambda * o) >= 0.25) ++hits;
  }
  rm.R = hi - lo;
  rm.measure = static_cast<double>(hits) / static_cast<double>(G);
  rm.below_threshold = std::fabs(lambda) * rm.R <= 4.0;

  ExtCoeff cq;
  for (const auto& t : phi_n.terms)
    if (t.m == e.q) cq = t.c;
  if (!cq.is_zero() && 1.0 - 4.0 * K1 > 0.0) {
    KernelValue kv = birkhoff_kernel(alpha, e.m, e.q);
    rm.R_lower = std::exp2(1.0 + kv.ratio_log2 + cq.log2abs + std::log2(1.0 - 4.0 * K1));
  }
  rm.R_ok = rm.R > rm.R_lower;
  rm.measure_lower = (1.0 - 4.0 * K1) / (8.0 * (1.0 + K2));
  rm.measure_ok = rm.measure > rm.measure_lower;
  return rm;
}

ApproximationCheck approximation_check(const PlanEntry& e, const LambdaRepresentative& rep, const RotationNumber& alpha,
                         long grid) {
  ApproximationCheck c;
  c.n = e.n;
  Spectrum diff;
  for (const auto& t : rep.spectrum.terms)
    if (t.m % e.q != 0) diff.terms.push_back(t);
  BirkhoffPoly bp = birkhoff_poly(diff, alpha, e.m);
  const double factor = std::fabs(rep.lambda) * safe_exp2(bp.osc.scale_log2);
  if (!bp.osc.empty()) {
    for (double x : grid_values(bp.osc, grid)) c.grid_sup = std::max(c.grid_sup, factor * std::fabs(x));
    c.l1_bound = factor * (bp.osc.l1() + bp.osc.dropped_l1);
  }
  c.ok = c.grid_sup < 0.125;
  return c;
}

std::vector<DeltaValue> delta_n(const BirkhoffPlan& plan, const Spectrum& phi2, const RotationNumber& alpha,
                                long grid) {
  if (plan.kind != BirkhoffPlan::Kind::MultiFrequency) throw PreconditionError("delta_n needs a multi-frequency plan");
  int last = -1;
  for (const auto& e : plan.entries) {
    if (e.window.empty() || e.window.front() <= last)
      throw PreconditionError("plan windows must be nonempty with strictly increasing, disjoint indices");
    for (std::size_t k = 1; k < e.window.size(); ++k)
      if (e.window[k] <= e.window[k - 1]) throw PreconditionError("window indices must increase");
    last = e.window.back();
  }
  std::vector<DeltaValue> out;
  for (const auto& e : plan.entries) {
    std::vector<mpz_class> shift(e.window.size());
    for (std::size_t k = 1; k < e.window.size(); ++k) shift[k] = shift[k - 1] + e.wb[k - 1] * e.wq[k - 1];
    std::vector<std::pair<mpz_class, ExtCoeff>> terms;
    for (const auto& t : phi2.terms) {
      std::vector<ExtCoeff> parts;
      for (std::size_t k = 0; k < e.window.size(); ++k) {
        if (t.m == e.wq[k]) continue;
        KernelValue kv = birkhoff_kernel(alpha, e.wb[k] * e.wq[k], t.m);
        ExtCoeff a = ext_mul(t.c, kv.K);
        if (shift[k] != 0) a.arg += 2.0 * std::numbers::pi * residue_of_multiple(alpha, t.m * shift[k]).value.to_double();
        parts.push_back(a);
      }
      ExtCoeff A = ext_sum(parts);
      if (!A.is_zero()) terms.emplace_back(t.m, A);
    }
    DeltaValue dv;
    dv.n = e.n;
    dv.window = e.window;
    TrigPoly p = TrigPoly::from_ext(terms);
    if (p.empty()) {
      dv.grid_sup_log2 = -kInf;
    } else {
      double mx = 0.0;
      for (double x : grid_values(p, grid)) mx = std::max(mx, std::fabs(x));
      dv.grid_sup_log2 = p.scale_log2 + std::log2(mx);
      dv.grid_sup = safe_exp2(dv.grid_sup_log2);
      dv.l1_bound = safe_exp2(p.scale_log2) * (p.l1() + p.dropped_l1);
    }
    out.push_back(std::move(dv));
  }
  return out;
}

namespace {

LambdaOutcome certify_one(const BirkhoffPlan& plan, double lambda, const Spectrum& s, const RotationNumber& alpha,
                          const CertificateSettings& cs, std::size_t index) {
  LambdaOutcome lo;
  lo.lambda = lambda;
  lo.above_threshold = std::fabs(lambda) >= cs.lambda_min;
  QuadratureSettings q = cs.quad;
  q.seed = sub_seed(cs.quad.seed, 1000 + index);
  lo.values = criterion_integrals(plan, s, alpha, lambda, q);
  lo.inf_lower = kInf;
  for (const auto& v : lo.values) lo.inf_lower = std::min(lo.inf_lower, v.integral - v.error);
  const std::size_t N = lo.values.size();
  bool refuted = false;
  if (N >= 2) {
    const CriterionValue& a = lo.values[N - 2];
    const CriterionValue& b = lo.values[N - 1];
    refuted = a.integral + a.error < cs.refute_ceiling && b.integral + b.error < cs.refute_ceiling &&
              b.integral <= a.integral;
  }
  if (lo.inf_lower >= cs.floor)
    lo.status = "PASS";
  else if (refuted)
    lo.status = "REFUTED";
  else
    lo.status = "INCONCLUSIVE";
  if (plan.kind == BirkhoffPlan::Kind::MultiFrequency) {
    for (const auto& e : plan.entries) {
      BirkhoffPoly bp = birkhoff_poly(s, alpha, e.m);
      std::vector<double> v = sample_values(bp.osc, cs.ks_samples, sub_seed(q.seed, 5000 + e.n));
      const double scale = lambda * safe_exp2(bp.osc.scale_log2);
      for (double& x : v) x *= scale;
      EmpiricalDistribution d = make_distribution(std::move(v), q.seed);
      lo.ks.push_back(ks_against_normal(d, 0.0, lambda * lambda * 0.5 * e.variance));
    }
  }
  return lo;
}

}  // namespace

Certificate weak_mixing_certificate(const BirkhoffPlan& plan, const std::vector<double>& lambdas,
                                    const std::vector<Spectrum>& spectra, const RotationNumber& alpha,
                                    const CertificateSettings& cs) {
  if (lambdas.size() != spectra.size()) throw PreconditionError("one spectrum per lambda is required");
  for (double l : lambdas)
    if (l == 0.0) throw PreconditionError("lambda = 0 is the trivial eigenvalue and cannot be tested");
  Certificate cert;
  cert.lambda_min = cs.lambda_min;
  cert.lambdas.resize(lambdas.size());
  if (mpfr_buildopt_tls_p()) {
    std::vector<std::future<LambdaOutcome>> jobs;
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      jobs.push_back(std::async(std::launch::async, certify_one, std::cref(plan), lambdas[i], std::cref(spectra[i]),
                                std::cref(alpha), std::cref(cs), i));
    for (std::size_t i = 0; i < jobs.size(); ++i) cert.lambdas[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      cert.lambdas[i] = certify_one(plan, lambdas[i], spectra[i], alpha, cs, i);
  }
  bool any = false, all_pass = true, refuted = false;
  for (const auto& lo : cert.lambdas) {
    if (!lo.above_threshold) continue;
    any = true;
    all_pass = all_pass && lo.status == "PASS";
    refuted = refuted || lo.status == "REFUTED";
  }
  if (refuted)
    cert.status = "REFUTED";
  else if (any && all_pass)
    cert.status = "PASS";
  else
    cert.status = "INCONCLUSIVE";
  return cert;
}

std::vector<double> lambda_grid(double lambda_min, double c0, int count, double span, int probes) {
  std::vector<double> out;
  if (!std::isfinite(lambda_min) || lambda_min <= 0.0 || lambda_min > 1e6) {
    out.push_back(1.0);
  } else {
    for (int i = 0; i < count; ++i) {
      double t = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
      out.push_back(lambda_min * std::pow(span, t));
    }
  }
  for (int k = 1; k <= probes; ++k) out.push_back(k / c0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace sfw
