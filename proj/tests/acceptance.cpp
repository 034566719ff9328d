// One line per acceptance criterion. Exit status is the number of failures.
#include <mpfr.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sfw/birkhoff.hpp"
#include "sfw/cohomology.hpp"
#include "sfw/diophantine.hpp"
#include "sfw/errors.hpp"
#include "sfw/lacunary.hpp"
#include "sfw/phase.hpp"
#include "sfw/roof.hpp"

using namespace sfw;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string f(const char* fmt, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

// Test-side arithmetic, independent of the library's continued fraction code.
struct MpfrNumber {
  mpfr_t v;
  explicit MpfrNumber(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~MpfrNumber() { mpfr_clear(v); }
  MpfrNumber(const MpfrNumber&) = delete;
};

constexpr mpfr_prec_t kOracleBits = 4096;

void golden_value(mpfr_t out) {
  mpfr_sqrt_ui(out, 5, MPFR_RNDN);
  mpfr_sub_ui(out, out, 1, MPFR_RNDN);
  mpfr_div_2ui(out, out, 1, MPFR_RNDN);
}

void silver_value(mpfr_t out) {
  mpfr_sqrt_ui(out, 2, MPFR_RNDN);
  mpfr_sub_ui(out, out, 1, MPFR_RNDN);
}

void euler_value(mpfr_t out) {
  mpfr_set_ui(out, 1, MPFR_RNDN);
  mpfr_exp(out, out, MPFR_RNDN);
  mpfr_sub_ui(out, out, 2, MPFR_RNDN);
}

// ||m x|| at oracle precision.
double oracle_norm_log2(const mpfr_t x, const mpz_class& m, mpfr_t work) {
  mpfr_mul_z(work, x, m.get_mpz_t(), MPFR_RNDN);
  MpfrNumber r(kOracleBits);
  mpfr_rint(r.v, work, MPFR_RNDN);
  mpfr_sub(work, work, r.v, MPFR_RNDN);
  mpfr_abs(work, work, MPFR_RNDN);
  long e;
  double d = mpfr_get_d_2exp(&e, work, MPFR_RNDN);
  return std::log2(d) + static_cast<double>(e);
}

// 1/(q_n + q_{n+1}) < ||q_n x|| <= 1/q_{n+1} for 1 <= n <= N, oracle side.
bool oracle_theta_bounds(const std::function<long(int)>& a, const std::function<void(mpfr_t)>& value, int N,
                   std::vector<mpz_class>& qs) {
  MpfrNumber x(kOracleBits), t(kOracleBits), r(kOracleBits);
  value(x.v);
  qs = {1};
  mpz_class prev = 0;
  for (int k = 1; k <= N + 1; ++k) {
    mpz_class next = a(k) * qs.back() + prev;
    prev = qs.back();
    qs.push_back(next);
  }
  bool ok = true;
  for (int n = 1; n <= N; ++n) {
    mpfr_mul_z(t.v, x.v, qs[n].get_mpz_t(), MPFR_RNDN);
    mpfr_rint(r.v, t.v, MPFR_RNDN);
    mpfr_sub(t.v, t.v, r.v, MPFR_RNDN);
    mpfr_abs(t.v, t.v, MPFR_RNDN);
    mpz_class s = qs[n] + qs[n + 1];
    mpfr_mul_z(r.v, t.v, s.get_mpz_t(), MPFR_RNDN);
    ok = ok && mpfr_cmp_ui(r.v, 1) > 0;
    mpfr_mul_z(r.v, t.v, qs[n + 1].get_mpz_t(), MPFR_RNDN);
    ok = ok && mpfr_cmp_ui(r.v, 1) <= 0;
  }
  return ok;
}

// The library's theta with its error bound at 256 bits, compared strictly.
bool library_theta_bounds(const RotationNumber& alpha, int N, const std::vector<mpz_class>& oracle_q) {
  if (alpha.size() < static_cast<std::size_t>(N) + 2) return false;
  bool ok = true;
  const int p = alpha.precision_bits();
  for (int n = 1; n <= N; ++n) {
    const Convergent& c = alpha.at(n);
    ok = ok && c.q == oracle_q[n] && alpha.q(n + 1) == oracle_q[n + 1] && c.resolved;
    Real lo = Real(1L, p) / Real(mpz_class(c.q + alpha.q(n + 1)), p, MPFR_RNDD);
    Real hi = Real(1L, p) / Real(alpha.q(n + 1), p, MPFR_RNDU);
    ok = ok && lo < c.theta - c.theta_err && c.theta + c.theta_err <= hi;
  }
  return ok;
}

void criterion1() {
  auto t0 = Clock::now();
  const int N = 25;
  bool ok = true;
  std::vector<mpz_class> qs;
  ok = oracle_theta_bounds([](int) { return 1L; }, golden_value, N, qs) && ok;
  ok = library_theta_bounds(RotationNumber(PartialQuotients::periodic({0}, {1}), 256), N, qs) && ok;
  ok = oracle_theta_bounds([](int) { return 2L; }, silver_value, N, qs) && ok;
  ok = library_theta_bounds(RotationNumber(PartialQuotients::periodic({0}, {2}), 256), N, qs) && ok;
  auto euler_a = [](int k) { return k % 3 == 2 ? 2L * (k + 1) / 3 : 1L; };
  ok = oracle_theta_bounds(euler_a, euler_value, N, qs) && ok;
  ok = library_theta_bounds(RotationNumber(PartialQuotients::euler(), 256), N, qs) && ok;
  double dt = seconds_since(t0);
  report(1, ok && dt < 1.0, "golden, [0;2,2,...], e-2; 1 <= n <= 25 at 256 bits; " + f("%.3f s", dt));
}

void criterion2() {
  auto t0 = Clock::now();
  RotationNumber g(PartialQuotients::periodic({0}, {1}));
  const long Q = 100000;
  // Brute force at 128 bits, independent of the library.
  MpfrNumber x(128), t(128), r(128);
  golden_value(x.v);
  std::vector<long> found;
  for (long q = 1; q <= Q; ++q) {
    mpfr_mul_si(t.v, x.v, q, MPFR_RNDN);
    mpfr_rint(r.v, t.v, MPFR_RNDN);
    mpfr_sub(t.v, t.v, r.v, MPFR_RNDN);
    mpfr_abs(t.v, t.v, MPFR_RNDN);
    mpfr_mul_si(t.v, t.v, 2 * q, MPFR_RNDN);
    if (mpfr_cmp_ui(t.v, 1) < 0) found.push_back(q);
  }
  std::vector<long> fib;
  for (long a = 1, b = 2; a <= Q; std::swap(a, b), b += a) fib.push_back(a);
  bool ok = found == fib;
  GoodReturns lib = good_returns(g, Q);
  std::vector<long> lq;
  for (const auto& x : lib.items) lq.push_back(x.q.get_si());
  ok = ok && lq == found;
  for (long q : found) {
    GoodReturn fr = factor_over_best_returns(g, q);
    ok = ok && fr.l == 1 && fr.l_bound_ok && g.q(fr.n) == q;
  }
  double dt = seconds_since(t0);
  report(2, ok && dt < 5.0,
         std::to_string(found.size()) + " good returns up to 1e5, all Fibonacci with l = 1; " + f("%.3f s", dt));
}

void criterion3() {
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> U(-8.0, 8.0);
  const double slack = 1e-12;
  double worst = -1.0;
  bool ok = true;
  for (int i = 0; i < 10000; ++i) {
    double x = U(rng);
    double nx = std::fabs(centered(x - std::floor(x)));
    double lib = std::abs(e2pi(x) - std::complex<double>(1.0, 0.0));
    Real hx(x, 256);
    double hp = 2.0 * std::fabs(sin_pi(hx).to_double());
    for (double v : {lib, hp}) {
      ok = ok && 4.0 * nx <= v + slack && v <= 2.0 * std::numbers::pi * nx + slack;
      worst = std::max({worst, 4.0 * nx - v, v - 2.0 * std::numbers::pi * nx});
    }
  }
  report(3, ok, "10^4 seeded x, worst violation " + f("%.3g", worst) + " (slack 1e-12)");
}

struct Golden {
  RotationNumber alpha{PartialQuotients::periodic({0}, {1})};
  FourierRoof dyadic = FourierRoof::dyadic();
  std::vector<long> ms;
  Golden() {
    for (long m = 1; m <= 100; ++m) ms.push_back(m);
    for (int n = 5; n <= 12; ++n) ms.push_back(alpha.q(n).get_si());
  }
};

void criterion4(const Golden& g) {
  auto t0 = Clock::now();
  Spectrum s = spectrum_of(g.dyadic, g.alpha, 64, 0);
  s.tail_k2 = 0.0;
  s.tail_far = 0.0;
  double worst = 0.0;
  for (long m : g.ms) {
    SumEvaluation ev = birkhoff_fourier(s, g.alpha, m, 256);
    for (long j = 0; j < 256; ++j)
      worst = std::max(worst, std::fabs(ev.values[j] - birkhoff_direct(g.dyadic, g.alpha, m, j / 256.0, 64)));
  }
  report(4, worst <= 1e-9, "max |closed form - direct| = " + f("%.3g", worst) + " over 108 m x 256 points; " +
                               f("%.1f s", seconds_since(t0)));
}

void criterion5(const Golden& g) {
  MpfrNumber x(kOracleBits), w(kOracleBits);
  golden_value(x.v);
  bool ok = true;
  long count = 0;
  double worst_rel = 0.0;
  for (long m : g.ms) {
    for (long k = 1; k <= 64; ++k) {
      KernelValue kv = birkhoff_kernel(g.alpha, m, k);
      double r = oracle_norm_log2(x.v, mpz_class(m * k), w.v) - oracle_norm_log2(x.v, mpz_class(k), w.v);
      // |e(mk x) - 1| / |e(k x) - 1| = |sin(pi mk x)| / |sin(pi k x)| at oracle precision
      MpfrNumber a(kOracleBits), b(kOracleBits), pi(kOracleBits);
      mpfr_const_pi(pi.v, MPFR_RNDN);
      mpfr_mul_si(a.v, x.v, m * k, MPFR_RNDN);
      mpfr_frac(a.v, a.v, MPFR_RNDN);
      mpfr_mul(a.v, a.v, pi.v, MPFR_RNDN);
      mpfr_sin(a.v, a.v, MPFR_RNDN);
      mpfr_mul_si(b.v, x.v, k, MPFR_RNDN);
      mpfr_frac(b.v, b.v, MPFR_RNDN);
      mpfr_mul(b.v, b.v, pi.v, MPFR_RNDN);
      mpfr_sin(b.v, b.v, MPFR_RNDN);
      mpfr_div(a.v, a.v, b.v, MPFR_RNDN);
      mpfr_abs(a.v, a.v, MPFR_RNDN);
      double K = std::log2(mpfr_get_d(a.v, MPFR_RNDN));
      ok = ok && K > r - 1.0 && K < r + 1.0 && kv.sandwich_ok;
      worst_rel = std::max(worst_rel, std::fabs(std::exp2(kv.K.log2abs - K) - 1.0));
      ++count;
    }
  }
  ok = ok && worst_rel < 1e-9;
  report(5, ok, std::to_string(count) + " kernels strictly inside (1/2, 2) x ||mk alpha||/||k alpha||; library vs oracle |K| rel " +
                    f("%.2g", worst_rel));
}

// Frozen from the first oracle run: integral of ||S_{q_n} phi|| along m_n = q_n, n = 1..13, lambda = 1.
const double kGoldenIntegrals[13] = {0.3101029441328249,  0.20605455034851344, 0.22982540256123793,
                                     0.32902144136279315, 0.2997441399880166,  0.19204381184144223,
                                     0.12026439651669033, 0.07470539552104158, 0.046260289550090664,
                                     0.02861168726604458, 0.017687990721162058, 0.010932969864736939,
                                     0.006757226104229432};

void criterion6(const Golden& g) {
  DichotomyVerdict v = classify(g.dyadic, g.alpha, 1024);
  TransferCoefficients t = formal_transfer(g.dyadic, g.alpha, 128);
  double p64 = -1, p128 = -1;
  for (const auto& c : t.checkpoints) {
    if (c.H == 64) p64 = c.partial;
    if (c.H == 128) p128 = c.partial;
  }
  const double inc = p128 - p64;
  Spectrum full = spectrum_of(g.dyadic, g.alpha, 64, 1 << 16);
  BirkhoffPlan rt = make_return_time_plan(g.alpha, 1, 13);
  std::vector<CriterionValue> vals = criterion_integrals(rt, full, g.alpha, 1.0, QuadratureSettings{});
  bool below = false, pinned = vals.size() == 13;
  double i12 = 1.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i].n <= 12 && vals[i].integral < 0.02) below = true;
    if (vals[i].n == 12) i12 = vals[i].integral;
    if (i < 13) pinned = pinned && std::fabs(vals[i].integral - kGoldenIntegrals[i]) <= 1e-6;
  }
  bool ok = v.outcome == Outcome::DiscreteL2Conjugate && p64 >= 0 && p128 >= 0 && inc < 1e-6 && below && pinned;
  report(6, ok, std::string(outcome_name(v.outcome)) + "; increment 64->128 = " + f("%.3g", inc) + "; I_12 = " +
                    f("%.5f", i12) + (pinned ? "; pinned values match" : "; pinned values differ"));
}

struct Liouville {
  RotationNumber alpha = make_liouville_alpha(PartialQuotients::pow2_growth({0}));
  FourierRoof dyadic = FourierRoof::dyadic();
  DichotomyVerdict verdict;
  BirkhoffPlan plan;
  ReducedRoof rM;
  double lambda_min = 0;
  std::vector<double> lambdas;
};

// Frozen from the first oracle run at lambda = 2 along the single-frequency plan.
const double kLiouvilleIntegrals[4] = {0.23369381410498305, 0.23441294212153324, 0.25300621909531235,
                                       0.2502192552416731};

void criterion7(Liouville& L) {
  L.verdict = classify(L.dyadic, L.alpha, 65536);
  bool wm = L.verdict.outcome == Outcome::WeakMixingSingleFrequency ||
            L.verdict.outcome == Outcome::WeakMixingMultiFrequency;
  if (L.verdict.outcome != Outcome::WeakMixingSingleFrequency) {
    report(7, false, std::string("classified ") + outcome_name(L.verdict.outcome));
    return;
  }
  L.plan = make_single_frequency_plan(L.alpha, L.verdict, 0);
  L.rM = reduce_to_M(L.dyadic, L.alpha, 65536);
  Spectrum reduced = spectrum_of(L.rM);
  for (const auto& e : L.plan.entries) {
    RangeMeasure m = range_derivative_measure(e, multiples_of(reduced, e.q), L.alpha, 1.0, L.verdict.hyp.h2.K,
                                              L.verdict.hyp.h3.K);
    L.lambda_min = std::max(L.lambda_min, 4.0 / m.R);
  }
  L.lambdas = lambda_grid(L.lambda_min, 1.0);
  Spectrum full = spectrum_of(L.dyadic, L.alpha, 64, 1 << 16);
  CertificateSettings cs;
  cs.lambda_min = L.lambda_min;
  Certificate cert = weak_mixing_certificate(L.plan, L.lambdas, std::vector<Spectrum>(L.lambdas.size(), full), L.alpha, cs);
  double worst = 1.0;
  bool pinned = false;
  for (const auto& lo : cert.lambdas) {
    if (!lo.above_threshold) continue;
    for (const auto& v : lo.values) worst = std::min(worst, v.integral);
    if (lo.lambda == 2.0) {
      pinned = lo.values.size() == 4;
      for (std::size_t i = 0; pinned && i < 4; ++i)
        pinned = std::fabs(lo.values[i].integral - kLiouvilleIntegrals[i]) <= 1e-6;
    }
  }
  bool ok = wm && cert.status == "PASS" && worst >= 0.05 && L.plan.entries.size() == 4 && pinned;
  report(7, ok, std::string(outcome_name(L.verdict.outcome)) + "; " + std::to_string(L.plan.entries.size()) +
                    " plan entries; " + std::to_string(L.lambdas.size()) + " lambdas from " + f("%.4f", L.lambda_min) +
                    "; min integral " + f("%.4f", worst) + (pinned ? "; pinned values match" : "; pinned values differ"));
}

void criteria8and9(const Liouville& L) {
  if (L.plan.entries.empty()) {
    report(8, false, "no plan");
    report(9, false, "no plan");
    return;
  }
  const double K1 = L.verdict.hyp.h2.K, K2 = L.verdict.hyp.h3.K;
  const double bound = (1.0 - 4.0 * K1) / (8.0 * (1.0 + K2));
  const PlanEntry& last = L.plan.entries.back();
  bool ok8 = true, ok9 = true;
  int tested = 0;
  double min_mu = 1.0, max_sup = 0.0;
  for (double lam : L.lambdas) {
    LambdaRepresentative rep = lambda_representative(L.rM, lam);
    for (const auto& e : L.plan.entries) {
      ApproximationCheck c = approximation_check(e, rep, L.alpha);
      ok9 = ok9 && c.ok && c.grid_sup < 0.125;
      max_sup = std::max(max_sup, c.grid_sup);
    }
    RangeMeasure m = range_derivative_measure(last, multiples_of(rep.spectrum, last.q), L.alpha, lam, K1, K2);
    if (m.below_threshold) continue;
    ++tested;
    ok8 = ok8 && m.measure > bound;
    min_mu = std::min(min_mu, m.measure);
  }
  report(8, ok8 && tested > 0, "n = " + std::to_string(last.n) + ", " + std::to_string(tested) +
                                   " lambdas above threshold; min measure " + f("%.4f", min_mu) + " > bound " +
                                   f("%.5f", bound));
  report(9, ok9, "max sup |lambda S phi_lambda - lambda S phi_n| = " + f("%.3g", max_sup) + " < 1/8");
}

// Test-side sampler for X = sum c cos(2 pi 2^k y + pi/2).
double oracle_ks(int u, long samples, std::uint64_t seed) {
  // y = Y / 2^128 so frac(2^k y) = (Y << k) / 2^128 stays exact for u <= 64.
  using u128 = unsigned __int128;
  std::mt19937_64 rng(seed);
  const double c = std::sqrt(2.0 / u);
  std::vector<double> xs(static_cast<std::size_t>(samples));
  for (auto& x : xs) {
    u128 Y = (static_cast<u128>(rng()) << 64) | rng();
    double s = 0.0;
    for (int k = 1; k <= u; ++k) {
      double ph = std::ldexp(static_cast<double>(static_cast<std::uint64_t>((Y << k) >> 64)), -64);
      s -= c * std::sin(2.0 * std::numbers::pi * ph);
    }
    x = s;
  }
  std::sort(xs.begin(), xs.end());
  double D = 0.0, n = static_cast<double>(samples);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double F = 0.5 * (1.0 + std::erf(xs[i] / std::numbers::sqrt2));
    D = std::max({D, (i + 1) / n - F, F - i / n});
  }
  return D;
}

void criterion10() {
  auto t0 = Clock::now();
  const long S = 100000;
  std::vector<double> ks;
  bool ok = true, trend = true;
  double prev = 1.0, ks64 = 1.0, ch64 = 1.0, oracle64 = 1.0;
  std::vector<double> ts;
  for (int i = -30; i <= 30; ++i) ts.push_back(0.1 * i);
  for (int u : {8, 16, 32, 64, 128}) {
    LacunaryRow row = synthetic_row(u);
    EmpiricalDistribution d = sample_row(row, S, 7 + static_cast<std::uint64_t>(u));
    double D = ks_against_normal(d, 0.0, 1.0);
    trend = trend && D <= prev + 0.01;
    prev = std::min(prev, D);
    ks.push_back(D);
    if (u == 64) {
      ks64 = D;
      ch64 = characteristic_function(row, ts, 1.0, S, 99).sup_distance;
      oracle64 = oracle_ks(64, S, 2024);
    }
  }
  double dt = seconds_since(t0);
  ok = ks64 <= 0.05 && oracle64 <= 0.05 && std::fabs(ks64 - oracle64) <= 0.01 && trend && ch64 <= 0.02 && dt < 30.0;
  std::string detail = "KS u=8..128:";
  for (double D : ks) detail += f(" %.4f", D);
  detail += "; oracle KS(64) " + f("%.4f", oracle64) + "; char sup(64) " + f("%.4f", ch64) + "; " + f("%.1f s", dt);
  report(10, ok, detail);
}

std::complex<double> oracle_cosine_product(const LacunaryRow& row, double t) {
  mpz_class total = 0;
  for (const auto& q : row.q) total += q;
  long G = 16;
  while (G <= 2 * total.get_si()) G *= 2;
  std::complex<double> s = 0.0;
  for (long j = 0; j < G; ++j) {
    double y = static_cast<double>(j) / G;
    std::complex<double> p = 1.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      double ph = std::fmod(row.q[k].get_d() * y, 1.0);
      p *= 1.0 + std::complex<double>(0.0, t * row.c[k]) * std::cos(2.0 * std::numbers::pi * ph + row.r[k]);
    }
    s += p;
  }
  return s / static_cast<double>(G);
}

void criterion11() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0, worst_oracle = 0.0;
  int rows = 0;
  for (int u = 1; u <= 12; ++u) {
    std::vector<LacunaryRow> tests{synthetic_row(u)};
    LacunaryRow r;
    long q = 1;
    for (int k = 0; k < u; ++k) {
      q = 2 * q + static_cast<long>(3 * U(rng));
      r.q.push_back(q);
      r.c.push_back(0.2 + U(rng));
      r.r.push_back(2.0 * std::numbers::pi * U(rng));
    }
    tests.push_back(r);
    for (const auto& row : tests) {
      ++rows;
      for (double t : {0.5, 1.0, 2.0}) {
        std::complex<double> v = cosine_product_integral(row, t);
        worst = std::max(worst, std::abs(v - 1.0));
        worst_oracle = std::max(worst_oracle, std::abs(v - oracle_cosine_product(row, t)));
      }
    }
  }
  LacunaryRow bad;
  bad.q = {1, 2, 3};
  bad.c = {1.0, 1.0, 1.0};
  bad.r = {0.0, 0.0, 0.0};
  double dev = 1.0;
  for (double t : {0.5, 1.0, 2.0}) dev = std::min(dev, std::abs(cosine_product_integral(bad, t) - 1.0));
  bool ok = worst <= 1e-6 && worst_oracle <= 1e-9 && dev > 1e-3;
  report(11, ok, std::to_string(rows) + " lacunary rows: max |I - 1| = " + f("%.3g", worst) +
                     "; |library - quadrature| " + f("%.2g", worst_oracle) + "; q = 1,2,3 deviates by " + f("%.4f", dev));
}

// Frozen from the first oracle run.
const double kDelta[3] = {0.05911003992797602, 0.0002381054444975109, 6.814247076211526e-60};

void criterion12() {
  auto t0 = Clock::now();
  RotationNumber mp(PartialQuotients::power_growth({0, 2}, 3, 0), 1 << 17);
  FourierRoof res = FourierRoof::resonant(mp, 1.0, {1.0, 2.2214, 1.5708, 1.5708, 1.2825, 1.2825, 1.2825});
  mpz_class H = mpz_class(1) << 20000;
  DichotomyVerdict v = classify(res, mp, H);
  ReducedRoof r1 = reduce_to_M(res, mp, H);
  ReducedRoof r2 = reduce_to_best_returns(r1, res, mp, v.hyp.h1);
  BirkhoffPlan plan = make_multi_frequency_plan(mp, r2, 1.0);
  std::vector<DeltaValue> d = delta_n(plan, spectrum_of(r2), mp);
  bool ok = v.outcome == Outcome::WeakMixingMultiFrequency && d.size() >= 2;
  bool pinned = d.size() == 3;
  for (std::size_t i = 1; i < d.size(); ++i) ok = ok && d[i].grid_sup < d[i - 1].grid_sup;
  for (std::size_t i = 0; pinned && i < 3; ++i) pinned = std::fabs(d[i].grid_sup / kDelta[i] - 1.0) <= 1e-6;
  std::string detail = std::to_string(d.size()) + " windows, Delta_n:";
  for (const auto& x : d) detail += f(" %.4g", x.grid_sup);
  report(12, ok && pinned, detail + (pinned ? "; pinned values match; " : "; pinned values differ; ") +
                               f("%.1f s", seconds_since(t0)));
}

// Dyadic H2/H3 constants from direct sums at the reported m0.
double dyadic_ratio(long m, bool weighted) {
  double s = 0.0;
  for (long l = 2; l <= kInnerMultiple; ++l) s += (weighted ? static_cast<double>(l) : 1.0) * std::exp2(-(l - 1.0) * m);
  return s;
}

void criterion13() {
  HypothesisReport d = check_hypotheses(FourierRoof::dyadic(), 64);
  bool dy = d.h1.verdict == Verdict::Pass && d.h2.verdict == Verdict::Pass && d.h3.verdict == Verdict::Pass &&
            d.h2.m0 <= 3 && std::fabs(d.h2.K - dyadic_ratio(d.h2.m0, false)) < 1e-12 &&
            std::fabs(d.h3.K - dyadic_ratio(d.h3.m0, true)) < 1e-12;
  HypothesisReport p = check_hypotheses(FourierRoof::prime(1.0, 0.1, 5.0), 64);
  bool pr = p.h1.verdict == Verdict::Pass && p.h2.verdict == Verdict::Pass && p.h3.verdict == Verdict::Pass;
  FourierRoof v1 = FourierRoof::table(1.0, std::vector<std::pair<long, std::complex<double>>>{{1, {0.1, 0.0}}, {6, {0.1, 0.0}}}, "h1_violator");
  H1Report h1 = check_H1(v1, 64);
  std::vector<std::pair<long, std::complex<double>>> e2;
  for (long m = 1; m <= 200; ++m) e2.emplace_back(m, m % 2 ? std::exp(-2.5 * m) : std::exp(-1.0 * m));
  H23Report h2 = check_H2(FourierRoof::table(2.0, e2, "h2_violator"), 64);
  // The witness must violate the inner sum directly.
  auto h2_direct = [&](long m) {
    double cm = m % 2 ? std::exp(-2.5 * m) : std::exp(-1.0 * m), s = 0.0;
    for (long l = 2; l <= kInnerMultiple && l * m <= 200; ++l) s += (l * m % 2 ? std::exp(-2.5 * l * m) : std::exp(-1.0 * l * m)) / cm;
    return s;
  };
  bool viol = h1.verdict == Verdict::Fail && h1.witness == 2 && h2.verdict == Verdict::Fail && h2.witness > 0 &&
              h2_direct(h2.witness) >= 0.25;
  report(13, dy && pr && viol,
         "dyadic pass (m0 = " + std::to_string(d.h2.m0) + ", K1 = " + f("%.6f", d.h2.K) + ", K2 = " + f("%.6f", d.h3.K) +
             "); prime " + (pr ? "pass" : "not pass") + "; H1 violator witness m = " + std::to_string(h1.witness) +
             "; H2 violator witness m = " + std::to_string(h2.witness));
}

void guarded(int id, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  Golden g;
  guarded(4, [&] { criterion4(g); });
  guarded(5, [&] { criterion5(g); });
  guarded(6, [&] { criterion6(g); });
  Liouville L;
  guarded(7, [&] { criterion7(L); });
  guarded(8, [&] { criteria8and9(L); });
  guarded(10, criterion10);
  guarded(11, criterion11);
  guarded(12, criterion12);
  guarded(13, criterion13);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
