#include "sfw/roof.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfw/errors.hpp"
#include "sfw/phase.hpp"

namespace sfw {

namespace {

constexpr double kLog2e = 1.4426950408889634;

bool is_prime(const mpz_class& m) { return m >= 2 && mpz_probab_prime_p(m.get_mpz_t(), 40) > 0; }

// sum_{m > H} m^k A e^{-kappa m}, by explicit terms until the ratio of
// consecutive terms drops below 0.9, then a geometric bound.
double envelope_tail(double A, double kappa, int k, long H) {
  if (A == 0.0) return 0.0;
  double sum = 0.0;
  for (long m = H + 1;; ++m) {
    double md = static_cast<double>(m);
    double lt = std::log(A) + k * std::log(md) - kappa * md;
    double term = std::exp(lt);
    double rho = std::pow((md + 1.0) / md, k) * std::exp(-kappa);
    if (rho < 0.9) return sum + term / (1.0 - rho);
    sum += term;
    if (m - H > 100000000) return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

std::complex<double> ExtCoeff::to_complex() const {
  if (is_zero()) return {0.0, 0.0};
  return std::polar(std::exp2(log2abs), arg);
}

ExtCoeff ExtCoeff::from_complex(std::complex<double> c) {
  ExtCoeff e;
  double a = std::abs(c);
  if (a == 0.0) return e;
  e.log2abs = std::log2(a);
  e.arg = std::arg(c);
  return e;
}

namespace {

void require_positive(const FourierRoof& r) {
  if (!(r.c0() > 0.0)) throw PreconditionError("roof requires c_0 > 0");
  PositivityCertificate pc = certify_positive(r);
  if (!pc.positive)
    throw PreconditionError("roof positivity certificate failed (lower bound " + std::to_string(pc.lower_bound) + ")");
}

}  // namespace

FourierRoof FourierRoof::constant(double c0) {
  FourierRoof r;
  r.kind_ = Kind::Constant;
  r.name_ = "constant";
  r.c0_ = c0;
  if (!(c0 > 0.0)) throw PreconditionError("roof requires c_0 > 0");
  return r;
}

FourierRoof FourierRoof::dyadic() {
  FourierRoof r;
  r.kind_ = Kind::Dyadic;
  r.name_ = "dyadic";
  r.c0_ = 1.0;
  return r;
}

FourierRoof FourierRoof::prime(double c0, double scale, double exponent) {
  if (!(exponent > 4.0)) throw PreconditionError("prime roof needs exponent > 4 for the C^3 proxy");
  FourierRoof r;
  r.kind_ = Kind::Prime;
  r.name_ = "prime";
  r.c0_ = c0;
  r.params_.scale = scale;
  r.params_.exponent = exponent;
  require_positive(r);
  return r;
}

FourierRoof FourierRoof::expdecay(double c0, double C1, double C2, double k1, double k2, const std::string& profile) {
  if (!(C1 > 0.0 && C1 <= C2)) throw PreconditionError("expdecay requires 0 < C1 <= C2");
  if (!(k2 > 0.0 && k2 <= k1 && k1 < 2.0 * k2)) throw PreconditionError("expdecay requires 0 < k2 <= k1 < 2 k2");
  if (profile != "lower" && profile != "alternating") throw PreconditionError("unknown expdecay profile: " + profile);
  FourierRoof r;
  r.kind_ = Kind::ExpDecay;
  r.name_ = "expdecay";
  r.c0_ = c0;
  r.params_.C1 = C1;
  r.params_.C2 = C2;
  r.params_.k1 = k1;
  r.params_.k2 = k2;
  r.params_.profile = profile;
  require_positive(r);
  return r;
}

FourierRoof FourierRoof::table(double c0, std::vector<TableEntry> entries, const std::string& name,
                               bool check_positive) {
  std::vector<TableEntry> pos;
  std::vector<TableEntry> neg;
  for (auto& e : entries) {
    if (e.m == 0) throw PreconditionError("table entries must have m != 0; c_0 is given separately");
    if (e.m > 0) {
      pos.push_back(std::move(e));
    } else {
      e.m = -e.m;
      e.c.arg = -e.c.arg;
      neg.push_back(std::move(e));
    }
  }
  auto by_m = [](const TableEntry& a, const TableEntry& b) { return a.m < b.m; };
  std::sort(pos.begin(), pos.end(), by_m);
  std::sort(neg.begin(), neg.end(), by_m);
  for (std::size_t i = 1; i < pos.size(); ++i)
    if (pos[i].m == pos[i - 1].m) throw PreconditionError("duplicate table frequency " + pos[i].m.get_str());
  for (auto& e : neg) {
    auto it = std::lower_bound(pos.begin(), pos.end(), e, by_m);
    if (it != pos.end() && it->m == e.m) {
      std::complex<double> a = it->c.to_complex(), b = e.c.to_complex();
      double scale = std::max(std::abs(a), std::abs(b));
      bool same_zero = it->c.is_zero() && e.c.is_zero();
      bool match = same_zero || (std::fabs(it->c.log2abs - e.c.log2abs) < 1e-12 &&
                                 std::abs(std::polar(1.0, it->c.arg) - std::polar(1.0, e.c.arg)) < 1e-12) ||
                   (scale > 0 && std::abs(a - b) <= 1e-12 * scale);
      if (!match) throw PreconditionError("non-Hermitian coefficients at m = " + e.m.get_str());
    } else {
      pos.insert(it, std::move(e));
    }
  }
  pos.erase(std::remove_if(pos.begin(), pos.end(), [](const TableEntry& e) { return e.c.is_zero(); }), pos.end());
  FourierRoof r;
  r.kind_ = Kind::Table;
  r.name_ = name;
  r.c0_ = c0;
  r.entries_ = std::move(pos);
  if (check_positive) require_positive(r);
  return r;
}

FourierRoof FourierRoof::table(double c0, const std::vector<std::pair<long, std::complex<double>>>& entries,
                               const std::string& name) {
  std::vector<TableEntry> t;
  t.reserve(entries.size());
  for (const auto& [m, c] : entries) t.push_back({mpz_class(m), ExtCoeff::from_complex(c)});
  return table(c0, std::move(t), name);
}

FourierRoof FourierRoof::resonant(const RotationNumber& alpha, double c0, std::vector<double> rho, int k_start) {
  if (rho.empty()) throw PreconditionError("resonant roof needs a nonempty rho list");
  if (k_start < 1) throw PreconditionError("resonant roof needs k_start >= 1");
  std::vector<TableEntry> t;
  const int last = k_start + static_cast<int>(rho.size()) - 1;
  for (std::size_t k = static_cast<std::size_t>(k_start); k < alpha.size(); ++k) {
    const Convergent& c = alpha.at(k);
    if (!c.resolved) break;
    if (k > 0 && alpha.q(k) == alpha.q(k - 1)) continue;
    int ki = static_cast<int>(k);
    double r = ki <= last ? rho[static_cast<std::size_t>(ki - k_start)]
                          : rho.back() * std::sqrt(static_cast<double>(last) / static_cast<double>(ki));
    ExtCoeff e;
    e.log2abs = std::log2(r) + c.theta.log2_abs();
    t.push_back({c.q, e});
  }
  FourierRoof r = table(c0, std::move(t), "resonant");
  r.params_.rho = std::move(rho);
  r.params_.k_start = k_start;
  return r;
}

bool FourierRoof::is_constant() const { return kind_ == Kind::Constant || (kind_ == Kind::Table && entries_.empty()); }

ExtCoeff FourierRoof::ext_coeff(const mpz_class& m) const {
  ExtCoeff e;
  if (m == 0) {
    e.log2abs = std::log2(c0_);
    return e;
  }
  mpz_class am = abs(m);
  bool neg = m < 0;
  switch (kind_) {
    case Kind::Constant:
      return e;
    case Kind::Dyadic:
      e.log2abs = -am.get_d();
      if (!am.fits_slong_p()) e.log2abs = -std::exp2(log2_mpz(am));
      return e;
    case Kind::Prime:
      if (!is_prime(am) || params_.scale == 0.0) return e;
      e.log2abs = std::log2(std::fabs(params_.scale)) - params_.exponent * log2_mpz(am);
      if (params_.scale < 0) e.arg = std::numbers::pi;
      return e;
    case Kind::ExpDecay: {
      double md = am.fits_slong_p() ? am.get_d() : std::exp2(log2_mpz(am));
      bool odd = mpz_odd_p(am.get_mpz_t()) != 0;
      bool alt = params_.profile == "alternating";
      double C = alt && !odd ? params_.C2 : params_.C1;
      double k = alt && !odd ? params_.k2 : params_.k1;
      e.log2abs = std::log2(C) - k * md * kLog2e;
      return e;
    }
    case Kind::Table: {
      auto it = std::lower_bound(entries_.begin(), entries_.end(), am,
                                 [](const TableEntry& a, const mpz_class& b) { return a.m < b; });
      if (it == entries_.end() || it->m != am) return e;
      e = it->c;
      if (neg) e.arg = -e.arg;
      return e;
    }
  }
  return e;
}

ExtCoeff FourierRoof::ext_coeff(long m) const {
  if (m == 0) {
    ExtCoeff e;
    e.log2abs = std::log2(c0_);
    return e;
  }
  long am = m < 0 ? -m : m;
  switch (kind_) {
    case Kind::Constant:
      return {};
    case Kind::Dyadic: {
      ExtCoeff e;
      e.log2abs = -static_cast<double>(am);
      return e;
    }
    case Kind::ExpDecay: {
      ExtCoeff e;
      bool alt = params_.profile == "alternating";
      bool odd = (am & 1) != 0;
      double C = alt && !odd ? params_.C2 : params_.C1;
      double k = alt && !odd ? params_.k2 : params_.k1;
      e.log2abs = std::log2(C) - k * static_cast<double>(am) * kLog2e;
      return e;
    }
    default:
      return ext_coeff(mpz_class(m));
  }
}

std::complex<double> FourierRoof::coeff(long m) const {
  if (m == 0) return {c0_, 0.0};
  return ext_coeff(m).to_complex();
}

mpz_class FourierRoof::support_horizon() const {
  if (kind_ == Kind::Constant) return 0;
  if (kind_ == Kind::Table) return entries_.empty() ? mpz_class(0) : entries_.back().m;
  return mpz_class(std::numeric_limits<long>::max());
}

double FourierRoof::moment_tail(int k, long H) const {
  if (H < 0) H = 0;
  switch (kind_) {
    case Kind::Constant:
      return 0.0;
    case Kind::Dyadic:
      return envelope_tail(1.0, std::numbers::ln2, k, H);
    case Kind::ExpDecay:
      if (params_.profile == "alternating")
        return envelope_tail(std::max(params_.C1, params_.C2), std::min(params_.k1, params_.k2), k, H);
      return envelope_tail(params_.C1, params_.k1, k, H);
    case Kind::Prime: {
      double t = params_.exponent - k;
      if (t <= 1.0) return std::numeric_limits<double>::infinity();
      double s = std::fabs(params_.scale);
      if (H == 0) return s * (1.0 + 1.0 / (t - 1.0));
      return s * std::pow(static_cast<double>(H), 1.0 - t) / (t - 1.0);
    }
    case Kind::Table: {
      double sum = 0.0;
      mpz_class h(H);
      for (auto it = std::upper_bound(entries_.begin(), entries_.end(), h,
                                      [](const mpz_class& a, const TableEntry& b) { return a < b.m; });
           it != entries_.end(); ++it)
        sum += std::exp2(it->c.log2abs + k * log2_mpz(it->m));
      return sum;
    }
  }
  return 0.0;
}

long FourierRoof::dense_horizon(double eps, long cap) const {
  if (2.0 * moment_tail(0, 0) <= eps) return 0;
  long hi = 1;
  while (hi < cap && 2.0 * moment_tail(0, hi) > eps) hi *= 2;
  if (hi >= cap) return cap;
  long lo = hi / 2;
  while (hi - lo > 1) {
    long mid = (lo + hi) / 2;
    if (2.0 * moment_tail(0, mid) <= eps)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::vector<mpz_class> FourierRoof::support_between(const mpz_class& lo, const mpz_class& hi) const {
  std::vector<mpz_class> out;
  for (const auto& e : entries_)
    if (e.m > lo && e.m <= hi) out.push_back(e.m);
  return out;
}

double evaluate(const FourierRoof& phi, double x, long horizon) {
  if (horizon < 0) throw PreconditionError("horizon must be >= 0");
  if (phi.is_table() && mpz_class(horizon) > phi.support_horizon() && !phi.entries().empty())
    throw PreconditionError("horizon exceeds table support");
  std::complex<double> s(phi.c0(), 0.0);
  auto add = [&](long m, std::complex<double> cp, std::complex<double> cn) {
    double f = frac_mul(m, x);
    std::complex<double> e = e2pi(f);
    s += cp * e + cn * std::conj(e);
  };
  if (phi.is_table()) {
    for (const auto& e : phi.entries()) {
      if (e.m > horizon) break;
      long m = e.m.get_si();
      add(m, phi.coeff(m), phi.coeff(-m));
    }
  } else if (phi.kind() != FourierRoof::Kind::Constant) {
    for (long m = 1; m <= horizon; ++m) add(m, phi.coeff(m), phi.coeff(-m));
  }
  if (std::fabs(s.imag()) > 1e-12) throw PreconditionError("non-Hermitian coefficients");
  return s.real();
}

PositivityCertificate certify_positive(const FourierRoof& phi, long grid) {
  PositivityCertificate pc;
  pc.grid = grid;
  const long G = grid;
  std::vector<double> ct(static_cast<std::size_t>(G)), st(static_cast<std::size_t>(G));
  for (long j = 0; j < G; ++j) {
    double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(G);
    ct[static_cast<std::size_t>(j)] = std::cos(a);
    st[static_cast<std::size_t>(j)] = std::sin(a);
  }
  std::vector<double> val(static_cast<std::size_t>(G), phi.c0());
  double lip = 0.0;
  auto add = [&](unsigned long mmod, std::complex<double> c) {
    const double re = 2.0 * c.real(), im = 2.0 * c.imag();
    unsigned long idx = 0;
    for (long j = 0; j < G; ++j) {
      val[static_cast<std::size_t>(j)] += re * ct[idx] - im * st[idx];
      idx += mmod;
      if (idx >= static_cast<unsigned long>(G)) idx -= static_cast<unsigned long>(G);
    }
  };
  if (phi.is_table() && phi.entries().size() <= 100000) {
    for (const auto& e : phi.entries()) {
      mpz_class r = e.m % G;
      std::complex<double> c = e.c.to_complex();
      if (c == 0.0) continue;
      add(r.get_ui(), c);
      lip += 2.0 * std::exp2(e.c.log2abs + log2_mpz(e.m));
    }
    pc.horizon = phi.entries().empty() ? 0 : static_cast<long>(std::min<double>(phi.entries().back().m.get_d(), 9e18));
    pc.tail = 0.0;
  } else if (!phi.is_constant()) {
    long H = phi.dense_horizon(1e-7 * phi.c0(), 1L << 14);
    pc.horizon = H;
    for (long m = 1; m <= H; ++m) {
      std::complex<double> c = phi.coeff(m);
      if (c == 0.0) continue;
      add(static_cast<unsigned long>(m % G), c);
      lip += 2.0 * static_cast<double>(m) * std::abs(c);
    }
    pc.tail = 2.0 * phi.moment_tail(0, H);
    lip += 2.0 * phi.moment_tail(1, H);
  }
  pc.grid_min = *std::min_element(val.begin(), val.end());
  pc.lipschitz_slack = 2.0 * std::numbers::pi * lip / (2.0 * static_cast<double>(G));
  pc.lower_bound = pc.grid_min - pc.tail - pc.lipschitz_slack;
  pc.positive = pc.lower_bound > 0.0;
  return pc;
}

SmoothnessProxy c3_proxy(const FourierRoof& phi, long horizon, double tol) {
  SmoothnessProxy sp;
  sp.horizon = horizon;
  auto term = [&](long m) {
    ExtCoeff e = phi.ext_coeff(m);
    return e.is_zero() ? 0.0 : std::exp2(e.log2abs + 3.0 * std::log2(static_cast<double>(m)));
  };
  for (long m = 1; m <= horizon; ++m) {
    double t = term(m);
    sp.partial += t;
    if (m <= horizon / 2) sp.partial_half += t;
  }
  sp.cauchy = sp.partial - sp.partial_half < tol * std::max(1.0, sp.partial);
  return sp;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Undecided:
      return "undecided";
  }
  return "undecided";
}

namespace {

long clamp_horizon(const FourierRoof& phi, long horizon) {
  if (!phi.is_table()) return horizon;
  mpz_class s = phi.support_horizon();
  if (s < horizon) return std::max<long>(2, s.get_si());
  return horizon;
}

// sum_{l=2}^{64} w_l 2^{p (log2|c_{lm}| - log2|c_m|)}; +inf when c_m = 0 and a multiple is not.
double inner_ratio(const FourierRoof& phi, long m, int power, bool weighted, bool& any_multiple) {
  ExtCoeff cm = phi.ext_coeff(m);
  double s = 0.0;
  any_multiple = false;
  for (long l = 2; l <= kInnerMultiple; ++l) {
    ExtCoeff c = phi.ext_coeff(l * m);
    if (c.is_zero()) continue;
    any_multiple = true;
    if (cm.is_zero()) return std::numeric_limits<double>::infinity();
    double w = weighted ? std::log2(static_cast<double>(l)) : 0.0;
    s += std::exp2(power * (c.log2abs - cm.log2abs) + w);
  }
  return s;
}

}  // namespace

H1Report check_H1(const FourierRoof& phi, long horizon, double tol) {
  if (horizon < 2) throw PreconditionError("check_H1 requires horizon >= 2");
  H1Report r;
  const long H = clamp_horizon(phi, horizon);
  r.horizon = H;
  for (long m = 1; m <= H; ++m) {
    bool any = false;
    double C = inner_ratio(phi, m, 2, false, any);
    ExtCoeff cm = phi.ext_coeff(m);
    if (cm.is_zero()) {
      if (!any) continue;
      if (m == 1) {
        r.m1_exempt = true;
        continue;
      }
      if (r.witness == 0) r.witness = m;
      continue;
    }
    r.C.emplace_back(m, C);
    r.partial_sum += C;
    if (2 * m > H) r.tail_increment += C;
    double rest = 2.0 * phi.moment_tail(0, kInnerMultiple * m);
    double rb = std::exp2(2.0 * (std::log2(rest) - cm.log2abs));
    r.remainder_bound = std::max(r.remainder_bound, std::isfinite(rb) ? rb : 0.0);
  }
  if (r.witness != 0)
    r.verdict = Verdict::Fail;
  else
    r.verdict = r.tail_increment < tol ? Verdict::Pass : Verdict::Undecided;
  return r;
}

namespace {

H23Report check_sums(const FourierRoof& phi, long horizon, bool weighted) {
  if (horizon < 2) throw PreconditionError("hypothesis checks require horizon >= 2");
  H23Report r;
  const long H = clamp_horizon(phi, horizon);
  r.horizon = H;
  std::vector<long> violators;
  for (long m = 1; m <= H; ++m) {
    bool any = false;
    double q = inner_ratio(phi, m, 1, weighted, any);
    ExtCoeff cm = phi.ext_coeff(m);
    if (cm.is_zero() && !any) continue;
    r.ratio.emplace_back(m, q);
    bool bad = weighted ? std::isinf(q) : !(q < 0.25);
    if (bad) violators.push_back(m);
  }
  long v = violators.empty() ? 0 : violators.back();
  bool upper = v * 2 > H;
  bool mid = std::any_of(violators.begin(), violators.end(), [&](long m) { return 4 * m > H && 2 * m <= H; });
  if (upper && mid) {
    r.verdict = Verdict::Fail;
    r.witness = v;
  } else if (upper || (v > 0 && 2 * (v + 1) > H)) {
    r.verdict = Verdict::Undecided;
    r.witness = v;
  } else {
    r.verdict = Verdict::Pass;
  }
  r.m0 = v + 1;
  r.K = 0.0;
  for (const auto& [m, q] : r.ratio)
    if (m >= r.m0) r.K = std::max(r.K, q);
  if (weighted && r.verdict == Verdict::Pass) {
    // Unbounded growth: the top complete dyadic block dominates its predecessor.
    int top = 0;
    while ((2L << (top + 1)) - 1 <= H) ++top;
    auto block_max = [&](int j, long& arg) {
      double b = 0.0;
      for (const auto& [m, q] : r.ratio)
        if (m >= (1L << j) && m < (2L << j) && m >= r.m0 && q > b) {
          b = q;
          arg = m;
        }
      return b;
    };
    if (top >= 2) {
      long arg_top = 0, arg_prev = 0;
      double bt = block_max(top, arg_top), bp = block_max(top - 1, arg_prev);
      if (bt > 0.0 && bt >= 1.5 * bp) {
        r.verdict = Verdict::Fail;
        r.witness = arg_top;
      }
    }
  }
  return r;
}

}  // namespace

H23Report check_H2(const FourierRoof& phi, long horizon) { return check_sums(phi, horizon, false); }

H23Report check_H3(const FourierRoof& phi, long horizon) { return check_sums(phi, horizon, true); }

HypothesisReport check_hypotheses(const FourierRoof& phi, long horizon) {
  HypothesisReport hr;
  hr.horizon = horizon;
  hr.h1 = check_H1(phi, horizon);
  hr.h2 = check_H2(phi, horizon);
  hr.h3 = check_H3(phi, horizon);
  // Both constants are read on the same tail m >= m0.
  if (hr.h2.verdict == Verdict::Pass && hr.h3.verdict == Verdict::Pass && hr.h2.m0 > hr.h3.m0) {
    hr.h3.m0 = hr.h2.m0;
    hr.h3.K = 0.0;
    for (const auto& [m, q] : hr.h3.ratio)
      if (m >= hr.h3.m0) hr.h3.K = std::max(hr.h3.K, q);
  }
  return hr;
}

}  // namespace sfw
