#include "sfw/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sfw/errors.hpp"
#include "sfw/phase.hpp"

namespace sfw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log2 of the squared transfer bound m^2 |c| / 2 for m outside class M.
double non_member_bound_log2(const mpz_class& m, const ExtCoeff& c) { return 2.0 * log2_mpz(m) + c.log2abs - 1.0; }

double sq(double x) { return x * x; }

bool contains(const std::vector<mpz_class>& sorted, const mpz_class& m) {
  return std::binary_search(sorted.begin(), sorted.end(), m);
}

struct MemberIndex {
  std::vector<mpz_class> ms;
  std::vector<MMember> members;
};

MemberIndex member_index(const RotationNumber& alpha, const mpz_class& horizon) {
  MemberIndex idx;
  FrequencyClassM M = class_M(alpha, horizon);
  for (auto& mm : M.members) {
    if (mm.m == 0) continue;
    idx.ms.push_back(mm.m);
    idx.members.push_back(std::move(mm));
  }
  return idx;
}

}  // namespace

TransferEntry transfer_entry(const RotationNumber& alpha, const mpz_class& m, const ExtCoeff& c) {
  TransferEntry t;
  t.m = m;
  t.c = c;
  NormValue r = residue_of_multiple(alpha, m);
  if (r.value.is_zero() || mul_2exp(r.error, 20) >= abs(r.value))
    throw PrecisionExhausted("||m alpha|| at m with " + std::to_string(mpz_sizeinbase(m.get_mpz_t(), 2)) +
                             " bits is not resolved; raise precision_bits");
  t.norm_log2 = r.value.log2_abs();
  t.ratio_log2 = c.log2abs - t.norm_log2;
  if (c.is_zero()) return t;
  // e(x) - 1 = 2i sin(pi x) e(x/2)
  Real s = sin_pi(r.value);
  double x = r.value.to_double();
  t.psi.log2abs = c.log2abs - 1.0 - s.log2_abs();
  double arg = c.arg - std::numbers::pi / 2 - std::numbers::pi * x;
  if (s.sign() < 0) arg += std::numbers::pi;
  t.psi.arg = std::remainder(arg, 2.0 * std::numbers::pi);
  const double slack = 1e-9;
  double lower = c.log2abs - std::log2(2.0 * std::numbers::pi) - t.norm_log2;
  double upper = c.log2abs - 2.0 - t.norm_log2;
  t.sandwich_ok = t.psi.log2abs >= lower - slack && t.psi.log2abs <= upper + slack;
  return t;
}

TransferCoefficients formal_transfer(const FourierRoof& phi, const RotationNumber& alpha, const mpz_class& horizon,
                                     long dense_cap) {
  if (horizon < 1) throw PreconditionError("transfer horizon must be >= 1");
  TransferCoefficients out;
  out.horizon = horizon;
  if (phi.is_table()) {
    for (const auto& e : phi.entries()) {
      if (e.m > horizon) break;
      TransferEntry t = transfer_entry(alpha, e.m, e.c);
      try {
        t.in_M = in_class_M(alpha, e.m);
      } catch (const PrecisionExhausted&) {
        t.in_M = false;
      }
      out.entries.push_back(std::move(t));
    }
    out.dense = horizon.fits_slong_p() ? horizon.get_si() : std::numeric_limits<long>::max();
  } else if (!phi.is_constant()) {
    const long T = horizon < dense_cap ? horizon.get_si() : dense_cap;
    out.dense = T;
    MemberIndex idx = member_index(alpha, horizon);
    // Squared contributions below 2^-120 are bounded instead of computed.
    const double negligible = -60.0;
    for (long m = 1; m <= T; ++m) {
      ExtCoeff c = phi.ext_coeff(m);
      if (c.is_zero()) continue;
      mpz_class z(m);
      bool member = contains(idx.ms, z);
      if (!member && non_member_bound_log2(z, c) < negligible) {
        out.remainder_bound += 2.0 * std::exp2(2.0 * non_member_bound_log2(z, c));
        continue;
      }
      TransferEntry t = transfer_entry(alpha, z, c);
      t.in_M = member;
      out.entries.push_back(std::move(t));
    }
    for (const auto& mm : idx.members) {
      if (mm.m <= T) continue;
      ExtCoeff c = phi.ext_coeff(mm.m);
      if (c.is_zero()) continue;
      TransferEntry t = transfer_entry(alpha, mm.m, c);
      t.in_M = true;
      out.entries.push_back(std::move(t));
    }
    if (horizon > T) out.remainder_bound += 0.5 * sq(phi.moment_tail(2, T));
  }
  for (const auto& t : out.entries) out.sandwich_ok = out.sandwich_ok && t.sandwich_ok;

  mpz_class H = 1;
  std::size_t i = 0;
  double partial = 0.0;
  while (true) {
    mpz_class cut = H < horizon ? H : horizon;
    while (i < out.entries.size() && out.entries[i].m <= cut) {
      if (!out.entries[i].psi.is_zero()) partial += 2.0 * std::exp2(2.0 * out.entries[i].psi.log2abs);
      ++i;
    }
    out.checkpoints.push_back({cut, partial});
    if (cut == horizon) break;
    H *= 2;
  }
  return out;
}

const char* l2_kind_name(L2Result::Kind k) {
  switch (k) {
    case L2Result::Kind::Converged:
      return "converged";
    case L2Result::Kind::Diverging:
      return "diverging";
    case L2Result::Kind::Undecided:
      return "undecided";
  }
  return "undecided";
}

L2Result l2_conjugacy_test(const TransferCoefficients& t, double tolerance, double divergence_floor) {
  L2Result r;
  r.tolerance = tolerance;
  r.divergence_floor = divergence_floor;
  if (t.checkpoints.empty()) return r;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), t.horizon.get_mpz_t());
  const L2Checkpoint* from = &t.checkpoints.front();
  for (const auto& c : t.checkpoints)
    if (c.H <= root) from = &c;
  const double total = t.checkpoints.back().partial;
  r.tail_from = from->H;
  r.tail_increment = total - from->partial;
  if (std::isnan(r.tail_increment)) r.tail_increment = kInf;
  if (r.tail_increment >= divergence_floor) {
    r.kind = L2Result::Kind::Diverging;
  } else if (r.tail_increment < tolerance && t.remainder_bound < tolerance) {
    r.kind = L2Result::Kind::Converged;
    r.bound = total + t.remainder_bound;
  }
  return r;
}

FourierRoof ReducedRoof::as_roof() const {
  return FourierRoof::table(c0, kept, stage == Stage::M ? "reduced_M" : "reduced_best_returns", false);
}

ReducedRoof reduce_to_M(const FourierRoof& phi, const RotationNumber& alpha, const mpz_class& horizon, long dense_cap) {
  if (horizon < 1) throw PreconditionError("reduction horizon must be >= 1");
  ReducedRoof r;
  r.stage = ReducedRoof::Stage::M;
  r.c0 = phi.c0();
  r.horizon = horizon;
  double K3_log2 = -kInf;
  auto keep = [&](const mpz_class& m, const ExtCoeff& c, MMember mm) {
    K3_log2 = std::max(K3_log2, c.log2abs - mm.norm.log2_abs());
    r.kept.push_back({m, c});
    r.kept_members.push_back(std::move(mm));
  };
  auto discard = [&](const mpz_class& m, const ExtCoeff& c) {
    r.xi_l2_bound += 2.0 * std::exp2(2.0 * non_member_bound_log2(m, c));
    r.discarded.push_back({m, c});
  };

  if (phi.is_table()) {
    for (const auto& e : phi.entries()) {
      if (e.m > horizon) break;
      if (in_class_M(alpha, e.m))
        keep(e.m, e.c, annotate_member(alpha, e.m));
      else
        discard(e.m, e.c);
    }
  } else if (!phi.is_constant()) {
    const long cap = horizon < dense_cap ? horizon.get_si() : dense_cap;
    SmoothnessProxy p = c3_proxy(phi, std::max<long>(cap, 2));
    if (!p.cauchy) throw PreconditionError("roof does not pass the C^3 proxy at horizon " + std::to_string(cap));
    const long T = std::min(cap, phi.dense_horizon(1e-30, cap));
    MemberIndex idx = member_index(alpha, horizon);
    for (long m = 1; m <= T; ++m) {
      ExtCoeff c = phi.ext_coeff(m);
      if (c.is_zero()) continue;
      mpz_class z(m);
      if (!contains(idx.ms, z)) discard(z, c);
    }
    for (std::size_t i = 0; i < idx.members.size(); ++i) {
      ExtCoeff c = phi.ext_coeff(idx.members[i].m);
      if (!c.is_zero()) keep(idx.members[i].m, c, idx.members[i]);
    }
    r.xi_l2_bound += 0.5 * sq(phi.moment_tail(2, T));
  }
  r.K3 = std::exp2(K3_log2);
  r.identity = r.discarded.empty() && r.xi_l2_bound == 0.0;
  return r;
}

ReducedRoof reduce_to_best_returns(const ReducedRoof& in, const FourierRoof& phi, const RotationNumber& alpha,
                                   const H1Report& h1, double k3_cap) {
  if (in.stage != ReducedRoof::Stage::M) throw PreconditionError("second reduction needs a class M representative");
  if (h1.verdict != Verdict::Pass) throw PreconditionError("second reduction requires H1 to pass");
  if (!std::isfinite(in.K3) || in.K3 > k3_cap)
    throw PreconditionError("K3 = " + std::to_string(in.K3) + " is not bounded at the horizon (cap " +
                            std::to_string(k3_cap) + ")");
  ReducedRoof r;
  r.stage = ReducedRoof::Stage::BestReturnsOnly;
  r.c0 = in.c0;
  r.horizon = in.horizon;
  r.K3 = in.K3;
  r.discarded = in.discarded;
  r.xi_l2_bound = in.xi_l2_bound;
  for (std::size_t i = 0; i < in.kept.size(); ++i) {
    const MMember& mm = in.kept_members[i];
    if (mm.tag == MMember::Tag::BestReturn && mm.square_growth) {
      r.kept.push_back(in.kept[i]);
      r.kept_members.push_back(mm);
      const ExtCoeff& cq = in.kept[i].c;
      double C = 0.0;
      for (long l = 2; l <= kInnerMultiple; ++l) {
        ExtCoeff c = phi.ext_coeff(mpz_class(l * mm.m));
        if (!c.is_zero()) C += std::exp2(2.0 * (c.log2abs - cq.log2abs));
      }
      r.xi_l2_bound += C * in.K3 * in.K3 / 16.0;
    } else {
      r.discarded.push_back(in.kept[i]);
    }
  }
  (void)alpha;
  r.identity = r.discarded.empty() && r.xi_l2_bound == 0.0;
  return r;
}

ResidualCheck verify_cohomology_residual(const ReducedRoof& reduced, const RotationNumber& alpha, long grid,
                                         long horizon) {
  if (grid < 1) throw PreconditionError("grid must be >= 1");
  struct Term {
    long m;
    std::complex<double> a;  // coefficient of e(m x) in psi(x + alpha) - psi(x) - xi(x)
  };
  std::vector<Term> terms;
  ResidualCheck out;
  double mass = 0.0;
  for (const auto& e : reduced.discarded) {
    if (!e.m.fits_slong_p()) continue;
    long m = e.m.get_si();
    std::complex<double> xi = e.c.to_complex();
    if (m > horizon) {
      terms.push_back({m, -xi});
      out.tail_bound += 2.0 * std::abs(xi) * sq(static_cast<double>(m));
      mass += 2.0 * std::abs(xi);
      continue;
    }
    TransferEntry t = transfer_entry(alpha, e.m, e.c);
    std::complex<double> psi = t.psi.to_complex();
    NormValue r = residue_of_multiple(alpha, e.m);
    std::complex<double> shift = e2pi(r.value.to_double());
    terms.push_back({m, psi * shift - psi - xi});
    mass += 2.0 * (2.0 * std::abs(psi) + std::abs(xi));
  }
  for (long j = 0; j < grid; ++j) {
    double x = static_cast<double>(j) / static_cast<double>(grid);
    double v = 0.0;
    for (const auto& t : terms) v += 2.0 * (t.a * e2pi(frac_mul(t.m, x))).real();
    out.residual = std::max(out.residual, std::fabs(v));
  }
  out.rounding_allowance = 1e-13 * mass + 1e-15;
  out.ok = out.residual <= out.tail_bound + out.rounding_allowance;
  return out;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::DiscreteL2Conjugate:
      return "discrete_l2_conjugate";
    case Outcome::WeakMixingSingleFrequency:
      return "weak_mixing_single_frequency";
    case Outcome::WeakMixingMultiFrequency:
      return "weak_mixing_multi_frequency";
    case Outcome::Undecided:
      return "undecided";
  }
  return "undecided";
}

std::vector<int> square_growth_returns(const RotationNumber& alpha, const mpz_class& horizon) {
  std::vector<int> out;
  for (std::size_t n = 0; n < alpha.size(); ++n) {
    const mpz_class& q = alpha.q(n);
    if (q > horizon) break;
    if (n + 1 < alpha.size() && alpha.q(n + 1) == q) continue;
    if (square_growth_at(alpha, n)) out.push_back(static_cast<int>(n));
  }
  return out;
}

DichotomyVerdict classify(const FourierRoof& phi, const RotationNumber& alpha, const mpz_class& horizon,
                          const Thresholds& th) {
  DichotomyVerdict v;
  v.horizon = horizon;
  if (phi.is_constant()) {
    v.constant_roof = true;
    v.outcome = Outcome::DiscreteL2Conjugate;
    v.reason = "constant roof";
    return v;
  }
  v.hyp = check_hypotheses(phi, th.hyp_horizon);
  for (const auto& [m, C] : v.hyp.h1.C)
    if (2 * m > v.hyp.h1.horizon) v.limsup_C = std::max(v.limsup_C, C);

  TransferCoefficients t = formal_transfer(phi, alpha, horizon, th.dense_cap);
  v.l2 = l2_conjugacy_test(t, th.l2_tol, th.divergence_floor);
  for (const auto& e : t.entries)
    if (e.in_M) v.ratios.push_back({e.m, -1, e.ratio_log2, false});

  for (int n : square_growth_returns(alpha, horizon)) {
    const mpz_class& q = alpha.q(static_cast<std::size_t>(n));
    auto it = std::lower_bound(t.entries.begin(), t.entries.end(), q,
                               [](const TransferEntry& a, const mpz_class& b) { return a.m < b; });
    if (it == t.entries.end() || it->m != q || it->c.is_zero()) continue;
    v.mprime.push_back({q, n, it->ratio_log2, true});
    v.partial_r2 += std::exp2(2.0 * it->ratio_log2);
    if (it->ratio_log2 >= std::log2(th.ratio_floor)) v.subsequence.push_back(n);
  }
  for (auto& r : v.ratios)
    for (const auto& p : v.mprime)
      if (p.m == r.m) {
        r.n = p.n;
        r.square_growth = true;
      }

  // Dyadic rank blocks [1], [2, 3], [4, 7], ...
  const int count = static_cast<int>(v.mprime.size());
  for (int first = 1; first <= count; first *= 2) {
    RatioBlock b;
    b.first_rank = first;
    b.last_rank = 2 * first - 1;
    b.complete = b.last_rank <= count;
    for (int k = first; k <= std::min(b.last_rank, count); ++k) {
      double r = std::exp2(v.mprime[static_cast<std::size_t>(k - 1)].ratio_log2);
      b.max_ratio = std::max(b.max_ratio, r);
      b.sum_r2 += r * r;
    }
    v.blocks.push_back(b);
  }

  if (v.l2.kind == L2Result::Kind::Converged) {
    v.outcome = Outcome::DiscreteL2Conjugate;
    v.reason = "transfer series converges in L2";
    return v;
  }
  if (v.l2.kind == L2Result::Kind::Undecided) {
    v.reason = "L2 tail increment between tolerance and divergence floor";
    return v;
  }
  if (v.hyp.h1.verdict != Verdict::Pass || v.hyp.h2.verdict != Verdict::Pass || v.hyp.h3.verdict != Verdict::Pass) {
    v.reason = "transfer series diverges but the hypotheses are not all established";
    return v;
  }
  std::vector<const RatioBlock*> complete;
  for (const auto& b : v.blocks)
    if (b.complete) complete.push_back(&b);
  if (complete.size() < 2) {
    v.reason = "fewer than two complete blocks of square-growth returns below the horizon";
    return v;
  }
  const RatioBlock& last = *complete.back();
  const RatioBlock& prev = *complete[complete.size() - 2];
  if (last.max_ratio >= th.ratio_floor && last.max_ratio >= prev.max_ratio) {
    v.outcome = Outcome::WeakMixingSingleFrequency;
    v.reason = "ratios along square-growth returns stay above the floor";
    return v;
  }
  if (last.max_ratio < prev.max_ratio && last.sum_r2 >= 0.5 * prev.sum_r2) {
    v.outcome = Outcome::WeakMixingMultiFrequency;
    v.reason = "ratios decay while their block sums of squares do not";
    return v;
  }
  v.reason = "ratio blocks fit neither regime";
  return v;
}

}  // namespace sfw
