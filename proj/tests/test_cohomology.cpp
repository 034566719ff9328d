#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sfw/cohomology.hpp"
#include "sfw/errors.hpp"

using namespace sfw;

namespace {

using Entries = std::vector<std::pair<long, std::complex<double>>>;

RotationNumber golden(int prec = 256) { return RotationNumber(PartialQuotients::periodic({0}, {1}), prec); }
RotationNumber liouville() { return make_liouville_alpha(PartialQuotients::pow2_growth({0})); }

std::complex<double> e(double x) { return std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi * x)); }

}  // namespace

TEST_CASE("transfer entry against the closed form") {
  RotationNumber g = golden();
  const double a = (std::sqrt(5.0) - 1.0) / 2.0;
  for (long m : {1L, 2L, 5L, 8L, 13L, 100L}) {
    ExtCoeff c = ExtCoeff::from_complex({0.3, 0.0});
    TransferEntry t = transfer_entry(g, m, c);
    std::complex<double> want = 0.3 / (e(static_cast<double>(m) * a) - 1.0);
    CHECK(std::abs(t.psi.to_complex() - want) <= 1e-9 * std::abs(want));
    CHECK(t.sandwich_ok);
  }
}

TEST_CASE("transfer solves the cohomological equation on a finite table") {
  RotationNumber g = golden();
  const double a = (std::sqrt(5.0) - 1.0) / 2.0;
  Entries tab{{1, {0.1, 0.05}}, {3, {-0.07, 0.0}}, {8, {0.02, 0.01}}};
  FourierRoof phi = FourierRoof::table(1.0, tab, "t");
  std::vector<std::pair<long, std::complex<double>>> psi;
  for (const auto& [m, c] : tab) psi.emplace_back(m, transfer_entry(g, m, ExtCoeff::from_complex(c)).psi.to_complex());
  auto psi_at = [&](double x) {
    double v = 0.0;
    for (const auto& [m, p] : psi) v += 2.0 * std::real(p * e(static_cast<double>(m) * x));
    return v;
  };
  for (double x : {0.0, 0.13, 0.5, 0.91}) {
    double lhs = psi_at(x + a) - psi_at(x);
    CHECK(lhs == doctest::Approx(evaluate(phi, x, 8) - 1.0).epsilon(1e-9));
  }
}

TEST_CASE("golden dyadic roof is L2 conjugate to its mean") {
  RotationNumber g = golden();
  FourierRoof d = FourierRoof::dyadic();
  TransferCoefficients t = formal_transfer(d, g, 1024);
  CHECK(t.sandwich_ok);
  CHECK_FALSE(t.checkpoints.empty());
  for (std::size_t i = 1; i < t.checkpoints.size(); ++i) CHECK(t.checkpoints[i].partial >= t.checkpoints[i - 1].partial);
  L2Result l2 = l2_conjugacy_test(t);
  CHECK(l2.kind == L2Result::Kind::Converged);
  CHECK(std::isfinite(l2.bound));
  DichotomyVerdict v = classify(d, g, 1024);
  CHECK(v.outcome == Outcome::DiscreteL2Conjugate);
  CHECK(v.hyp.h1.verdict == Verdict::Pass);
}

TEST_CASE("constant roof is trivially discrete") {
  RotationNumber g = golden();
  DichotomyVerdict v = classify(FourierRoof::constant(2.0), g, 1024);
  CHECK(v.constant_roof);
  CHECK(v.outcome == Outcome::DiscreteL2Conjugate);
}

TEST_CASE("Liouville dyadic roof is single-frequency weak mixing") {
  RotationNumber L = liouville();
  FourierRoof d = FourierRoof::dyadic();
  DichotomyVerdict v = classify(d, L, 65536);
  CHECK(v.outcome == Outcome::WeakMixingSingleFrequency);
  CHECK_FALSE(v.subsequence.empty());
  std::vector<int> sg = square_growth_returns(L, 65536);
  CHECK(std::find(sg.begin(), sg.end(), 3) != sg.end());
  // |c_{q_3}| / ||q_3 alpha|| lies between q_4 2^-4610 and (q_4 + q_3) 2^-4610, q_4 = 2^4610 q_3 + q_2
  bool q3 = false;
  for (const auto& r : v.ratios)
    if (r.m == 4610) {
      q3 = true;
      CHECK(r.ratio_log2 == doctest::Approx(std::log2(4610.0)).epsilon(1e-9));
    }
  CHECK(q3);
}

TEST_CASE("reduction to class M keeps best returns and solves the residual") {
  RotationNumber L = liouville();
  FourierRoof d = FourierRoof::dyadic();
  ReducedRoof r = reduce_to_M(d, L, 65536);
  CHECK(r.stage == ReducedRoof::Stage::M);
  CHECK(r.c0 == 1.0);
  bool has = false;
  for (const auto& t : r.kept) has = has || t.m == 4610;
  CHECK(has);
  CHECK_FALSE(r.identity);
  CHECK(std::isfinite(r.xi_l2_bound));
  for (const auto& t : r.kept) CHECK(in_class_M(L, t.m));
  ResidualCheck rc = verify_cohomology_residual(r, L, 1024, 64);
  CHECK(rc.ok);
  CHECK(rc.residual <= rc.tail_bound + rc.rounding_allowance);
}

TEST_CASE("best-returns reduction refuses without H1") {
  RotationNumber g = golden();
  FourierRoof bad = FourierRoof::table(1.0, Entries{{2, {0.1, 0.0}}, {6, {0.1, 0.0}}}, "gap");
  ReducedRoof r = reduce_to_M(bad, g, 1024);
  H1Report h1 = check_H1(bad, 64);
  REQUIRE(h1.verdict == Verdict::Fail);
  CHECK_THROWS_AS(reduce_to_best_returns(r, bad, g, h1), PreconditionError);
}

TEST_CASE("outcome names") {
  CHECK(std::string(outcome_name(Outcome::DiscreteL2Conjugate)).size() > 0);
  CHECK(std::string(l2_kind_name(L2Result::Kind::Diverging)) != l2_kind_name(L2Result::Kind::Converged));
}
