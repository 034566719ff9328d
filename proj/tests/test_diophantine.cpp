#include <mpfr.h>

#include <cmath>
#include <random>

#include "doctest.h"
#include "sfw/diophantine.hpp"
#include "sfw/errors.hpp"
#include "sfw/phase.hpp"

using namespace sfw;

namespace {

RotationNumber golden(int prec = 256) { return RotationNumber(PartialQuotients::periodic({0}, {1}), prec); }

// ||m (sqrt5 - 1)/2|| at 2048 bits.
double golden_norm_oracle(const mpz_class& m) {
  mpfr_t x, r;
  mpfr_inits2(2048, x, r, static_cast<mpfr_ptr>(nullptr));
  mpfr_sqrt_ui(x, 5, MPFR_RNDN);
  mpfr_sub_ui(x, x, 1, MPFR_RNDN);
  mpfr_div_2ui(x, x, 1, MPFR_RNDN);
  mpfr_mul_z(x, x, m.get_mpz_t(), MPFR_RNDN);
  mpfr_rint(r, x, MPFR_RNDN);
  mpfr_sub(x, x, r, MPFR_RNDN);
  double d = std::fabs(mpfr_get_d(x, MPFR_RNDN));
  mpfr_clears(x, r, static_cast<mpfr_ptr>(nullptr));
  return d;
}

}  // namespace

TEST_CASE("golden convergents are Fibonacci") {
  RotationNumber g = golden();
  std::vector<Convergent> c = convergents(g, 12);
  long a = 1, b = 1;
  for (int n = 0; n < 12; ++n) {
    CHECK(c[n].q == a);
    long t = a + b;
    a = b;
    b = t;
  }
  CHECK(c[10].p == 55);
  CHECK(c[10].q == 89);
}

TEST_CASE("theta recurrence holds") {
  RotationNumber e(PartialQuotients::euler(), 512);
  for (std::size_t n = 1; n + 1 < 30; ++n) {
    Real lhs = e.at(n + 1).theta;
    Real rhs = e.at(n - 1).theta - e.at(n).theta * e.quotient(n + 1).value;
    CHECK(std::fabs((lhs - rhs).to_double()) < 1e-100);
  }
}

TEST_CASE("q_n strictly increasing from n = 1") {
  RotationNumber s(PartialQuotients::periodic({0}, {2}));
  for (std::size_t n = 1; n + 1 < 40; ++n) CHECK(s.q(n) < s.q(n + 1));
}

TEST_CASE("norm_of_multiple agrees with a direct high-precision product") {
  RotationNumber g = golden(512);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    mpz_class m = mpz_class(std::to_string(rng() >> (rng() % 60)));
    if (m == 0) m = 1;
    NormValue v = norm_of_multiple(g, m);
    double want = golden_norm_oracle(m);
    CHECK(v.value.to_double() == doctest::Approx(want).epsilon(1e-12));
    CHECK(v.error.to_double() < 1e-100);
  }
}

TEST_CASE("norm_of_multiple reports exhausted precision") {
  RotationNumber g = golden(64);
  mpz_class m = mpz_class(1) << 1000;
  CHECK_THROWS_AS(norm_of_multiple(g, m), PrecisionExhausted);
  CHECK_THROWS_AS(norm_of_multiple(g, 0), PreconditionError);
}

TEST_CASE("residue sign") {
  RotationNumber g = golden();
  // alpha = 0.618... so 1 * alpha mod 1 is nearest to 1 from below
  CHECK(residue_of_multiple(g, 1).value.to_double() == doctest::Approx(0.6180339887498949 - 1.0));
  CHECK(residue_of_multiple(g, 2).value.to_double() == doctest::Approx(0.2360679774997898));
}

TEST_CASE("good returns of golden alpha are the Fibonacci numbers") {
  RotationNumber g = golden();
  GoodReturns gr = good_returns(g, 10000);
  CHECK(gr.full_scan);
  std::vector<long> q;
  for (const auto& x : gr.items) q.push_back(x.q.get_si());
  std::vector<long> fib{1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597, 2584, 4181, 6765};
  CHECK(q == fib);
  for (const auto& x : gr.items) CHECK(x.l_bound_ok);
}

TEST_CASE("factorisation over best returns") {
  RotationNumber s(PartialQuotients::periodic({0}, {2}));
  GoodReturn r = factor_over_best_returns(s, 24);  // 24 = 2 * 12, q_3 = 12
  CHECK(r.n == 3);
  CHECK(r.l == 2);
}

TEST_CASE("Liouville rule gives 1, 2, 9, 4610") {
  RotationNumber L = make_liouville_alpha(PartialQuotients::pow2_growth({0}));
  CHECK(L.q(1) == 2);
  CHECK(L.q(2) == 9);
  CHECK(L.q(3) == 4610);
  CHECK(mpz_sizeinbase(L.q(4).get_mpz_t(), 2) > 4600);
  CHECK(L.at(3).resolved);
  CHECK(square_growth_at(L, 2));
  CHECK(square_growth_at(L, 3));
  CHECK_THROWS_AS(make_liouville_alpha(PartialQuotients::periodic({0}, {1})), PreconditionError);
}

TEST_CASE("malformed rules are rejected") {
  CHECK_THROWS_AS(PartialQuotients::pow2_growth({0, 0}), PreconditionError);
  CHECK_THROWS_AS(PartialQuotients::power_growth({0}, 2, -1), PreconditionError);
  CHECK_THROWS_AS(PartialQuotients::finite({0, 1, 0}), PreconditionError);
  CHECK_THROWS_AS(PartialQuotients::periodic({0}, {}), PreconditionError);
}

TEST_CASE("class M of golden alpha up to 1e4") {
  RotationNumber g = golden();
  FrequencyClassM M = class_M(g, 10000);
  std::vector<long> ms;
  for (const auto& x : M.members) ms.push_back(x.m.get_si());
  CHECK(ms == std::vector<long>{0, 1});
}

TEST_CASE("class M membership matches its definition") {
  RotationNumber L = make_liouville_alpha(PartialQuotients::pow2_growth({0}));
  FrequencyClassM M = class_M(L, 65536);
  CHECK_FALSE(M.truncated);
  for (const auto& x : M.members) {
    if (x.m == 0) continue;
    CHECK(in_class_M(L, x.m));
    // 2 m^2 ||m alpha|| <= 1
    double v = 1.0 + 2.0 * log2_mpz(x.m) + x.norm.log2_abs();
    CHECK(v <= 0.0);
    CHECK(x.factor_ok);
  }
  bool has_4610 = false, has_2x4610 = false;
  for (const auto& x : M.members) {
    has_4610 = has_4610 || x.m == 4610;
    has_2x4610 = has_2x4610 || x.m == 9220;
  }
  CHECK(has_4610);
  CHECK(has_2x4610);
  CHECK_FALSE(in_class_M(L, 5));
}

TEST_CASE("class M refuses horizons past the materialised convergents") {
  RotationNumber g = golden(64);
  CHECK_THROWS_AS(class_M(g, mpz_class(1) << 2000), PrecisionExhausted);
  CHECK_NOTHROW(class_M(g, mpz_class(1) << 100));
}
