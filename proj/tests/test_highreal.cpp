#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sfw/highreal.hpp"
#include "sfw/phase.hpp"

using namespace sfw;

TEST_CASE("real arithmetic matches double on representable values") {
  Real a(1.5, 128), b(0.25, 128);
  CHECK((a + b).to_double() == 1.75);
  CHECK((a - b).to_double() == 1.25);
  CHECK((a * b).to_double() == 0.375);
  CHECK((a / b).to_double() == 6.0);
  CHECK(a > b);
  CHECK(b <= a);
  CHECK((-a).sign() < 0);
  CHECK(Real(0L, 64).is_zero());
}

TEST_CASE("binary operations keep the larger precision") {
  Real a(1L, 64), b(3L, 512);
  CHECK((a / b).prec() == 512);
}

TEST_CASE("sin_pi and cos_pi at rational points") {
  CHECK(sin_pi(Real(1.0 / 6.0, 256)).to_double() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cos_pi(Real(1.0 / 3.0, 256)).to_double() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::fabs(sin_pi(Real(3L, 256)).to_double()) < 1e-70);
}

TEST_CASE("log2_abs survives tiny magnitudes") {
  Real x = Real::exp2(-5000.0, 128);
  CHECK(x.log2_abs() == doctest::Approx(-5000.0));
  CHECK(mul_2exp(Real(1L, 64), 40).log2_abs() == doctest::Approx(40.0));
  CHECK(std::isinf(Real(0L, 64).log2_abs()));
}

TEST_CASE("rounding helpers") {
  CHECK(round_nearest(Real(2.4, 64)).to_double() == 2.0);
  CHECK(round_nearest(Real(-2.6, 64)).to_double() == -3.0);
  CHECK(floor(Real(-0.5, 64)).to_double() == -1.0);
  CHECK(sqrt(Real(2L, 256)).to_double() == doctest::Approx(std::numbers::sqrt2));
  CHECK(Real::pi(256).to_double() == doctest::Approx(std::numbers::pi));
}

TEST_CASE("frac_mul reduces the exact product") {
  // 0.1 is the dyadic rational 3602879701896397 / 2^55.
  const double x = 0.1;
  const mpz_class m = mpz_class(1) << 60;
  mpz_class num = mpz_class(3602879701896397) * m;
  mpz_class den = mpz_class(1) << 55;
  mpz_class rem = num % den;
  double expect = rem.get_d() / den.get_d();
  CHECK(frac_mul(m, x) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(frac_mul(3L, 0.5) == 0.5);
  CHECK(frac_mul(-1L, 0.25) == 0.75);
}

TEST_CASE("centered and e2pi") {
  CHECK(centered(0.75) == -0.25);
  CHECK(centered(0.25) == 0.25);
  CHECK(std::abs(e2pi(0.25) - std::complex<double>(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(e2pi(1.0) - 1.0) < 1e-15);
}

TEST_CASE("log2_mpz") {
  CHECK(log2_mpz(mpz_class(1024)) == 10.0);
  CHECK(log2_mpz(mpz_class(1) << 5000) == doctest::Approx(5000.0));
  CHECK(std::isinf(log2_mpz(mpz_class(0))));
}
