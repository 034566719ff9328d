#include "sfw/phase.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace sfw {

namespace {

using u128 = unsigned __int128;

// x = N * 2^-E with N < 2^53; false when x is an integer.
bool split(double x, unsigned long& N, long& E) {
  int e = 0;
  double f = std::frexp(std::fabs(x), &e);
  N = static_cast<unsigned long>(std::ldexp(f, 53));
  E = 53 - e;
  return E > 0 && N != 0;
}

double flip(double f, bool negative) {
  if (!negative || f == 0.0) return f;
  double g = 1.0 - f;
  return g >= 1.0 ? 0.0 : g;
}

}  // namespace

double frac_mul(long m, double x) {
  unsigned long N = 0;
  long E = 0;
  if (m == 0 || !split(x, N, E)) return 0.0;
  bool neg = (m < 0) != (x < 0);
  u128 am = m < 0 ? static_cast<u128>(-(m + 1)) + 1 : static_cast<u128>(m);
  u128 prod = am * N;
  if (E < 128) prod &= (static_cast<u128>(1) << E) - 1;
  long double f = std::ldexp(static_cast<long double>(prod), -static_cast<int>(E));
  return flip(static_cast<double>(f), neg);
}

double frac_mul(const mpz_class& m, double x) {
  if (m.fits_slong_p()) return frac_mul(m.get_si(), x);
  unsigned long N = 0;
  long E = 0;
  if (!split(x, N, E)) return 0.0;
  bool neg = (sgn(m) < 0) != (x < 0);
  mpz_class prod = abs(m);
  prod *= N;
  mpz_tdiv_r_2exp(prod.get_mpz_t(), prod.get_mpz_t(), static_cast<mp_bitcnt_t>(E));
  long e2 = 0;
  double d = mpz_get_d_2exp(&e2, prod.get_mpz_t());
  double f = std::ldexp(d, static_cast<int>(e2 - E));
  return flip(f, neg);
}

double log2_mpz(const mpz_class& z) {
  if (z == 0) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double d = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log2(std::fabs(d)) + static_cast<double>(e);
}

double centered(double f) {
  double g = f - std::floor(f);
  return g >= 0.5 ? g - 1.0 : g;
}

std::complex<double> e2pi(double f) {
  double a = 2.0 * std::numbers::pi * centered(f);
  return {std::cos(a), std::sin(a)};
}

}  // namespace sfw
