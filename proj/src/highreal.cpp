#include "sfw/highreal.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace sfw {

namespace {

void widen_exponent_range() {
  static const bool done = [] {
    mpfr_set_emax(mpfr_get_emax_max());
    mpfr_set_emin(mpfr_get_emin_min());
    return true;
  }();
  (void)done;
}

mpfr_prec_t joint(const Real& a, const Real& b) { return a.prec() > b.prec() ? a.prec() : b.prec(); }

}  // namespace

Real::Real(mpfr_prec_t prec) {
  widen_exponent_range();
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
}

Real::Real(double v, mpfr_prec_t prec) : Real(prec) { mpfr_set_d(v_, v, MPFR_RNDN); }

Real::Real(long v, mpfr_prec_t prec) : Real(prec) { mpfr_set_si(v_, v, MPFR_RNDN); }

Real::Real(const mpz_class& z, mpfr_prec_t prec, mpfr_rnd_t rnd) : Real(prec) {
  mpfr_set_z(v_, z.get_mpz_t(), rnd);
}

Real::Real(const Real& o) {
  widen_exponent_range();
  mpfr_init2(v_, o.prec());
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
  mpfr_init2(v_, o.prec());
  mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  if (this != &o) mpfr_swap(v_, o.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

double Real::log2_abs() const {
  if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
  return std::log2(std::fabs(m)) + static_cast<double>(e);
}

std::string Real::str(int digits) const {
  if (mpfr_zero_p(v_)) return "0";
  std::vector<char> buf(static_cast<size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

Real& Real::operator+=(const Real& o) {
  if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real Real::pi(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

Real Real::exp2(double e, mpfr_prec_t prec) {
  Real r(e, prec);
  mpfr_exp2(r.get(), r.get(), MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator-(const Real& a) {
  Real r(a.prec());
  mpfr_neg(r.get(), a.get(), MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const mpz_class& z) {
  Real r(a.prec());
  mpfr_mul_z(r.get(), a.get(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, double d) {
  Real r(a.prec());
  mpfr_mul_d(r.get(), a.get(), d, MPFR_RNDN);
  return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

Real abs(const Real& a) {
  Real r(a.prec());
  mpfr_abs(r.get(), a.get(), MPFR_RNDN);
  return r;
}

namespace {

// Calls f(pi * r) where r = a mod 2, so large arguments lose no accuracy.
template <class F>
Real trig_pi(const Real& a, F f) {
  mpfr_prec_t wp = a.prec() + 32;
  Real half(wp);
  mpfr_div_2ui(half.get(), a.get(), 1, MPFR_RNDN);
  mpfr_round(half.get(), half.get());
  Real r(wp);
  mpfr_mul_2ui(half.get(), half.get(), 1, MPFR_RNDN);
  mpfr_sub(r.get(), a.get(), half.get(), MPFR_RNDN);
  Real x = Real::pi(wp) * r;
  Real out(a.prec());
  f(out.get(), x.get());
  return out;
}

}  // namespace

Real sin_pi(const Real& a) {
  return trig_pi(a, [](mpfr_ptr o, mpfr_srcptr x) { mpfr_sin(o, x, MPFR_RNDN); });
}

Real cos_pi(const Real& a) {
  return trig_pi(a, [](mpfr_ptr o, mpfr_srcptr x) { mpfr_cos(o, x, MPFR_RNDN); });
}

Real round_nearest(const Real& a) {
  Real r(a.prec());
  mpfr_round(r.get(), a.get());
  return r;
}

Real floor(const Real& a) {
  Real r(a.prec());
  mpfr_floor(r.get(), a.get());
  return r;
}

Real sqrt(const Real& a) {
  Real r(a.prec());
  mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
  return r;
}

Real mul_2exp(const Real& a, long e) {
  Real r(a.prec());
  mpfr_mul_2si(r.get(), a.get(), e, MPFR_RNDN);
  return r;
}

}  // namespace sfw
