#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace sfw {

// Owning wrapper around mpfr_t. Binary operations produce a result at the
// larger of the two operand precisions.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = 256);
  Real(double v, mpfr_prec_t prec);
  Real(long v, mpfr_prec_t prec);
  Real(const mpz_class& z, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN);
  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // log2|x|, -inf for zero. Valid far outside double range.
  double log2_abs() const;
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  std::string str(int digits = 20) const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  static Real pi(mpfr_prec_t prec);
  static Real exp2(double e, mpfr_prec_t prec);

 private:
  mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator-(const Real& a);
Real operator*(const Real& a, const mpz_class& z);
Real operator*(const Real& a, double d);

bool operator<(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);

Real abs(const Real& a);
Real sin_pi(const Real& a);  // sin(pi a)
Real cos_pi(const Real& a);
Real round_nearest(const Real& a);
Real floor(const Real& a);
Real sqrt(const Real& a);
Real mul_2exp(const Real& a, long e);

}  // namespace sfw
