#pragma once

#include <gmpxx.h>

#include <complex>

namespace sfw {

// frac(m * x) in [0, 1). x is read as the exact dyadic rational it stores and
// the product is reduced exactly before rounding.
double frac_mul(long m, double x);
double frac_mul(const mpz_class& m, double x);

// log2|z|, -inf for zero.
double log2_mpz(const mpz_class& z);

// f reduced to [-1/2, 1/2).
double centered(double f);

// e^{2 pi i f}
std::complex<double> e2pi(double f);

}  // namespace sfw
