#pragma once

#include <gmpxx.h>

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "sfw/diophantine.hpp"

namespace sfw {

// |c| = 2^log2abs, c = |c| e^{i arg}. Survives magnitudes far below double range.
struct ExtCoeff {
  double log2abs = -std::numeric_limits<double>::infinity();
  double arg = 0.0;
  bool is_zero() const { return std::isinf(log2abs) && log2abs < 0; }
  std::complex<double> to_complex() const;
  static ExtCoeff from_complex(std::complex<double> c);
};

struct TableEntry {
  mpz_class m;  // m >= 1
  ExtCoeff c;
};

class FourierRoof {
 public:
  enum class Kind { Constant, Dyadic, Prime, ExpDecay, Table };

  static FourierRoof constant(double c0);
  // c_m = 2^-|m|
  static FourierRoof dyadic();
  // c_p = scale * p^-exponent on primes, 0 on composites and 1.
  static FourierRoof prime(double c0, double scale, double exponent);
  // profile "lower": c_m = C1 e^{-k1|m|}; "alternating": odd m use (C1, k1), even m use (C2, k2).
  static FourierRoof expdecay(double c0, double C1, double C2, double k1, double k2,
                              const std::string& profile = "lower");
  // Entries with m < 0 must be conjugates of their m > 0 partners. Without
  // check_positive the result is a coefficient set rather than a roof.
  static FourierRoof table(double c0, std::vector<TableEntry> entries, const std::string& name = "table",
                           bool check_positive = true);
  static FourierRoof table(double c0, const std::vector<std::pair<long, std::complex<double>>>& entries,
                           const std::string& name = "table");
  // c_{q_k} = rho_k ||q_k alpha|| for k >= k_start; rho beyond the list decays like 1/sqrt(k).
  static FourierRoof resonant(const RotationNumber& alpha, double c0, std::vector<double> rho, int k_start = 1);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double c0() const { return c0_; }
  bool is_constant() const;

  std::complex<double> coeff(long m) const;
  ExtCoeff ext_coeff(const mpz_class& m) const;
  ExtCoeff ext_coeff(long m) const;

  // Largest materialised |m| for tables; max long for rule roofs.
  mpz_class support_horizon() const;
  bool is_table() const { return kind_ == Kind::Table; }
  const std::vector<TableEntry>& entries() const { return entries_; }

  // Upper bound on sum_{m > H} m^k |c_m| (one side).
  double moment_tail(int k, long H) const;
  // Smallest H with 2 * moment_tail(0, H) <= eps.
  long dense_horizon(double eps, long cap = 1L << 20) const;
  // Table frequencies in (lo, hi].
  std::vector<mpz_class> support_between(const mpz_class& lo, const mpz_class& hi) const;

  struct Params {
    double scale = 0, exponent = 0, C1 = 0, C2 = 0, k1 = 0, k2 = 0;
    std::string profile;
    std::vector<double> rho;
    int k_start = 1;
  };
  const Params& params() const { return params_; }

 private:
  Kind kind_ = Kind::Constant;
  std::string name_;
  double c0_ = 1.0;
  Params params_;
  std::vector<TableEntry> entries_;  // sorted by m, m >= 1
};

// sum_{|m| <= H} c_m e(m x). Throws PreconditionError("non-Hermitian coefficients")
// when the imaginary residue exceeds 1e-12.
double evaluate(const FourierRoof& phi, double x, long horizon);

struct PositivityCertificate {
  long grid = 0;
  long horizon = 0;
  double grid_min = 0;
  double tail = 0;
  double lipschitz_slack = 0;
  double lower_bound = 0;  // grid_min - tail - slack
  bool positive = false;
};

PositivityCertificate certify_positive(const FourierRoof& phi, long grid = 1L << 14);

struct SmoothnessProxy {
  long horizon = 0;
  double partial_half = 0;  // sum_{1 <= m <= H/2} m^3 |c_m|
  double partial = 0;       // sum_{1 <= m <= H} m^3 |c_m|
  bool cauchy = false;
};

SmoothnessProxy c3_proxy(const FourierRoof& phi, long horizon, double tol = 1e-6);

enum class Verdict { Pass, Fail, Undecided };
const char* verdict_name(Verdict v);

struct H1Report {
  long horizon = 0;
  std::vector<std::pair<long, double>> C;  // (m, C_m) for c_m != 0
  double partial_sum = 0;
  double tail_increment = 0;  // sum of C_m over (H/2, H]
  double remainder_bound = 0;  // inner sums cut at 64 m
  bool m1_exempt = false;      // c_1 = 0 with nonzero multiples
  long witness = 0;
  Verdict verdict = Verdict::Undecided;
};

struct H23Report {
  long horizon = 0;
  std::vector<std::pair<long, double>> ratio;  // (m, sum_{l>=2} w_l |c_{lm}| / |c_m|)
  double K = 0;   // sup of ratios over [m0, horizon]
  long m0 = 0;
  long witness = 0;
  Verdict verdict = Verdict::Undecided;
};

struct HypothesisReport {
  long horizon = 0;
  H1Report h1;
  H23Report h2;
  H23Report h3;
};

H1Report check_H1(const FourierRoof& phi, long horizon, double tol = 1e-6);
H23Report check_H2(const FourierRoof& phi, long horizon);
H23Report check_H3(const FourierRoof& phi, long horizon);
HypothesisReport check_hypotheses(const FourierRoof& phi, long horizon);

// Inner sums of the hypothesis checkers run to l_max * m.
inline constexpr long kInnerMultiple = 64;

}  // namespace sfw
