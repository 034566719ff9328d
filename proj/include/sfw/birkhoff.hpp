#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "sfw/cohomology.hpp"
#include "sfw/diophantine.hpp"
#include "sfw/roof.hpp"
#include "sfw/trigsum.hpp"

namespace sfw {

// Finite coefficient set c_0 + sum_{k} 2 Re(c_k e(k x)) with bounds on what was left out.
struct Spectrum {
  double c0 = 0.0;
  std::vector<TableEntry> terms;  // k >= 1, sorted
  double tail_k2 = 0.0;   // sum of k^2 |c_k| over omitted k outside class M
  double tail_far = 0.0;  // sum of |c_k| over omitted class M members

  // Bound on sup |S_m (omitted part)|.
  double truncation_bound(const mpz_class& m) const;
};

// Rule roofs: k <= dense plus class M members up to sparse_horizon. Tables: every entry.
Spectrum spectrum_of(const FourierRoof& phi, const RotationNumber& alpha, long dense, const mpz_class& sparse_horizon);
Spectrum spectrum_of(const ReducedRoof& r);

struct KernelValue {
  ExtCoeff K;  // (e(m k alpha) - 1) / (e(k alpha) - 1)
  double ratio_log2 = 0;  // log2 ||m k alpha|| / ||k alpha||
  bool sandwich_ok = false;
};

KernelValue birkhoff_kernel(const RotationNumber& alpha, const mpz_class& m, const mpz_class& k);

// Literal sum_{j < m} phi(x + j alpha) with phi truncated at |k| <= horizon.
double birkhoff_direct(const FourierRoof& phi, const RotationNumber& alpha, long m, double x, long horizon);

struct BirkhoffPoly {
  double mean = 0.0;  // m c_0
  TrigPoly osc;
  bool kernels_ok = true;
  std::size_t kernels = 0;
};

// S_m of the spectrum. With divisor d every frequency must be a multiple of d and
// the polynomial is returned in the variable y = d x.
BirkhoffPoly birkhoff_poly(const Spectrum& s, const RotationNumber& alpha, const mpz_class& m,
                           const mpz_class& divisor = 1);

struct SumEvaluation {
  mpz_class m;
  long grid = 0;
  std::vector<double> values;  // S_m phi(j / grid)
  double R = 0;                // max - min over the grid
  double D_log2 = 0;           // log2 of sum 2 * 2 pi k |c_k K_m(k)|
  bool kernels_ok = true;
};

SumEvaluation birkhoff_fourier(const Spectrum& s, const RotationNumber& alpha, const mpz_class& m, long grid);
double birkhoff_fourier_at(const Spectrum& s, const RotationNumber& alpha, const mpz_class& m, double x);

struct PlanEntry {
  int n = 0;
  int s = -1;        // best-return index s(n); multi: first index of the window
  mpz_class q;       // q_{s(n)}
  mpz_class q_next;  // q_{s(n)+1}
  mpz_class b, m;
  double norm_log2 = 0;   // log2 ||m_n alpha||
  double bound_log2 = 0;  // log2 b_n ||q_{s(n)} alpha||
  std::vector<int> window;
  std::vector<mpz_class> wq, wb;
  std::vector<double> d, r;  // window amplitudes and phases of d cos(2 pi q y + r)
  double variance = 0;       // sum d^2
};

struct BirkhoffPlan {
  enum class Kind { SingleFrequency, MultiFrequency, ReturnTimes };
  Kind kind = Kind::SingleFrequency;
  std::vector<PlanEntry> entries;
  std::vector<std::string> warnings;
  double variance_target = 0, delta = 0;
};
const char* plan_kind_name(BirkhoffPlan::Kind k);

// b = ceil(q_{s+1} / (4 q_s)); throws InsufficientQuotients when q_{s+1} is unknown.
mpz_class plan_multiplier(const RotationNumber& alpha, int s, mpz_class* q_next = nullptr);

BirkhoffPlan make_single_frequency_plan(const RotationNumber& alpha, const DichotomyVerdict& v, std::size_t count);
BirkhoffPlan make_single_frequency_plan(const RotationNumber& alpha, const std::vector<int>& indices, std::size_t count);
// phi2 must be a best-returns-only representative. Windows start at best-return index first_index.
BirkhoffPlan make_multi_frequency_plan(const RotationNumber& alpha, const ReducedRoof& phi2, double variance_target,
                                       double delta = 0.05, int first_index = 2);
// m_n = q_n for n in [from, to].
BirkhoffPlan make_return_time_plan(const RotationNumber& alpha, int from, int to);

struct LambdaRepresentative {
  double lambda = 0;
  Spectrum spectrum;  // c_0 and the kept class M terms
  std::vector<mpz_class> dropped;
  double certificate_sum = 0;   // 2 sum_{kept} |m c_m| plus the far tail
  double certificate_bound = 0;  // 1 / (16 |lambda|)
};

// far_tail_m1 bounds sum |m c_m| over class M members past the reduction horizon.
LambdaRepresentative lambda_representative(const ReducedRoof& r, double lambda, double far_tail_m1 = 0.0);

// Terms of the spectrum at multiples of q (c_0 kept).
Spectrum multiples_of(const Spectrum& s, const mpz_class& q);

struct QuadratureSettings {
  double tol = 1e-3;
  long min_grid = 1L << 12;
  long max_grid = 1L << 22;
  long samples = 1L << 16;
  std::uint64_t seed = 1;
};

struct CriterionValue {
  int n = 0;
  mpz_class m;
  double lambda = 0;
  double norm_log2 = 0;
  double z = 0;
  double integral = 0;
  double error = 0;
  std::string method;  // "grid" or "monte_carlo"
  long points = 0;
};

// frac(lambda * c0 * m), exact for double inputs.
double lambda_shift(double lambda, double c0, const mpz_class& m);

// integral over [0,1) of ||lambda S_m s(x)||.
CriterionValue criterion_integral(const Spectrum& s, const RotationNumber& alpha, const mpz_class& m, double lambda,
                                  const QuadratureSettings& q, std::uint64_t stream = 0);
std::vector<CriterionValue> criterion_integrals(const BirkhoffPlan& plan, const Spectrum& s,
                                                const RotationNumber& alpha, double lambda,
                                                const QuadratureSettings& q);

struct RangeMeasure {
  int n = 0;
  double lambda = 0;
  double R = 0;
  double D_log2 = 0;
  double measure = 0;
  long grid = 0;
  bool below_threshold = false;  // |lambda| R <= 4
  double R_lower = 0;            // 2 (||m q alpha|| / ||q alpha||) |c_q| (1 - 4 K1)
  double measure_lower = 0;      // (1 - 4 K1) / (8 (1 + K2))
  bool R_ok = false, measure_ok = false;
};

RangeMeasure range_derivative_measure(const PlanEntry& e, const Spectrum& phi_n, const RotationNumber& alpha,
                                      double lambda, double K1, double K2, long max_grid = 1L << 22);

struct ApproximationCheck {
  int n = 0;
  double grid_sup = 0;
  double l1_bound = 0;
  bool ok = false;
};

// sup |lambda S_m phi_lambda - lambda S_m phi_n| on a grid, phi_n the multiples of q_{s(n)}.
ApproximationCheck approximation_check(const PlanEntry& e, const LambdaRepresentative& rep, const RotationNumber& alpha,
                         long grid = 1L << 12);

struct DeltaValue {
  int n = 0;
  std::vector<int> window;
  double grid_sup = 0;
  double l1_bound = 0;
  double grid_sup_log2 = 0;
};

std::vector<DeltaValue> delta_n(const BirkhoffPlan& plan, const Spectrum& phi2, const RotationNumber& alpha,
                                long grid = 1L << 12);

struct CertificateSettings {
  double floor = 0.05;
  double refute_ceiling = 0.02;
  double lambda_min = 0;
  QuadratureSettings quad;
  long ks_samples = 1L << 16;
};

struct LambdaOutcome {
  double lambda = 0;
  bool above_threshold = true;
  std::vector<CriterionValue> values;
  double inf_lower = 0;  // inf_n (integral - error)
  std::string status;    // PASS, REFUTED, INCONCLUSIVE
  std::vector<double> ks;  // multi plans: KS of lambda S_m against N(z_n, lambda^2 v)
};

struct Certificate {
  std::string status;
  double lambda_min = 0;
  std::vector<LambdaOutcome> lambdas;
};

// One spectrum per lambda (the lambda representative for single plans).
Certificate weak_mixing_certificate(const BirkhoffPlan& plan, const std::vector<double>& lambdas,
                                    const std::vector<Spectrum>& spectra, const RotationNumber& alpha,
                                    const CertificateSettings& cs);

// 16 log-spaced values in [lambda_min, 16 lambda_min] plus probes k / c0 for k = 1..probes.
std::vector<double> lambda_grid(double lambda_min, double c0, int count = 16, double span = 16.0, int probes = 3);

}  // namespace sfw
