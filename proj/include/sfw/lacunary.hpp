#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "sfw/birkhoff.hpp"

namespace sfw {

// X(y) = sum_k c_k cos(2 pi q_k y + r_k) for y uniform on [0, 1).
struct LacunaryRow {
  std::vector<mpz_class> q;
  std::vector<double> c;
  std::vector<double> r;
  std::size_t size() const { return q.size(); }
};

struct LacunaryArray {
  std::vector<LacunaryRow> rows;
  double target = 1.0;  // configured sum of c^2
  double delta = 0.05;
};

struct RowCheck {
  bool lacunary = false;
  bool normalized = false;
  bool zero_free = false;
  double sum_c2 = 0;
  double max_c = 0;
};

RowCheck check_row(const LacunaryRow& row, double target, double delta);
// Row maxima of |c| strictly decreasing across the array.
bool maxima_decreasing(const LacunaryArray& a);

// u terms, q_k = 2^k, c_k = sqrt(2 / u), phases pi/2.
LacunaryRow synthetic_row(int u);

struct EmpiricalDistribution {
  long count = 0;
  std::uint64_t seed = 0;
  std::vector<double> samples;  // sorted
  double mean = 0;
  double variance = 0;
};

EmpiricalDistribution make_distribution(std::vector<double> samples, std::uint64_t seed);
EmpiricalDistribution sample_row(const LacunaryRow& row, long samples, std::uint64_t seed);

double normal_cdf(double x, double mean, double variance);
double ks_against_normal(const EmpiricalDistribution& d, double mean, double variance);

struct CharValue {
  double t = 0;
  std::complex<double> value;
  double target = 0;  // exp(-t^2 v / 2)
  double distance = 0;
};

struct CharTable {
  std::string method;  // "quadrature" or "monte_carlo"
  long points = 0;
  std::vector<CharValue> values;
  double sup_distance = 0;
};

// Quadrature when the largest frequency is at most 2^20, seeded sampling otherwise.
CharTable characteristic_function(const LacunaryRow& row, const std::vector<double>& t_grid, double v,
                                  long samples = 100000, std::uint64_t seed = 1);

struct ZeroRepresentation {
  bool pass = false;
  std::string method;       // "exhaustive" or "dominance"
  bool conclusive = true;
  std::vector<int> witness;  // b_k in {-1, 0, 1}
};

ZeroRepresentation zero_representation_check(const std::vector<mpz_class>& q);

// integral over [0,1) of prod_k (1 + i t c_k cos(2 pi q_k y + r_k)), by exact expansion.
std::complex<double> cosine_product_integral(const LacunaryRow& row, double t, std::size_t max_terms = 20);

// Rows of d_k cos(2 pi q_k y + r_k) from the windows of a multi-frequency plan.
LacunaryArray birkhoff_to_lacunary(const BirkhoffPlan& plan);

}  // namespace sfw
