#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <vector>

#include "sfw/roof.hpp"

namespace sfw {

// 2 Re(a e(f x)) with f >= 1.
struct TrigTerm {
  mpz_class f;
  std::complex<double> a;
};

// Real trigonometric polynomial 2^scale_log2 * sum_t 2 Re(a_t e(f_t x)).
// Amplitudes are kept relative to a common power of two so sums whose true
// size is far below double range still evaluate accurately.
struct TrigPoly {
  double scale_log2 = 0.0;
  std::vector<TrigTerm> terms;
  double dropped_l1 = 0.0;  // relative l1 mass of terms dropped as negligible

  // Terms below 2^-drop_bits of the largest are dropped into dropped_l1.
  static TrigPoly from_ext(const std::vector<std::pair<mpz_class, ExtCoeff>>& terms, double drop_bits = 80.0);

  bool empty() const { return terms.empty(); }
  // sum 2|a| in relative units (excluding the dropped mass).
  double l1() const;
  // log2 of sum 2 * 2 pi f |a| in absolute units; -inf when empty.
  double lipschitz_log2() const;
  double max_frequency_log2() const;
};

// Relative value at a single x.
double value_at(const TrigPoly& p, double x);

// Relative values at x_j = j / G, or at midpoints (2j+1)/(2G).
std::vector<double> grid_values(const TrigPoly& p, long G, bool midpoint = false);

// Relative values at random x with exact dyadic phases. With stratify, sample
// j lies in [j/N, (j+1)/N) (N rounded up to a power of two).
std::vector<double> sample_values(const TrigPoly& p, long N, std::uint64_t seed, bool stratify = true);

std::uint64_t splitmix64(std::uint64_t& state);
// Independent substream seed.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sfw
