#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "sfw/errors.hpp"
#include "sfw/trigsum.hpp"

using namespace sfw;

namespace {

ExtCoeff ext(double mag, double arg) { return ExtCoeff{std::log2(mag), arg}; }

double direct(const std::vector<std::pair<long, std::complex<double>>>& t, double x) {
  double v = 0.0;
  for (const auto& [f, a] : t) v += 2.0 * std::real(a * std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi * f * x)));
  return v;
}

}  // namespace

TEST_CASE("from_ext normalises to the largest term and drops negligible ones") {
  TrigPoly p = TrigPoly::from_ext({{3, ext(0.5, 0.0)}, {5, ext(0.25, 1.0)}, {7, ExtCoeff{-200.0, 0.0}}});
  CHECK(p.scale_log2 == doctest::Approx(-1.0));
  CHECK(p.terms.size() == 2);
  CHECK(std::abs(p.terms[1].a) == doctest::Approx(0.5));
  CHECK(p.dropped_l1 == doctest::Approx(2.0 * std::exp2(-199.0)));
  CHECK(p.l1() == doctest::Approx(3.0));
  CHECK(TrigPoly::from_ext({}).empty());
  CHECK_THROWS_AS(TrigPoly::from_ext({{0, ext(1.0, 0.0)}}), PreconditionError);
}

TEST_CASE("grid values agree with direct evaluation") {
  std::vector<std::pair<long, std::complex<double>>> t{{1, {0.3, 0.1}}, {7, {-0.2, 0.05}}, {1000003, {0.01, -0.02}}};
  std::vector<std::pair<mpz_class, ExtCoeff>> in;
  for (const auto& [f, a] : t) in.emplace_back(f, ExtCoeff::from_complex(a));
  TrigPoly p = TrigPoly::from_ext(in);
  const double s = std::exp2(p.scale_log2);
  const long G = 256;
  std::vector<double> g = grid_values(p, G);
  std::vector<double> h = grid_values(p, G, true);
  for (long j = 0; j < G; ++j) {
    double x = static_cast<double>(j) / G, xm = (2.0 * j + 1.0) / (2.0 * G);
    CHECK(g[j] * s == doctest::Approx(direct(t, x)).epsilon(1e-9));
    CHECK(h[j] * s == doctest::Approx(direct(t, xm)).epsilon(1e-9));
    CHECK(value_at(p, xm) * s == doctest::Approx(direct(t, xm)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(grid_values(p, 100), PreconditionError);
}

TEST_CASE("value_at reduces huge frequencies exactly") {
  // f = 2^70 + 1 and x = 1/4: f x = 2^68 + 1/4.
  mpz_class f = (mpz_class(1) << 70) + 1;
  TrigPoly p = TrigPoly::from_ext({{f, ext(1.0, 0.0)}});
  CHECK(value_at(p, 0.25) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(value_at(p, 0.5) == doctest::Approx(-2.0));
}

TEST_CASE("samples are deterministic and have the right moments") {
  mpz_class big = mpz_class(1) << 5000;
  TrigPoly p = TrigPoly::from_ext({{big + 3, ext(1.0, 0.3)}, {5, ext(0.5, -1.0)}});
  std::vector<double> a = sample_values(p, 1L << 16, 9), b = sample_values(p, 1L << 16, 9), c = sample_values(p, 1L << 16, 10);
  CHECK(a == b);
  CHECK(a != c);
  double mean = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
  double m2 = 0.0;
  for (double v : a) m2 += v * v;
  m2 /= static_cast<double>(a.size());
  CHECK(std::fabs(mean) < 0.02);
  // E v^2 = 2 (1 + 0.25)
  CHECK(m2 == doctest::Approx(2.5).epsilon(0.02));
  CHECK_THROWS_AS(sample_values(p, 0, 1), PreconditionError);
}

TEST_CASE("sub seeds differ across streams") {
  CHECK(sub_seed(1, 0) != sub_seed(1, 1));
  CHECK(sub_seed(1, 0) == sub_seed(1, 0));
  std::uint64_t s = 0;
  CHECK(splitmix64(s) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("lipschitz bound") {
  TrigPoly p = TrigPoly::from_ext({{4, ext(0.5, 0.0)}});
  CHECK(p.lipschitz_log2() == doctest::Approx(std::log2(4.0 * std::numbers::pi * 0.5 * 4.0)));
  CHECK(p.max_frequency_log2() == doctest::Approx(2.0));
}
