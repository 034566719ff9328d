#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sfw/cohomology.hpp"
#include "sfw/diophantine.hpp"
#include "sfw/roof.hpp"

namespace sfw {

struct AlphaSpec {
  std::string kind = "periodic";  // quotients, periodic, rule, euler
  std::vector<mpz_class> quotients;
  std::vector<mpz_class> prefix{0};
  std::vector<mpz_class> period{1};
  std::string rule = "pow2";  // pow2: a_{n+1} = 2^(q_n); power: a_{n+1} = q_n^exponent + offset
  std::vector<mpz_class> seed{0};
  unsigned exponent = 2;
  long offset = 0;
};

struct RoofSpec {
  std::string kind = "dyadic";  // constant, dyadic, prime, expdecay, table, resonant
  double c0 = 1.0;
  double scale = 0.1, exponent = 4.0;
  double C1 = 1.0, C2 = 1.0, k1 = 1.0, k2 = 1.0;
  std::string profile = "lower";
  std::vector<std::pair<long, std::complex<double>>> entries;
  std::string name = "table";
  std::vector<double> rho;
  int k_start = 1;
};

// Integers given as JSON numbers, decimal strings or "b^k" strings.
struct BigHorizon {
  mpz_class value;
  std::string text;
};

struct Horizons {
  BigHorizon classify{65536, "65536"};
  long hypotheses = 64;
  long convergents = 10;
  BigHorizon good_returns{10000, "10000"};
  BigHorizon class_m{10000, "10000"};
  long dense = 64;  // dense band of the criterion spectrum
};

struct LambdaSpec {
  std::vector<double> values;  // explicit grid; empty means automatic
  double min = 0;              // 0 means derived from the plan
  int count = 16;
  double span = 16;
  int probes = 3;
};

struct PlanSpec {
  std::string kind = "auto";  // auto, single, multi, return_times
  int count = 0;              // single: 0 means every usable index
  double variance_target = 1.0;
  double delta = 0.05;
  int first_index = 2;
  int from = 1, to = 13;  // return_times
};

struct Grids {
  long direct = 256;
  long approximation = 1L << 12;
  long delta = 1L << 12;
  long range = 1L << 22;
  long residual = 1L << 10;
  double quad_tol = 1e-3;
  long min_grid = 1L << 12;
  long max_grid = 1L << 22;
  long samples = 1L << 16;
  long ks_samples = 1L << 16;
};

struct CertificateThresholds {
  double floor = 0.05;
  double refute_ceiling = 0.02;
};

struct CltSpec {
  std::string source = "synthetic";  // synthetic or plan
  std::vector<int> u{8, 16, 32, 64, 128};
  long samples = 100000;
  double t_max = 3.0;
  int t_points = 61;
  long dump = 0;  // sample values written per row
};

struct OutputSpec {
  std::string dir = "out";
  std::string emit = "json";  // json, csv, both
};

struct ExperimentConfig {
  AlphaSpec alpha;
  RoofSpec roof;
  Horizons horizons;
  int precision_bits = 256;
  LambdaSpec lambda;
  PlanSpec plan;
  Grids grids;
  std::uint64_t seed = 1;
  Thresholds thresholds;
  CertificateThresholds certificate;
  CltSpec clt;
  OutputSpec output;
};

// Throws ConfigError on unknown keys, wrong types and out-of-range values.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
// Every field, defaults included; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& c);

BigHorizon parse_big(const nlohmann::json& j, const std::string& where);

PartialQuotients make_quotients(const AlphaSpec& a);
RotationNumber make_alpha(const ExperimentConfig& c);
// resonant roofs need alpha.
FourierRoof make_roof(const RoofSpec& r, const RotationNumber& alpha);

}  // namespace sfw
