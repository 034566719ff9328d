#include "sfw/lacunary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>

#include "sfw/errors.hpp"
#include "sfw/phase.hpp"
#include "sfw/trigsum.hpp"

namespace sfw {

namespace {

TrigPoly row_poly(const LacunaryRow& row) {
  std::vector<std::pair<mpz_class, ExtCoeff>> terms;
  for (std::size_t k = 0; k < row.size(); ++k)
    terms.emplace_back(row.q[k], ExtCoeff::from_complex(std::polar(0.5 * row.c[k], row.r[k])));
  return TrigPoly::from_ext(terms, 200.0);
}

void require_increasing(const std::vector<mpz_class>& q) {
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (q[k] < 1) throw PreconditionError("frequencies must be positive");
    if (k > 0 && q[k] <= q[k - 1]) throw PreconditionError("frequencies must be strictly increasing");
  }
}

// All sums of b_k q_k, b in {-1,0,1}^n, for q[first, first+n).
template <typename Visit>
void enumerate_signs(const std::vector<mpz_class>& q, std::size_t first, std::size_t n, Visit&& visit) {
  std::vector<int> b(n, -1);
  mpz_class s = 0;
  for (std::size_t k = 0; k < n; ++k) s -= q[first + k];
  while (true) {
    visit(s, b);
    std::size_t k = 0;
    while (k < n && b[k] == 1) {
      b[k] = -1;
      s -= 2 * q[first + k];
      ++k;
    }
    if (k == n) break;
    ++b[k];
    s += q[first + k];
  }
}

bool nonzero(const std::vector<int>& b) {
  return std::any_of(b.begin(), b.end(), [](int x) { return x != 0; });
}

}  // namespace

RowCheck check_row(const LacunaryRow& row, double target, double delta) {
  RowCheck rc;
  rc.lacunary = true;
  for (std::size_t k = 1; k < row.size(); ++k)
    if (row.q[k] < 2 * row.q[k - 1]) rc.lacunary = false;
  for (double c : row.c) {
    rc.sum_c2 += c * c;
    rc.max_c = std::max(rc.max_c, std::fabs(c));
  }
  rc.normalized = std::fabs(rc.sum_c2 - target) <= delta * target;
  ZeroRepresentation z = zero_representation_check(row.q);
  rc.zero_free = z.pass && z.conclusive;
  return rc;
}

bool maxima_decreasing(const LacunaryArray& a) {
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& row : a.rows) {
    double mx = 0.0;
    for (double c : row.c) mx = std::max(mx, std::fabs(c));
    if (!(mx < prev)) return false;
    prev = mx;
  }
  return true;
}

LacunaryRow synthetic_row(int u) {
  if (u < 1) throw PreconditionError("row needs u >= 1");
  LacunaryRow row;
  const double c = std::sqrt(2.0 / u);
  for (int k = 1; k <= u; ++k) {
    row.q.push_back(mpz_class(1) << k);
    row.c.push_back(c);
    row.r.push_back(std::numbers::pi / 2);
  }
  return row;
}

EmpiricalDistribution make_distribution(std::vector<double> samples, std::uint64_t seed) {
  EmpiricalDistribution d;
  d.seed = seed;
  d.count = static_cast<long>(samples.size());
  double s = 0.0;
  for (double x : samples) s += x;
  d.mean = d.count ? s / d.count : 0.0;
  double v = 0.0;
  for (double x : samples) v += (x - d.mean) * (x - d.mean);
  d.variance = d.count > 1 ? v / (d.count - 1) : 0.0;
  std::sort(samples.begin(), samples.end());
  d.samples = std::move(samples);
  return d;
}

EmpiricalDistribution sample_row(const LacunaryRow& row, long samples, std::uint64_t seed) {
  if (samples < 1000) throw PreconditionError("sample_row needs at least 1000 samples");
  if (row.c.size() != row.q.size() || row.r.size() != row.q.size())
    throw PreconditionError("row arrays must have equal length");
  TrigPoly p = row_poly(row);
  std::vector<double> v;
  if (p.empty()) {
    v.assign(static_cast<std::size_t>(samples), 0.0);
  } else {
    v = sample_values(p, samples, seed);
    const double scale = std::exp2(p.scale_log2);
    for (double& x : v) x *= scale;
  }
  return make_distribution(std::move(v), seed);
}

double normal_cdf(double x, double mean, double variance) {
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

double ks_against_normal(const EmpiricalDistribution& d, double mean, double variance) {
  if (!(variance > 0.0)) throw PreconditionError("KS target variance must be > 0");
  if (d.samples.empty()) throw PreconditionError("empty distribution");
  const double n = static_cast<double>(d.samples.size());
  double D = 0.0;
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    double F = normal_cdf(d.samples[i], mean, variance);
    D = std::max({D, (static_cast<double>(i) + 1.0) / n - F, F - static_cast<double>(i) / n});
  }
  return D;
}

CharTable characteristic_function(const LacunaryRow& row, const std::vector<double>& t_grid, double v, long samples,
                                  std::uint64_t seed) {
  CharTable tab;
  TrigPoly p = row_poly(row);
  const double scale = p.empty() ? 0.0 : std::exp2(p.scale_log2);
  std::vector<double> x;
  double cabs = 0.0;
  for (double c : row.c) cabs += std::fabs(c);
  double tmax = 0.0;
  for (double t : t_grid) tmax = std::max(tmax, std::fabs(t));
  const double fmax = p.empty() ? 0.0 : std::exp2(p.max_frequency_log2());
  if (fmax <= static_cast<double>(1L << 20)) {
    // exp(i t X) is band-limited to about fmax (1 + t sum|c|) up to a rapidly decaying tail.
    double need = std::max(1.0, fmax) * (8.0 + 4.0 * tmax * cabs);
    long G = 1L << 12;
    while (static_cast<double>(G) < need && G < (1L << 26)) G *= 2;
    x = p.empty() ? std::vector<double>(static_cast<std::size_t>(G), 0.0) : grid_values(p, G);
    tab.method = "quadrature";
    tab.points = G;
  } else {
    x = sample_values(p, samples, seed);
    tab.method = "monte_carlo";
    tab.points = samples;
  }
  for (double& y : x) y *= scale;
  for (double t : t_grid) {
    CharValue cv;
    cv.t = t;
    if (t == 0.0) {
      cv.value = 1.0;
    } else {
      std::complex<double> s = 0.0;
      for (double y : x) s += std::polar(1.0, t * y);
      cv.value = s / static_cast<double>(x.size());
    }
    cv.target = std::exp(-0.5 * t * t * v);
    cv.distance = std::abs(cv.value - cv.target);
    tab.sup_distance = std::max(tab.sup_distance, cv.distance);
    tab.values.push_back(cv);
  }
  return tab;
}

ZeroRepresentation zero_representation_check(const std::vector<mpz_class>& q) {
  require_increasing(q);
  ZeroRepresentation z;
  const std::size_t u = q.size();
  if (u <= 20) {
    z.method = "exhaustive";
    const std::size_t na = u / 2, nb = u - na;
    std::map<mpz_class, std::vector<int>> half;
    enumerate_signs(q, 0, na, [&](const mpz_class& s, const std::vector<int>& b) {
      auto it = half.find(s);
      if (it == half.end())
        half.emplace(s, b);
      else if (!nonzero(it->second) && nonzero(b))
        it->second = b;
    });
    bool found = false;
    enumerate_signs(q, na, nb, [&](const mpz_class& s, const std::vector<int>& b) {
      if (found) return;
      auto it = half.find(-s);
      if (it == half.end()) return;
      if (!nonzero(b) && !nonzero(it->second)) return;
      z.witness = it->second;
      z.witness.insert(z.witness.end(), b.begin(), b.end());
      found = true;
    });
    z.pass = !found;
    return z;
  }
  z.method = "dominance";
  mpz_class prefix = 0;
  bool dominated = true;
  for (const auto& x : q) {
    if (x <= prefix) dominated = false;
    prefix += x;
  }
  z.pass = dominated;
  z.conclusive = dominated;
  return z;
}

std::complex<double> cosine_product_integral(const LacunaryRow& row, double t, std::size_t max_terms) {
  const std::size_t u = row.size();
  if (u > max_terms) throw PreconditionError("exact expansion limited to " + std::to_string(max_terms) + " terms");
  std::vector<std::complex<double>> up(u), down(u);
  for (std::size_t k = 0; k < u; ++k) {
    std::complex<double> h(0.0, 0.5 * t * row.c[k]);
    up[k] = h * std::polar(1.0, row.r[k]);
    down[k] = h * std::polar(1.0, -row.r[k]);
  }
  const std::size_t na = u / 2, nb = u - na;
  auto weight = [&](std::size_t first, const std::vector<int>& b) {
    std::complex<double> w = 1.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (b[k] == 1) w *= up[first + k];
      if (b[k] == -1) w *= down[first + k];
    }
    return w;
  };
  std::map<mpz_class, std::complex<double>> half;
  enumerate_signs(row.q, 0, na, [&](const mpz_class& s, const std::vector<int>& b) { half[s] += weight(0, b); });
  std::complex<double> total = 0.0;
  enumerate_signs(row.q, na, nb, [&](const mpz_class& s, const std::vector<int>& b) {
    auto it = half.find(-s);
    if (it != half.end()) total += it->second * weight(na, b);
  });
  return total;
}

LacunaryArray birkhoff_to_lacunary(const BirkhoffPlan& plan) {
  if (plan.kind != BirkhoffPlan::Kind::MultiFrequency)
    throw PreconditionError("lacunary rows come from multi-frequency plans");
  LacunaryArray a;
  a.target = plan.variance_target;
  a.delta = plan.delta;
  int last = -1;
  for (const auto& e : plan.entries) {
    if (e.window.empty() || e.window.front() <= last) throw PreconditionError("plan windows overlap");
    last = e.window.back();
    LacunaryRow row;
    row.q = e.wq;
    row.c = e.d;
    row.r = e.r;
    a.rows.push_back(std::move(row));
  }
  return a;
}

}  // namespace sfw
