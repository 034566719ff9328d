#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sfw/birkhoff.hpp"
#include "sfw/cohomology.hpp"
#include "sfw/config.hpp"
#include "sfw/diophantine.hpp"
#include "sfw/errors.hpp"
#include "sfw/lacunary.hpp"
#include "sfw/report.hpp"
#include "sfw/roof.hpp"

using namespace sfw;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitPrecondition = 4;
constexpr int kExitIo = 5;

// Raised for plan construction problems, with a remediation hint.
struct PlanFailure : std::runtime_error {
  PlanFailure(const std::string& what, std::string hint) : std::runtime_error(what), hint(std::move(hint)) {}
  std::string hint;
};

class Stopwatch {
 public:
  explicit Stopwatch(json& sink) : sink_(sink), t0_(clock::now()), last_(t0_) {}
  void lap(const std::string& name) {
    auto t = clock::now();
    sink_[name] = std::chrono::duration<double>(t - last_).count();
    last_ = t;
  }
  void total() { sink_["total"] = std::chrono::duration<double>(clock::now() - t0_).count(); }

 private:
  using clock = std::chrono::steady_clock;
  json& sink_;
  clock::time_point t0_, last_;
};

int classify_exit(Outcome o) {
  switch (o) {
    case Outcome::DiscreteL2Conjugate: return 0;
    case Outcome::WeakMixingSingleFrequency: return 10;
    case Outcome::WeakMixingMultiFrequency: return 11;
    case Outcome::Undecided: return 20;
  }
  return 20;
}

int certificate_exit(const std::string& status) {
  if (status == "PASS") return 0;
  if (status == "REFUTED") return 12;
  return 20;
}

std::string yes(bool b) { return b ? "1" : "0"; }

std::string big_cell(const mpz_class& z) {
  json j = big_json(z);
  return j.is_string() ? j.get<std::string>() : std::to_string(j.get<long>());
}

QuadratureSettings quadrature(const ExperimentConfig& c) {
  QuadratureSettings q;
  q.tol = c.grids.quad_tol;
  q.min_grid = c.grids.min_grid;
  q.max_grid = c.grids.max_grid;
  q.samples = c.grids.samples;
  q.seed = c.seed;
  return q;
}

void add_table(Report& r, CsvTable t) { r.tables.push_back(std::move(t)); }

Report cmd_alpha(const ExperimentConfig& c) {
  Report r;
  r.command = "alpha";
  r.config = c;
  Stopwatch sw(r.timings);
  RotationNumber alpha = make_alpha(c);
  json res;
  res["quotients"] = make_quotients(c.alpha).describe();
  std::size_t N = static_cast<std::size_t>(c.horizons.convergents);
  json warnings = json::array();
  if (N > alpha.size()) {
    warnings.push_back("only " + std::to_string(alpha.size()) + " convergents are materialised at this precision");
    N = alpha.size();
  }
  CsvTable t{"convergents", {"n", "a_n", "p", "q", "theta_log2", "resolved", "theta_lower_ok", "theta_upper_ok"}, {}};
  json conv = json::array();
  for (const Convergent& cv : convergents(alpha, N)) {
    json j = to_json(cv);
    std::string lower = "", upper = "";
    // 1/(q_n + q_{n+1}) < ||q_n alpha|| <= 1/q_{n+1}, from n = 1.
    if (cv.n >= 1 && static_cast<std::size_t>(cv.n) + 1 < alpha.size() && cv.resolved) {
      const mpz_class& qn1 = alpha.q(cv.n + 1);
      const int prec = alpha.precision_bits();
      Real lo = Real(1L, prec) / Real(mpz_class(cv.q + qn1), prec, MPFR_RNDU);
      Real hi = Real(1L, prec) / Real(qn1, prec, MPFR_RNDD);
      bool lok = lo < cv.theta - cv.theta_err, hok = cv.theta + cv.theta_err <= hi;
      j["theta_bounds"] = {{"lower", lok}, {"upper", hok}};
      lower = yes(lok);
      upper = yes(hok);
    }
    std::string a = cv.n >= 1 ? (alpha.quotient(cv.n).exact ? big_cell(alpha.quotient(cv.n).value)
                                                             : "2^>" + fmt(alpha.quotient(cv.n).log2_lower))
                              : "";
    j["a"] = a;
    conv.push_back(j);
    t.rows.push_back({std::to_string(cv.n), a, big_cell(cv.p), big_cell(cv.q), fmt(cv.theta.log2_abs()),
                      yes(cv.resolved), lower, upper});
  }
  res["convergents"] = conv;
  add_table(r, std::move(t));
  sw.lap("convergents");
  GoodReturns g = good_returns(alpha, c.horizons.good_returns.value);
  res["good_returns"] = to_json(g);
  CsvTable gt{"good_returns", {"q", "l", "n", "l_bound_ok"}, {}};
  for (const auto& x : g.items) gt.rows.push_back({big_cell(x.q), big_cell(x.l), std::to_string(x.n), yes(x.l_bound_ok)});
  add_table(r, std::move(gt));
  sw.lap("good_returns");
  FrequencyClassM M = class_M(alpha, c.horizons.class_m.value);
  res["class_M"] = to_json(M);
  sw.lap("class_M");
  res["warnings"] = warnings;
  r.result = res;
  r.exit_code = 0;
  sw.total();
  return r;
}

Report cmd_hypcheck(const ExperimentConfig& c) {
  Report r;
  r.command = "hypcheck";
  r.config = c;
  Stopwatch sw(r.timings);
  RotationNumber alpha = make_alpha(c);
  FourierRoof phi = make_roof(c.roof, alpha);
  HypothesisReport h = check_hypotheses(phi, c.horizons.hypotheses);
  sw.lap("hypotheses");
  PositivityCertificate pos = certify_positive(phi);
  SmoothnessProxy sm = c3_proxy(phi, c.horizons.hypotheses);
  json res;
  res["roof"] = phi.name();
  res["hypotheses"] = to_json(h);
  res["positivity"] = {{"grid", pos.grid},         {"horizon", pos.horizon}, {"grid_min", pos.grid_min},
                       {"lower_bound", pos.lower_bound}, {"positive", pos.positive}};
  res["c3_proxy"] = {{"horizon", sm.horizon}, {"partial", sm.partial}, {"partial_half", sm.partial_half},
                     {"cauchy", sm.cauchy}};
  CsvTable t{"hypotheses", {"hypothesis", "verdict", "K", "m0", "witness"}, {}};
  t.rows.push_back({"H1", verdict_name(h.h1.verdict), fmt(h.h1.partial_sum), "", std::to_string(h.h1.witness)});
  t.rows.push_back({"H2", verdict_name(h.h2.verdict), fmt(h.h2.K), std::to_string(h.h2.m0), std::to_string(h.h2.witness)});
  t.rows.push_back({"H3", verdict_name(h.h3.verdict), fmt(h.h3.K), std::to_string(h.h3.m0), std::to_string(h.h3.witness)});
  add_table(r, std::move(t));
  r.result = res;
  const bool all = h.h1.verdict == Verdict::Pass && h.h2.verdict == Verdict::Pass && h.h3.verdict == Verdict::Pass;
  r.exit_code = all ? 0 : 1;
  sw.total();
  return r;
}

json reduction_summary(const FourierRoof& phi, const RotationNumber& alpha, const ExperimentConfig& c) {
  ReducedRoof rM = reduce_to_M(phi, alpha, c.horizons.classify.value, c.thresholds.dense_cap);
  json j = to_json(rM);
  ResidualCheck rc = verify_cohomology_residual(rM, alpha, c.grids.residual, c.horizons.dense);
  j["residual"] = {{"residual", rc.residual}, {"tail_bound", rc.tail_bound},
                   {"rounding_allowance", rc.rounding_allowance}, {"ok", rc.ok}};
  return j;
}

Report cmd_classify(const ExperimentConfig& c) {
  Report r;
  r.command = "classify";
  r.config = c;
  Stopwatch sw(r.timings);
  RotationNumber alpha = make_alpha(c);
  FourierRoof phi = make_roof(c.roof, alpha);
  DichotomyVerdict v = classify(phi, alpha, c.horizons.classify.value, c.thresholds);
  sw.lap("classify");
  json res;
  res["verdict"] = to_json(v);
  if (!v.constant_roof && v.outcome != Outcome::Undecided) {
    try {
      res["reduction"] = reduction_summary(phi, alpha, c);
    } catch (const PreconditionError& e) {
      res["reduction"] = {{"skipped", e.what()}};
    }
    sw.lap("reduction");
  }
  CsvTable t{"ratios", {"m", "n", "ratio_log2", "square_growth"}, {}};
  for (const auto& x : v.ratios)
    t.rows.push_back({big_cell(x.m), std::to_string(x.n), fmt(x.ratio_log2), yes(x.square_growth)});
  add_table(r, std::move(t));
  CsvTable l2{"l2_checkpoints", {"H", "partial"}, {}};
  if (!v.constant_roof) {
    TransferCoefficients tc = formal_transfer(phi, alpha, c.horizons.classify.value, c.thresholds.dense_cap);
    for (const auto& cp : tc.checkpoints) l2.rows.push_back({big_cell(cp.H), fmt(cp.partial)});
    sw.lap("transfer_table");
  }
  add_table(r, std::move(l2));
  r.result = res;
  r.exit_code = classify_exit(v.outcome);
  sw.total();
  return r;
}

struct PlanBundle {
  DichotomyVerdict verdict;
  BirkhoffPlan plan;
  std::optional<ReducedRoof> rM, r2;
};

PlanBundle build_plan(const ExperimentConfig& c, const FourierRoof& phi, const RotationNumber& alpha) {
  PlanBundle b;
  const mpz_class& H = c.horizons.classify.value;
  b.verdict = classify(phi, alpha, H, c.thresholds);
  std::string kind = c.plan.kind;
  if (kind == "auto") {
    if (b.verdict.outcome == Outcome::WeakMixingSingleFrequency)
      kind = "single";
    else if (b.verdict.outcome == Outcome::WeakMixingMultiFrequency)
      kind = "multi";
    else
      kind = "return_times";
  }
  try {
    if (kind == "single") {
      b.rM = reduce_to_M(phi, alpha, H, c.thresholds.dense_cap);
      b.plan = make_single_frequency_plan(alpha, b.verdict, static_cast<std::size_t>(c.plan.count));
    } else if (kind == "multi") {
      b.rM = reduce_to_M(phi, alpha, H, c.thresholds.dense_cap);
      b.r2 = reduce_to_best_returns(*b.rM, phi, alpha, b.verdict.hyp.h1, c.thresholds.k3_cap);
      b.plan = make_multi_frequency_plan(alpha, *b.r2, c.plan.variance_target, c.plan.delta, c.plan.first_index);
    } else {
      b.plan = make_return_time_plan(alpha, c.plan.from, c.plan.to);
    }
  } catch (const PreconditionError& e) {
    throw PlanFailure(std::string("plan construction failed: ") + e.what(),
                      "classify reports " + std::string(outcome_name(b.verdict.outcome)) +
                          "; set plan.kind to match it, or raise horizons.classify / precision_bits");
  } catch (const InsufficientQuotients& e) {
    throw PlanFailure(e.what(), "raise precision_bits or lower plan.count / plan.to");
  }
  return b;
}

Report cmd_wmtest(const ExperimentConfig& c) {
  Report r;
  r.command = "wmtest";
  r.config = c;
  Stopwatch sw(r.timings);
  RotationNumber alpha = make_alpha(c);
  FourierRoof phi = make_roof(c.roof, alpha);
  PlanBundle b = build_plan(c, phi, alpha);
  const BirkhoffPlan& plan = b.plan;
  sw.lap("plan");
  json res;
  res["verdict"] = {{"outcome", outcome_name(b.verdict.outcome)}, {"reason", b.verdict.reason}};
  res["plan"] = to_json(plan);
  Spectrum full = spectrum_of(phi, alpha, c.horizons.dense, c.horizons.classify.value);
  const double K1 = b.verdict.hyp.h2.K, K2 = b.verdict.hyp.h3.K;

  double lambda_min = c.lambda.min;
  json ranges = json::array();
  if (plan.kind == BirkhoffPlan::Kind::SingleFrequency) {
    Spectrum reduced = spectrum_of(*b.rM);
    double derived = 0.0;
    for (const auto& e : plan.entries) {
      RangeMeasure m = range_derivative_measure(e, multiples_of(reduced, e.q), alpha, 1.0, K1, K2, c.grids.range);
      ranges.push_back(to_json(m));
      derived = std::max(derived, 4.0 / m.R);
    }
    if (lambda_min == 0.0) lambda_min = derived;
  } else if (lambda_min == 0.0) {
    lambda_min = 1.0;
  }
  res["lambda_min"] = finite_or_null(lambda_min);
  res["ranges_at_lambda_1"] = ranges;
  sw.lap("lambda_min");

  std::vector<double> lambdas = c.lambda.values;
  if (lambdas.empty()) {
    if (plan.kind == BirkhoffPlan::Kind::ReturnTimes)
      lambdas = {lambda_min};
    else
      lambdas = lambda_grid(lambda_min, full.c0, c.lambda.count, c.lambda.span, c.lambda.probes);
  }

  CsvTable checks{"lambda_checks", {"lambda", "n", "approx_sup", "approx_ok", "R", "measure", "measure_lower",
                                    "below_threshold", "R_ok", "measure_ok"},
                  {}};
  if (plan.kind == BirkhoffPlan::Kind::SingleFrequency) {
    json reps = json::array();
    for (double lam : lambdas) {
      LambdaRepresentative rep = lambda_representative(*b.rM, lam);
      json jr = {{"lambda", lam},
                 {"dropped", json::array()},
                 {"certificate_sum", rep.certificate_sum},
                 {"certificate_bound", rep.certificate_bound}};
      for (const auto& m : rep.dropped) jr["dropped"].push_back(big_json(m));
      json l7 = json::array(), rm = json::array();
      for (const auto& e : plan.entries) {
        ApproximationCheck lc = approximation_check(e, rep, alpha, c.grids.approximation);
        RangeMeasure m = range_derivative_measure(e, multiples_of(rep.spectrum, e.q), alpha, lam, K1, K2, c.grids.range);
        l7.push_back(to_json(lc));
        rm.push_back(to_json(m));
        checks.rows.push_back({fmt(lam), std::to_string(e.n), fmt(lc.grid_sup), yes(lc.ok), fmt(m.R), fmt(m.measure),
                               fmt(m.measure_lower), yes(m.below_threshold), yes(m.R_ok), yes(m.measure_ok)});
      }
      jr["approximation"] = l7;
      jr["range_measure"] = rm;
      reps.push_back(jr);
    }
    res["lambda_representatives"] = reps;
    add_table(r, std::move(checks));
    sw.lap("lambda_checks");
  }

  if (plan.kind == BirkhoffPlan::Kind::MultiFrequency) {
    std::vector<DeltaValue> dv = delta_n(plan, spectrum_of(*b.r2), alpha, c.grids.delta);
    json d = json::array();
    CsvTable dt{"delta", {"n", "grid_sup", "grid_sup_log2", "l1_bound"}, {}};
    for (const auto& x : dv) {
      d.push_back(to_json(x));
      dt.rows.push_back({std::to_string(x.n), fmt(x.grid_sup), fmt(x.grid_sup_log2), fmt(x.l1_bound)});
    }
    res["delta"] = d;
    add_table(r, std::move(dt));
    LacunaryArray arr = birkhoff_to_lacunary(plan);
    json rows = json::array();
    for (const auto& row : arr.rows) rows.push_back(to_json(check_row(row, arr.target, arr.delta)));
    res["lacunary_rows"] = rows;
    res["lacunary_maxima_decreasing"] = maxima_decreasing(arr);
    sw.lap("delta");
  }

  CertificateSettings cs;
  cs.floor = c.certificate.floor;
  cs.refute_ceiling = c.certificate.refute_ceiling;
  cs.lambda_min = lambda_min;
  cs.quad = quadrature(c);
  cs.ks_samples = c.grids.ks_samples;
  std::vector<Spectrum> spectra(lambdas.size(), full);
  Certificate cert = weak_mixing_certificate(plan, lambdas, spectra, alpha, cs);
  sw.lap("certificate");
  res["certificate"] = to_json(cert);
  CsvTable it{"criterion", {"lambda", "n", "m", "norm_log2", "z", "integral", "error", "method", "points"}, {}};
  for (const auto& lo : cert.lambdas)
    for (const auto& v : lo.values)
      it.rows.push_back({fmt(v.lambda), std::to_string(v.n), big_cell(v.m), fmt(v.norm_log2), fmt(v.z),
                         fmt(v.integral), fmt(v.error), v.method, std::to_string(v.points)});
  add_table(r, std::move(it));
  r.result = res;
  r.exit_code = certificate_exit(cert.status);
  sw.total();
  return r;
}

std::vector<double> t_grid(const CltSpec& s) {
  std::vector<double> t;
  if (s.t_points == 1) return {s.t_max};
  for (int i = 0; i < s.t_points; ++i) t.push_back(-s.t_max + 2.0 * s.t_max * i / (s.t_points - 1));
  return t;
}

Report cmd_clt(const ExperimentConfig& c) {
  Report r;
  r.command = "clt";
  r.config = c;
  Stopwatch sw(r.timings);
  std::vector<std::pair<std::string, LacunaryRow>> rows;
  json res;
  double target = 0.0, delta = 0.05;
  if (c.clt.source == "synthetic") {
    for (int u : c.clt.u) rows.emplace_back("u=" + std::to_string(u), synthetic_row(u));
    target = 2.0;
    delta = 1e-9;
  } else {
    RotationNumber alpha = make_alpha(c);
    FourierRoof phi = make_roof(c.roof, alpha);
    PlanBundle b = build_plan(c, phi, alpha);
    if (b.plan.kind != BirkhoffPlan::Kind::MultiFrequency)
      throw PlanFailure("lacunary rows come from multi-frequency plans",
                        "classify reports " + std::string(outcome_name(b.verdict.outcome)) + "; use clt.source = synthetic");
    LacunaryArray arr = birkhoff_to_lacunary(b.plan);
    for (std::size_t i = 0; i < arr.rows.size(); ++i) rows.emplace_back("n=" + std::to_string(i), arr.rows[i]);
    target = arr.target;
    delta = arr.delta;
    res["plan"] = to_json(b.plan);
    res["maxima_decreasing"] = maxima_decreasing(arr);
    sw.lap("plan");
  }
  const std::vector<double> ts = t_grid(c.clt);
  json out = json::array();
  CsvTable ks{"ks", {"row", "terms", "ks", "mean", "variance", "target_variance", "char_sup", "char_method"}, {}};
  CsvTable ch{"char", {"row", "t", "re", "im", "target"}, {}};
  CsvTable dump{"samples", {"row", "index", "value"}, {}};
  double prev_ks = std::numeric_limits<double>::infinity();
  bool trend = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [label, row] = rows[i];
    double v = 0.0;
    for (double x : row.c) v += 0.5 * x * x;
    EmpiricalDistribution d = sample_row(row, c.clt.samples, sub_seed(c.seed, i));
    const double D = ks_against_normal(d, 0.0, v);
    trend = trend && D <= prev_ks + 0.01;
    prev_ks = std::min(prev_ks, D);
    CharTable cf = characteristic_function(row, ts, v, c.clt.samples, sub_seed(c.seed, 100 + i));
    ZeroRepresentation z = zero_representation_check(row.q);
    RowCheck rc = check_row(row, target, delta);
    json j = {{"row", label},
              {"terms", row.size()},
              {"ks", D},
              {"mean", d.mean},
              {"variance", d.variance},
              {"target_variance", v},
              {"char", to_json(cf)},
              {"zero_representation", to_json(z)},
              {"row_check", to_json(rc)}};
    if (row.size() <= 12) {
      json cp = json::array();
      for (double t : {0.5, 1.0, 2.0}) {
        std::complex<double> w = cosine_product_integral(row, t);
        cp.push_back({{"t", t}, {"re", w.real()}, {"im", w.imag()}, {"deviation", std::abs(w - 1.0)}});
      }
      j["cosine_product"] = cp;
    }
    out.push_back(j);
    ks.rows.push_back({label, std::to_string(row.size()), fmt(D), fmt(d.mean), fmt(d.variance), fmt(v),
                       fmt(cf.sup_distance), cf.method});
    for (const auto& x : cf.values)
      ch.rows.push_back({label, fmt(x.t), fmt(x.value.real()), fmt(x.value.imag()), fmt(x.target)});
    for (long k = 0; k < c.clt.dump && k < d.count; ++k)
      dump.rows.push_back({label, std::to_string(k), fmt(d.samples[static_cast<std::size_t>(k)])});
    sw.lap(label);
  }
  res["rows"] = out;
  res["ks_nonincreasing_within_0.01"] = trend;
  add_table(r, std::move(ks));
  add_table(r, std::move(ch));
  if (c.clt.dump > 0) add_table(r, std::move(dump));
  r.result = res;
  r.exit_code = 0;
  sw.total();
  return r;
}

void summarize(const Report& r, const std::vector<std::string>& paths) {
  const json& res = r.result;
  if (r.command == "classify") std::cout << "outcome: " << res["verdict"]["outcome"].get<std::string>() << "\n";
  if (r.command == "wmtest") std::cout << "certificate: " << res["certificate"]["status"].get<std::string>() << "\n";
  if (r.command == "hypcheck") {
    const json& h = res["hypotheses"];
    std::cout << "H1 " << h["H1"]["verdict"].get<std::string>() << ", H2 " << h["H2"]["verdict"].get<std::string>()
              << ", H3 " << h["H3"]["verdict"].get<std::string>() << "\n";
  }
  for (const auto& p : paths) std::cout << "wrote " << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"special flows over circle rotations: classification and weak mixing certificates"};
  app.require_subcommand(1);
  std::string config_path, out_dir, emit;
  std::optional<int> precision;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--precision", precision, "working precision in bits");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--emit", emit, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  app.fallthrough();
  auto* a = app.add_subcommand("alpha", "convergents, qualities, good returns, class M");
  auto* h = app.add_subcommand("hypcheck", "check hypotheses H1-H3 for the roof");
  auto* k = app.add_subcommand("classify", "dichotomy verdict for (alpha, roof)");
  auto* w = app.add_subcommand("wmtest", "plans, criterion integrals and the weak mixing certificate");
  auto* l = app.add_subcommand("clt", "lacunary rows against the normal law");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    ExperimentConfig c;
    if (!config_path.empty()) c = load_config(config_path);
    json j = to_json(c);
    if (precision) j["precision_bits"] = *precision;
    if (seed) j["seed"] = *seed;
    if (!out_dir.empty()) j["output"]["dir"] = out_dir;
    if (!emit.empty()) j["output"]["emit"] = emit;
    c = parse_config(j);

    Report r;
    if (a->parsed()) r = cmd_alpha(c);
    if (h->parsed()) r = cmd_hypcheck(c);
    if (k->parsed()) r = cmd_classify(c);
    if (w->parsed()) r = cmd_wmtest(c);
    if (l->parsed()) r = cmd_clt(c);
    std::vector<std::string> paths;
    try {
      paths = emit_report(r);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitIo;
    }
    summarize(r, paths);
    return r.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "error: " << e.what() << "\nhint: raise --precision\n";
    return kExitPrecision;
  } catch (const PlanFailure& e) {
    std::cerr << "error: " << e.what() << "\nhint: " << e.hint << "\n";
    return kExitPrecondition;
  } catch (const InsufficientQuotients& e) {
    std::cerr << "error: " << e.what() << "\nhint: raise --precision or lower the horizons\n";
    return kExitPrecondition;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
}
