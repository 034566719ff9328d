#include "sfw/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sfw/errors.hpp"
#include "sfw/phase.hpp"

namespace sfw {

using nlohmann::json;

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json big_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  if (mpz_sizeinbase(z.get_mpz_t(), 10) <= 80) return z.get_str();
  return (z < 0 ? "-2^" : "2^") + fmt(std::round(log2_mpz(abs(z)) * 1000) / 1000);
}

namespace {

json big_list(const std::vector<mpz_class>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(big_json(x));
  return a;
}

json ext_json(const ExtCoeff& c) {
  return {{"log2abs", finite_or_null(c.log2abs)}, {"arg", c.arg}};
}

json ratio_json(const RatioRow& r) {
  return {{"m", big_json(r.m)}, {"n", r.n}, {"ratio_log2", finite_or_null(r.ratio_log2)},
          {"square_growth", r.square_growth}};
}

json h23_json(const H23Report& h) {
  return {{"horizon", h.horizon}, {"K", h.K}, {"m0", h.m0}, {"witness", h.witness}, {"verdict", verdict_name(h.verdict)}};
}

json entry_json(const PlanEntry& e) {
  json d = json::array(), r = json::array();
  for (double x : e.d) d.push_back(x);
  for (double x : e.r) r.push_back(x);
  return {{"n", e.n},
          {"s", e.s},
          {"q", big_json(e.q)},
          {"q_next", big_json(e.q_next)},
          {"b", big_json(e.b)},
          {"m", big_json(e.m)},
          {"norm_log2", finite_or_null(e.norm_log2)},
          {"bound_log2", finite_or_null(e.bound_log2)},
          {"window", e.window},
          {"window_q", big_list(e.wq)},
          {"window_b", big_list(e.wb)},
          {"d", d},
          {"r", r},
          {"variance", e.variance}};
}

}  // namespace

json to_json(const Convergent& c) {
  return {{"n", c.n}, {"p", big_json(c.p)}, {"q", big_json(c.q)}, {"theta", c.theta.str(17)},
          {"theta_log2", finite_or_null(c.theta.log2_abs())}, {"resolved", c.resolved}};
}

json to_json(const GoodReturns& g) {
  json items = json::array();
  for (const auto& r : g.items)
    items.push_back({{"q", big_json(r.q)}, {"l", big_json(r.l)}, {"n", r.n}, {"l_bound_ok", r.l_bound_ok}});
  return {{"Q", big_json(g.Q)}, {"full_scan", g.full_scan}, {"items", items}};
}

json to_json(const FrequencyClassM& m) {
  json items = json::array();
  for (const auto& x : m.members) {
    const char* tag = x.tag == MMember::Tag::Zero ? "zero" : x.tag == MMember::Tag::BestReturn ? "best_return" : "multiple";
    items.push_back({{"m", big_json(x.m)},
                     {"tag", tag},
                     {"l", big_json(x.l)},
                     {"n", x.n},
                     {"norm_log2", finite_or_null(x.norm.log2_abs())},
                     {"factor_ok", x.factor_ok},
                     {"square_growth", x.square_growth}});
  }
  return {{"horizon", big_json(m.horizon)}, {"full_scan", m.full_scan}, {"truncated", m.truncated}, {"members", items}};
}

json to_json(const HypothesisReport& h) {
  return {{"horizon", h.horizon},
          {"H1",
           {{"horizon", h.h1.horizon},
            {"partial_sum", h.h1.partial_sum},
            {"tail_increment", h.h1.tail_increment},
            {"remainder_bound", h.h1.remainder_bound},
            {"m1_exempt", h.h1.m1_exempt},
            {"witness", h.h1.witness},
            {"verdict", verdict_name(h.h1.verdict)}}},
          {"H2", h23_json(h.h2)},
          {"H3", h23_json(h.h3)}};
}

json to_json(const L2Result& l) {
  return {{"kind", l2_kind_name(l.kind)}, {"tail_increment", l.tail_increment}, {"bound", finite_or_null(l.bound)},
          {"tail_from", big_json(l.tail_from)}, {"tolerance", l.tolerance}, {"divergence_floor", l.divergence_floor}};
}

json to_json(const ReducedRoof& r) {
  json kept = json::array();
  for (const auto& t : r.kept) kept.push_back({{"m", big_json(t.m)}, {"c", ext_json(t.c)}});
  return {{"stage", r.stage == ReducedRoof::Stage::M ? "M" : "best_returns"},
          {"c0", r.c0},
          {"horizon", big_json(r.horizon)},
          {"kept", kept},
          {"discarded", r.discarded.size()},
          {"xi_l2_bound", finite_or_null(r.xi_l2_bound)},
          {"K3", finite_or_null(r.K3)},
          {"identity", r.identity}};
}

json to_json(const DichotomyVerdict& v) {
  json ratios = json::array(), mprime = json::array(), blocks = json::array();
  for (const auto& r : v.ratios) ratios.push_back(ratio_json(r));
  for (const auto& r : v.mprime) mprime.push_back(ratio_json(r));
  for (const auto& b : v.blocks)
    blocks.push_back({{"first_rank", b.first_rank}, {"last_rank", b.last_rank}, {"complete", b.complete},
                      {"max_ratio", b.max_ratio}, {"sum_r2", b.sum_r2}});
  return {{"outcome", outcome_name(v.outcome)},
          {"reason", v.reason},
          {"horizon", big_json(v.horizon)},
          {"constant_roof", v.constant_roof},
          {"hypotheses", to_json(v.hyp)},
          {"l2", to_json(v.l2)},
          {"ratios", ratios},
          {"mprime", mprime},
          {"blocks", blocks},
          {"subsequence", v.subsequence},
          {"limsup_C", finite_or_null(v.limsup_C)},
          {"partial_r2", v.partial_r2}};
}

json to_json(const BirkhoffPlan& p) {
  json entries = json::array();
  for (const auto& e : p.entries) entries.push_back(entry_json(e));
  return {{"kind", plan_kind_name(p.kind)},
          {"entries", entries},
          {"warnings", p.warnings},
          {"variance_target", p.variance_target},
          {"delta", p.delta}};
}

json to_json(const CriterionValue& v) {
  return {{"n", v.n},          {"m", big_json(v.m)},       {"lambda", v.lambda},
          {"norm_log2", finite_or_null(v.norm_log2)},      {"z", v.z},
          {"integral", v.integral}, {"error", v.error},    {"method", v.method},
          {"points", v.points}};
}

json to_json(const RangeMeasure& m) {
  return {{"n", m.n},
          {"lambda", m.lambda},
          {"R", m.R},
          {"D_log2", finite_or_null(m.D_log2)},
          {"measure", m.measure},
          {"grid", m.grid},
          {"below_threshold", m.below_threshold},
          {"R_lower", m.R_lower},
          {"measure_lower", m.measure_lower},
          {"R_ok", m.R_ok},
          {"measure_ok", m.measure_ok}};
}

json to_json(const ApproximationCheck& c) {
  return {{"n", c.n}, {"grid_sup", c.grid_sup}, {"l1_bound", c.l1_bound}, {"ok", c.ok}};
}

json to_json(const DeltaValue& d) {
  return {{"n", d.n}, {"window", d.window}, {"grid_sup", d.grid_sup}, {"l1_bound", d.l1_bound},
          {"grid_sup_log2", finite_or_null(d.grid_sup_log2)}};
}

json to_json(const Certificate& c) {
  json lams = json::array();
  for (const auto& lo : c.lambdas) {
    json vals = json::array();
    for (const auto& v : lo.values) vals.push_back(to_json(v));
    lams.push_back({{"lambda", lo.lambda},
                    {"above_threshold", lo.above_threshold},
                    {"status", lo.status},
                    {"inf_lower", finite_or_null(lo.inf_lower)},
                    {"values", vals},
                    {"ks", lo.ks}});
  }
  return {{"status", c.status}, {"lambda_min", c.lambda_min}, {"lambdas", lams}};
}

json to_json(const RowCheck& r) {
  return {{"lacunary", r.lacunary}, {"normalized", r.normalized}, {"zero_free", r.zero_free},
          {"sum_c2", r.sum_c2},     {"max_c", r.max_c}};
}

json to_json(const CharTable& t) {
  json vals = json::array();
  for (const auto& v : t.values)
    vals.push_back({{"t", v.t}, {"re", v.value.real()}, {"im", v.value.imag()}, {"target", v.target},
                    {"distance", v.distance}});
  return {{"method", t.method}, {"points", t.points}, {"sup_distance", t.sup_distance}, {"values", vals}};
}

json to_json(const ZeroRepresentation& z) {
  return {{"pass", z.pass}, {"method", z.method}, {"conclusive", z.conclusive}, {"witness", z.witness}};
}

json report_json(const Report& r) {
  return {{"schema_version", kSchemaVersion},
          {"tool", "sfw"},
          {"version", kToolVersion},
          {"command", r.command},
          {"config", to_json(r.config)},
          {"result", r.result},
          {"exit_code", r.exit_code}};
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw std::runtime_error("write failed for " + tmp);
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + ": " + ec.message());
  }
}

std::string csv_text(const CsvTable& t) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      if (cells[i].find_first_of(",\"\n") != std::string::npos) {
        s += '"';
        for (char ch : cells[i]) s += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        s += '"';
      } else {
        s += cells[i];
      }
    }
    return s + "\n";
  };
  std::string out = line(t.header);
  for (const auto& row : t.rows) out += line(row);
  return out;
}

std::vector<std::string> emit_report(const Report& r) {
  namespace fs = std::filesystem;
  const std::string& dir = r.config.output.dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  std::vector<std::string> written;
  const std::string base = (fs::path(dir) / r.command).string();
  const std::string& emit = r.config.output.emit;
  if (emit == "json" || emit == "both") {
    write_atomic(base + ".json", report_json(r).dump(2) + "\n");
    written.push_back(base + ".json");
  }
  if (emit == "csv" || emit == "both") {
    for (const auto& t : r.tables) {
      const std::string p = base + "_" + t.name + ".csv";
      write_atomic(p, csv_text(t));
      written.push_back(p);
    }
  }
  write_atomic(base + ".timings.json", r.timings.dump(2) + "\n");
  written.push_back(base + ".timings.json");
  return written;
}

}  // namespace sfw
