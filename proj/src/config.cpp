#include "sfw/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sfw/errors.hpp"

namespace sfw {

using nlohmann::json;

namespace {

// Reads fields from one JSON object and rejects keys nobody asked for.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

  template <typename T>
  void get(const std::string& key, T& out) {
    const json* v = find(key);
    if (!v) return;
    try {
      out = v->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path(key) + ": wrong type");
    }
  }

  void get_number(const std::string& key, double& out, double lo, double hi) {
    const json* v = find(key);
    if (!v) return;
    if (!v->is_number()) throw ConfigError(path(key) + ": expected a number");
    out = v->get<double>();
    if (!(out >= lo && out <= hi)) throw ConfigError(path(key) + ": out of range [" + num(lo) + ", " + num(hi) + "]");
  }

  template <typename I>
  void get_int(const std::string& key, I& out, long long lo, long long hi) {
    const json* v = find(key);
    if (!v) return;
    if (!v->is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
    long long x = v->get<long long>();
    if (x < lo || x > hi) throw ConfigError(path(key) + ": out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out = static_cast<I>(x);
  }

  void get_choice(const std::string& key, std::string& out, std::initializer_list<const char*> allowed) {
    get(key, out);
    for (const char* a : allowed)
      if (out == a) return;
    throw ConfigError(path(key) + ": unknown value \"" + out + "\"");
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown key: " + path(it.key()));
  }

 private:
  static std::string num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

std::vector<mpz_class> big_list(const json* v, const std::string& where) {
  if (!v->is_array()) throw ConfigError(where + ": expected an array");
  std::vector<mpz_class> out;
  for (const auto& x : *v) out.push_back(parse_big(x, where).value);
  return out;
}

json big_list_json(const std::vector<mpz_class>& v) {
  json a = json::array();
  for (const auto& x : v) {
    if (x.fits_slong_p())
      a.push_back(x.get_si());
    else
      a.push_back(x.get_str());
  }
  return a;
}

json big_json(const BigHorizon& h) {
  if (h.value.fits_slong_p() && h.text == h.value.get_str()) return h.value.get_si();
  return h.text;
}

void parse_alpha(Fields& f, AlphaSpec& a) {
  f.get_choice("kind", a.kind, {"quotients", "periodic", "rule", "euler"});
  if (const json* v = f.find("quotients")) a.quotients = big_list(v, f.path("quotients"));
  if (const json* v = f.find("prefix")) a.prefix = big_list(v, f.path("prefix"));
  if (const json* v = f.find("period")) a.period = big_list(v, f.path("period"));
  f.get_choice("rule", a.rule, {"pow2", "power"});
  if (const json* v = f.find("seed")) a.seed = big_list(v, f.path("seed"));
  f.get_int("exponent", a.exponent, 0, 64);
  f.get_int("offset", a.offset, 0, 1L << 30);
  f.finish();
  if (a.kind == "quotients" && a.quotients.size() < 2) throw ConfigError("alpha.quotients: needs a_0 and at least one a_k");
  if (a.kind == "periodic" && (a.prefix.empty() || a.period.empty()))
    throw ConfigError("alpha: periodic needs a non-empty prefix (with a_0) and period");
  auto positive = [](const std::vector<mpz_class>& v, std::size_t from, const char* what) {
    for (std::size_t k = from; k < v.size(); ++k)
      if (v[k] < 1) throw ConfigError(std::string("alpha.") + what + ": partial quotients a_k (k >= 1) must be >= 1");
  };
  if (a.kind == "quotients") positive(a.quotients, 1, "quotients");
  if (a.kind == "periodic") {
    positive(a.prefix, 1, "prefix");
    positive(a.period, 0, "period");
  }
  if (a.kind == "rule") positive(a.seed, 1, "seed");
}

void parse_roof(Fields& f, RoofSpec& r) {
  f.get_choice("kind", r.kind, {"constant", "dyadic", "prime", "expdecay", "table", "resonant"});
  f.get_number("c0", r.c0, -1e12, 1e12);
  f.get_number("scale", r.scale, 0, 1e12);
  f.get_number("exponent", r.exponent, 0, 1e3);
  f.get_number("C1", r.C1, 0, 1e12);
  f.get_number("C2", r.C2, 0, 1e12);
  f.get_number("k1", r.k1, 0, 1e3);
  f.get_number("k2", r.k2, 0, 1e3);
  f.get_choice("profile", r.profile, {"lower", "alternating"});
  f.get("name", r.name);
  if (const json* v = f.find("entries")) {
    if (!v->is_array()) throw ConfigError("roof.entries: expected an array of [m, re, im]");
    r.entries.clear();
    for (const auto& e : *v) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3 || !e[0].is_number_integer() || !e[1].is_number() ||
          (e.size() == 3 && !e[2].is_number()))
        throw ConfigError("roof.entries: each entry is [m, re] or [m, re, im] with integer m");
      long m = e[0].get<long>();
      if (m == 0) throw ConfigError("roof.entries: m = 0 belongs in c0");
      r.entries.emplace_back(m, std::complex<double>(e[1].get<double>(), e.size() == 3 ? e[2].get<double>() : 0.0));
    }
  }
  if (const json* v = f.find("rho")) {
    if (!v->is_array()) throw ConfigError("roof.rho: expected an array");
    r.rho.clear();
    for (const auto& x : *v) {
      if (!x.is_number() || !(x.get<double>() >= 0)) throw ConfigError("roof.rho: entries must be numbers >= 0");
      r.rho.push_back(x.get<double>());
    }
  }
  f.get_int("k_start", r.k_start, 1, 1000);
  f.finish();
}

}  // namespace

BigHorizon parse_big(const json& j, const std::string& where) {
  BigHorizon h;
  if (j.is_number_integer()) {
    h.value = mpz_class(std::to_string(j.get<long long>()));
    h.text = h.value.get_str();
    return h;
  }
  if (!j.is_string()) throw ConfigError(where + ": expected an integer or a string such as \"2^20000\"");
  h.text = j.get<std::string>();
  const auto caret = h.text.find('^');
  try {
    if (caret == std::string::npos) {
      h.value = mpz_class(h.text, 10);
    } else {
      mpz_class base(h.text.substr(0, caret), 10);
      unsigned long e = std::stoul(h.text.substr(caret + 1));
      if (e > (1UL << 24)) throw ConfigError(where + ": exponent too large");
      mpz_pow_ui(h.value.get_mpz_t(), base.get_mpz_t(), e);
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError(where + ": cannot parse \"" + h.text + "\"");
  } catch (const std::out_of_range&) {
    throw ConfigError(where + ": cannot parse \"" + h.text + "\"");
  }
  return h;
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  Fields top(j, "");
  if (const json* v = top.find("alpha")) {
    Fields f(*v, "alpha");
    parse_alpha(f, c.alpha);
  }
  if (const json* v = top.find("roof")) {
    Fields f(*v, "roof");
    parse_roof(f, c.roof);
  }
  if (const json* v = top.find("horizons")) {
    Fields f(*v, "horizons");
    auto big = [&](const char* key, BigHorizon& out) {
      if (const json* b = f.find(key)) {
        out = parse_big(*b, f.path(key));
        if (out.value < 1) throw ConfigError(f.path(key) + ": must be >= 1");
      }
    };
    big("classify", c.horizons.classify);
    f.get_int("hypotheses", c.horizons.hypotheses, 8, 1L << 16);
    f.get_int("convergents", c.horizons.convergents, 1, 400);
    big("good_returns", c.horizons.good_returns);
    big("class_m", c.horizons.class_m);
    f.get_int("dense", c.horizons.dense, 1, 1L << 16);
    f.finish();
  }
  top.get_int("precision_bits", c.precision_bits, 64, 1 << 22);
  if (const json* v = top.find("lambda")) {
    Fields f(*v, "lambda");
    if (const json* vals = f.find("values")) {
      if (!vals->is_array()) throw ConfigError("lambda.values: expected an array");
      for (const auto& x : *vals) {
        if (!x.is_number()) throw ConfigError("lambda.values: entries must be numbers");
        double l = x.get<double>();
        if (l == 0.0) throw ConfigError("lambda.values: lambda = 0 is the trivial eigenvalue and cannot be tested");
        if (!std::isfinite(l) || std::fabs(l) > 1e9) throw ConfigError("lambda.values: out of range");
        c.lambda.values.push_back(l);
      }
    }
    f.get_number("min", c.lambda.min, 0, 1e9);
    f.get_int("count", c.lambda.count, 1, 256);
    f.get_number("span", c.lambda.span, 1, 1e6);
    f.get_int("probes", c.lambda.probes, 0, 64);
    f.finish();
  }
  if (const json* v = top.find("plan")) {
    Fields f(*v, "plan");
    f.get_choice("kind", c.plan.kind, {"auto", "single", "multi", "return_times"});
    f.get_int("count", c.plan.count, 0, 64);
    f.get_number("variance_target", c.plan.variance_target, 1e-6, 1e6);
    f.get_number("delta", c.plan.delta, 0, 0.5);
    f.get_int("first_index", c.plan.first_index, 0, 400);
    f.get_int("from", c.plan.from, 0, 400);
    f.get_int("to", c.plan.to, 0, 400);
    f.finish();
    if (c.plan.to < c.plan.from) throw ConfigError("plan: to must be >= from");
  }
  if (const json* v = top.find("grids")) {
    Fields f(*v, "grids");
    f.get_int("direct", c.grids.direct, 1, 1L << 16);
    f.get_int("approximation", c.grids.approximation, 16, 1L << 22);
    f.get_int("delta", c.grids.delta, 16, 1L << 22);
    f.get_int("range", c.grids.range, 1L << 10, 1L << 26);
    f.get_int("residual", c.grids.residual, 16, 1L << 22);
    f.get_number("quad_tol", c.grids.quad_tol, 1e-12, 0.5);
    f.get_int("min_grid", c.grids.min_grid, 16, 1L << 26);
    f.get_int("max_grid", c.grids.max_grid, 16, 1L << 26);
    f.get_int("samples", c.grids.samples, 1000, 1L << 26);
    f.get_int("ks_samples", c.grids.ks_samples, 1000, 1L << 26);
    f.finish();
    if (c.grids.max_grid < c.grids.min_grid) throw ConfigError("grids: max_grid must be >= min_grid");
  }
  if (const json* v = top.find("seed")) {
    if (!v->is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    c.seed = v->get<std::uint64_t>();
  }
  if (const json* v = top.find("thresholds")) {
    Fields f(*v, "thresholds");
    f.get_number("l2_tol", c.thresholds.l2_tol, 1e-30, 1);
    f.get_number("divergence_floor", c.thresholds.divergence_floor, 1e-30, 1e6);
    f.get_number("ratio_floor", c.thresholds.ratio_floor, 0, 1e6);
    f.get_number("k3_cap", c.thresholds.k3_cap, 0, 1e300);
    f.get_int("dense_cap", c.thresholds.dense_cap, 16, 1L << 22);
    f.get_number("floor", c.certificate.floor, 0, 0.5);
    f.get_number("refute_ceiling", c.certificate.refute_ceiling, 0, 0.5);
    f.finish();
    if (c.thresholds.divergence_floor <= c.thresholds.l2_tol)
      throw ConfigError("thresholds: divergence_floor must exceed l2_tol");
  }
  c.thresholds.hyp_horizon = c.horizons.hypotheses;
  if (const json* v = top.find("clt")) {
    Fields f(*v, "clt");
    f.get_choice("source", c.clt.source, {"synthetic", "plan"});
    if (const json* u = f.find("u")) {
      if (!u->is_array() || u->empty()) throw ConfigError("clt.u: expected a non-empty array");
      c.clt.u.clear();
      for (const auto& x : *u) {
        if (!x.is_number_integer() || x.get<long>() < 1 || x.get<long>() > 4096)
          throw ConfigError("clt.u: entries must be integers in [1, 4096]");
        c.clt.u.push_back(x.get<int>());
      }
    }
    f.get_int("samples", c.clt.samples, 1000, 1L << 26);
    f.get_number("t_max", c.clt.t_max, 0, 100);
    f.get_int("t_points", c.clt.t_points, 1, 10000);
    f.get_int("dump", c.clt.dump, 0, 1L << 22);
    f.finish();
  }
  if (const json* v = top.find("output")) {
    Fields f(*v, "output");
    f.get("dir", c.output.dir);
    f.get_choice("emit", c.output.emit, {"json", "csv", "both"});
    f.finish();
  }
  top.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  const AlphaSpec& a = c.alpha;
  j["alpha"] = {{"kind", a.kind},           {"quotients", big_list_json(a.quotients)},
                {"prefix", big_list_json(a.prefix)}, {"period", big_list_json(a.period)},
                {"rule", a.rule},           {"seed", big_list_json(a.seed)},
                {"exponent", a.exponent},   {"offset", a.offset}};
  const RoofSpec& r = c.roof;
  json entries = json::array();
  for (const auto& [m, v] : r.entries) entries.push_back({m, v.real(), v.imag()});
  j["roof"] = {{"kind", r.kind}, {"c0", r.c0},   {"scale", r.scale},     {"exponent", r.exponent},
               {"C1", r.C1},     {"C2", r.C2},   {"k1", r.k1},           {"k2", r.k2},
               {"profile", r.profile}, {"name", r.name}, {"entries", entries}, {"rho", r.rho},
               {"k_start", r.k_start}};
  j["horizons"] = {{"classify", big_json(c.horizons.classify)},
                   {"hypotheses", c.horizons.hypotheses},
                   {"convergents", c.horizons.convergents},
                   {"good_returns", big_json(c.horizons.good_returns)},
                   {"class_m", big_json(c.horizons.class_m)},
                   {"dense", c.horizons.dense}};
  j["precision_bits"] = c.precision_bits;
  j["lambda"] = {{"values", c.lambda.values}, {"min", c.lambda.min}, {"count", c.lambda.count},
                 {"span", c.lambda.span},     {"probes", c.lambda.probes}};
  j["plan"] = {{"kind", c.plan.kind},   {"count", c.plan.count},         {"variance_target", c.plan.variance_target},
               {"delta", c.plan.delta}, {"first_index", c.plan.first_index}, {"from", c.plan.from},
               {"to", c.plan.to}};
  const Grids& g = c.grids;
  j["grids"] = {{"direct", g.direct},     {"approximation", g.approximation},     {"delta", g.delta},
                {"range", g.range},       {"residual", g.residual}, {"quad_tol", g.quad_tol},
                {"min_grid", g.min_grid}, {"max_grid", g.max_grid}, {"samples", g.samples},
                {"ks_samples", g.ks_samples}};
  j["seed"] = c.seed;
  j["thresholds"] = {{"l2_tol", c.thresholds.l2_tol},
                     {"divergence_floor", c.thresholds.divergence_floor},
                     {"ratio_floor", c.thresholds.ratio_floor},
                     {"k3_cap", c.thresholds.k3_cap},
                     {"dense_cap", c.thresholds.dense_cap},
                     {"floor", c.certificate.floor},
                     {"refute_ceiling", c.certificate.refute_ceiling}};
  j["clt"] = {{"source", c.clt.source}, {"u", c.clt.u},               {"samples", c.clt.samples},
              {"t_max", c.clt.t_max},   {"t_points", c.clt.t_points}, {"dump", c.clt.dump}};
  j["output"] = {{"dir", c.output.dir}, {"emit", c.output.emit}};
  return j;
}

PartialQuotients make_quotients(const AlphaSpec& a) {
  try {
    if (a.kind == "quotients") return PartialQuotients::finite(a.quotients);
    if (a.kind == "periodic") return PartialQuotients::periodic(a.prefix, a.period);
    if (a.kind == "euler") return PartialQuotients::euler();
    if (a.rule == "pow2") return PartialQuotients::pow2_growth(a.seed);
    return PartialQuotients::power_growth(a.seed, a.exponent, a.offset);
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("alpha: ") + e.what());
  }
}

RotationNumber make_alpha(const ExperimentConfig& c) {
  PartialQuotients pq = make_quotients(c.alpha);
  if (pq.is_growth_rule()) return make_liouville_alpha(pq, c.precision_bits);
  return RotationNumber(pq, c.precision_bits);
}

FourierRoof make_roof(const RoofSpec& r, const RotationNumber& alpha) {
  try {
    if (r.kind == "constant") return FourierRoof::constant(r.c0);
    if (r.kind == "dyadic") return FourierRoof::dyadic();
    if (r.kind == "prime") return FourierRoof::prime(r.c0, r.scale, r.exponent);
    if (r.kind == "expdecay") return FourierRoof::expdecay(r.c0, r.C1, r.C2, r.k1, r.k2, r.profile);
    if (r.kind == "table") return FourierRoof::table(r.c0, r.entries, r.name);
    return FourierRoof::resonant(alpha, r.c0, r.rho, r.k_start);
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("roof: ") + e.what());
  }
}

}  // namespace sfw
