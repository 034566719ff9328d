#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "json.hpp"
#include "sfw/birkhoff.hpp"
#include "sfw/cohomology.hpp"
#include "sfw/config.hpp"
#include "sfw/diophantine.hpp"
#include "sfw/lacunary.hpp"
#include "sfw/roof.hpp"

namespace sfw {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string command;
  ExperimentConfig config;
  nlohmann::json result;
  int exit_code = 0;
  std::vector<CsvTable> tables;
  nlohmann::json timings = nlohmann::json::object();  // kept out of the report body
};

nlohmann::json report_json(const Report& r);

// Writes path.tmp and renames it over path. The temp file is removed on failure.
void write_atomic(const std::string& path, const std::string& content);
std::string csv_text(const CsvTable& t);

// <dir>/<command>.json and/or <dir>/<command>_<table>.csv, plus <dir>/<command>.timings.json.
// Returns the written paths.
std::vector<std::string> emit_report(const Report& r);

// Decimal when short, otherwise a "2^x" summary.
nlohmann::json big_json(const mpz_class& z);
std::string fmt(double x);
nlohmann::json finite_or_null(double x);

nlohmann::json to_json(const Convergent& c);
nlohmann::json to_json(const GoodReturns& g);
nlohmann::json to_json(const FrequencyClassM& m);
nlohmann::json to_json(const HypothesisReport& h);
nlohmann::json to_json(const L2Result& l);
nlohmann::json to_json(const ReducedRoof& r);
nlohmann::json to_json(const DichotomyVerdict& v);
nlohmann::json to_json(const BirkhoffPlan& p);
nlohmann::json to_json(const CriterionValue& v);
nlohmann::json to_json(const RangeMeasure& m);
nlohmann::json to_json(const ApproximationCheck& c);
nlohmann::json to_json(const DeltaValue& d);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const RowCheck& r);
nlohmann::json to_json(const CharTable& t);
nlohmann::json to_json(const ZeroRepresentation& z);

}  // namespace sfw
