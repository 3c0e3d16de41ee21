#include "rcbound/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rcbound/errors.hpp"

namespace rcb {

namespace {

const std::set<std::string> kScenarioKeys{
    "family", "theta0",   "estimator", "mode",       "pairing",    "q",          "psi",           "phi",
    "upper_norm", "n_grid", "reps",    "seed",       "p_grid",     "lambda_grid", "theta_grid", "hermite_degree",
    "outputs"};

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw UsageError("scenario key '" + key + "': " + what);
}

double get_number(const Json& v, const std::string& key) {
  if (!v.is_number()) bad(key, "expected a number");
  return v.get<double>();
}

std::string get_string(const Json& v, const std::string& key) {
  if (!v.is_string()) bad(key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_reals(const Json& v, const std::string& key) {
  if (v.is_string()) return parse_grid(v.get<std::string>());
  if (!v.is_array()) bad(key, "expected an array of numbers or a grid expression");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(get_number(e, key));
  return out;
}

// "auto" (or absent) keeps the grid empty, meaning the default grid clipped to
// the function support.
std::vector<double> get_grid(const Json& v, const std::string& key) {
  if (v.is_string() && v.get<std::string>() == "auto") return {};
  return get_reals(v, key);
}

Json grid_json(const std::vector<double>& g) {
  if (g.empty()) return "auto";
  return Json(g);
}

FunctionRef get_function(const Json& v, const std::string& key, const char* abscissa) {
  FunctionRef ref;
  if (v.is_null()) return ref;
  if (v.is_string()) {
    ref.expr = v.get<std::string>();
    if (ref.expr.empty()) bad(key, "empty expression");
    return ref;
  }
  if (!v.is_object()) bad(key, "expected an expression string or a table object");
  for (auto it = v.begin(); it != v.end(); ++it)
    if (it.key() != abscissa && it.key() != "values") bad(key, "unknown table key '" + it.key() + "'");
  if (!v.contains(abscissa) || !v.contains("values"))
    bad(key, std::string("table needs '") + abscissa + "' and 'values'");
  ref.x = get_reals(v.at(abscissa), key);
  ref.values = get_reals(v.at("values"), key);
  if (ref.x.size() != ref.values.size() || ref.x.size() < 2) bad(key, "table columns must match and hold >= 2 rows");
  return ref;
}

Json function_json(const FunctionRef& ref, const char* abscissa) {
  if (ref.empty()) return nullptr;
  if (!ref.is_table()) return ref.expr;
  Json t = Json::object();
  t[abscissa] = ref.x;
  t["values"] = ref.values;
  return t;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

EstimatorKind parse_estimator(std::string_view text) {
  if (text == "sample-mean" || text == "mean") return EstimatorKind::SampleMean;
  if (text == "mle") return EstimatorKind::MLE;
  throw UsageError("unknown estimator '" + std::string(text) + "' (sample-mean | mle)");
}

PairingKind parse_pairing(std::string_view text) {
  if (text == "lp") return PairingKind::Lp;
  if (text == "gls") return PairingKind::GLS;
  if (text == "bphi") return PairingKind::Bphi;
  throw UsageError("unknown pairing '" + std::string(text) + "' (lp | gls | bphi)");
}

VerifyMode parse_mode(std::string_view text) {
  if (text == "lower") return VerifyMode::Lower;
  if (text == "upper") return VerifyMode::Upper;
  throw UsageError("unknown mode '" + std::string(text) + "' (lower | upper)");
}

Json scenario_to_json(const Scenario& s, bool with_outputs) {
  Json j = Json::object();
  j["family"] = s.family;
  j["theta0"] = s.theta0;
  j["estimator"] = std::string(to_string(s.estimator));
  j["mode"] = std::string(to_string(s.mode));
  j["pairing"] = std::string(to_string(s.pairing));
  j["q"] = s.q;
  j["psi"] = function_json(s.psi, "p");
  j["phi"] = function_json(s.phi, "lambda");
  j["upper_norm"] = s.upper_norm;
  j["n_grid"] = s.n_grid;
  j["reps"] = s.reps;
  j["seed"] = s.seed ? Json(*s.seed) : Json(nullptr);
  j["p_grid"] = grid_json(s.p_grid);
  j["lambda_grid"] = grid_json(s.lambda_grid);
  j["theta_grid"] = s.theta_grid;
  j["hermite_degree"] = s.hermite_degree;
  if (with_outputs) j["outputs"] = {{"jsonl", s.jsonl_path}, {"csv", s.csv_path}};
  return j;
}

Scenario scenario_from_json(const Json& doc) {
  if (!doc.is_object()) throw UsageError("scenario document must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!kScenarioKeys.count(it.key())) throw UsageError("unknown scenario key '" + it.key() + "'");
  Scenario s;
  auto has = [&](const char* k) { return doc.contains(k); };
  if (has("family")) s.family = get_string(doc.at("family"), "family");
  if (has("theta0")) s.theta0 = get_number(doc.at("theta0"), "theta0");
  if (has("estimator")) s.estimator = parse_estimator(get_string(doc.at("estimator"), "estimator"));
  if (has("mode")) s.mode = parse_mode(get_string(doc.at("mode"), "mode"));
  if (has("pairing")) s.pairing = parse_pairing(get_string(doc.at("pairing"), "pairing"));
  if (has("q")) s.q = get_number(doc.at("q"), "q");
  if (has("psi")) s.psi = get_function(doc.at("psi"), "psi", "p");
  if (has("phi")) s.phi = get_function(doc.at("phi"), "phi", "lambda");
  if (has("upper_norm")) s.upper_norm = get_string(doc.at("upper_norm"), "upper_norm");
  if (has("n_grid")) {
    const auto& v = doc.at("n_grid");
    if (v.is_string()) {
      s.n_grid = parse_n_grid(v.get<std::string>());
    } else {
      if (!v.is_array()) bad("n_grid", "expected an array of sample sizes or a grid expression");
      s.n_grid.clear();
      for (const auto& e : v) {
        if (!e.is_number_unsigned()) bad("n_grid", "sample sizes must be positive integers");
        s.n_grid.push_back(e.get<std::size_t>());
      }
    }
  }
  if (has("reps")) {
    if (!doc.at("reps").is_number_unsigned()) bad("reps", "expected a positive integer");
    s.reps = doc.at("reps").get<std::size_t>();
  }
  if (has("seed")) {
    const auto& v = doc.at("seed");
    if (v.is_null()) {
      s.seed.reset();
    } else {
      if (!v.is_number_unsigned()) bad("seed", "expected a non-negative 64-bit integer");
      s.seed = v.get<std::uint64_t>();
    }
  }
  if (has("p_grid")) s.p_grid = get_grid(doc.at("p_grid"), "p_grid");
  if (has("lambda_grid")) s.lambda_grid = get_grid(doc.at("lambda_grid"), "lambda_grid");
  if (has("theta_grid")) s.theta_grid = get_reals(doc.at("theta_grid"), "theta_grid");
  if (has("hermite_degree")) {
    if (!doc.at("hermite_degree").is_number_integer()) bad("hermite_degree", "expected an integer");
    s.hermite_degree = doc.at("hermite_degree").get<int>();
  }
  if (has("outputs")) {
    const auto& o = doc.at("outputs");
    if (!o.is_object()) bad("outputs", "expected an object");
    for (auto it = o.begin(); it != o.end(); ++it) {
      if (it.key() == "jsonl")
        s.jsonl_path = get_string(it.value(), "outputs.jsonl");
      else if (it.key() == "csv")
        s.csv_path = get_string(it.value(), "outputs.csv");
      else
        bad("outputs", "unknown key '" + it.key() + "'");
    }
  }
  return s;
}

Scenario parse_scenario_text(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("record") && doc.contains("scenario")) return scenario_from_json(doc.at("scenario"));
  return scenario_from_json(doc);
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  // a JSON-lines report: take the first record
  if (const auto nl = text.find('\n'); nl != std::string::npos && text.rfind("{\"record\"", 0) == 0)
    text.resize(nl);
  return parse_scenario_text(text);
}

Json report_to_json(const BoundReport& r) {
  Json j = Json::object();
  j["record"] = "bound-report";
  j["scenario"] = scenario_to_json(r.scenario);
  j["lhs_norm"] = r.lhs_norm;
  j["statement_norm"] = r.statement_norm;
  j["rhs"] = r.has_rhs ? Json(r.rhs) : Json(nullptr);
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json e = Json::object();
    e["n"] = row.n;
    e["lhs"] = row.lhs;
    e["se"] = row.standard_error;
    e["margin"] = r.has_rhs ? Json(row.margin) : Json(nullptr);
    e["failures"] = row.failures;
    if (r.scenario.mode == VerifyMode::Lower && r.scenario.pairing != PairingKind::Lp) e["best_test"] = row.best_test_index;
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  j["verdict"] = std::string(to_string(r.verdict));
  j["trend_slope"] = r.trend_slope ? Json(*r.trend_slope) : Json(nullptr);
  j["trend_slope_se"] = r.trend_slope_se ? Json(*r.trend_slope_se) : Json(nullptr);
  j["note"] = r.note;
  return j;
}

std::string to_json_line(const Json& record) { return record.dump(); }

std::string report_csv_header() {
  return "family,theta0,estimator,mode,pairing,statement_norm,lhs_norm,n,lhs,se,rhs,margin,failures,verdict\n";
}

std::string report_csv_rows(const BoundReport& r) {
  std::string out;
  const auto& s = r.scenario;
  for (const auto& row : r.rows) {
    out += csv_field(s.family) + "," + num(s.theta0) + "," + std::string(to_string(s.estimator)) + "," +
           std::string(to_string(s.mode)) + "," + std::string(to_string(s.pairing)) + "," + csv_field(r.statement_norm) +
           "," + csv_field(r.lhs_norm) + "," + std::to_string(row.n) + "," + num(row.lhs) + "," +
           num(row.standard_error) + "," + (r.has_rhs ? num(r.rhs) : "") + "," + (r.has_rhs ? num(row.margin) : "") +
           "," + std::to_string(row.failures) + "," + std::string(to_string(r.verdict)) + "\n";
  }
  return out;
}

void write_file(const std::string& path, std::string_view text, bool append) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw UsageError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw UsageError("write failed for '" + path + "'");
}

}  // namespace rcb
