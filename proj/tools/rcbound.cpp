#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcbound/acceptance.hpp"
#include "rcbound/bounds.hpp"
#include "rcbound/config.hpp"
#include "rcbound/distribution.hpp"
#include "rcbound/errors.hpp"
#include "rcbound/families.hpp"
#include "rcbound/fisher.hpp"
#include "rcbound/montecarlo.hpp"
#include "rcbound/parallel.hpp"
#include "rcbound/specs.hpp"
#include "rcbound/transforms.hpp"

using namespace rcb;

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string fmt(const Extended& v) { return v.is_infinite() ? "inf" : fmt(v.value()); }

Json ext_json(const Extended& v) { return v.is_infinite() ? Json("inf") : Json(v.value()); }
Json real_json(double v) { return std::isfinite(v) ? Json(v) : Json(v > 0 ? "inf" : "-inf"); }

class Table {
 public:
  explicit Table(std::vector<std::string> header) : rows_{std::move(header)} {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& os) const {
    std::vector<std::size_t> w;
    for (const auto& r : rows_)
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (w.size() <= i) w.push_back(0);
        w[i] = std::max(w[i], r[i].size());
      }
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) line += "  ";
        line += std::string(w[i] - r[i].size(), ' ') + r[i];
      }
      os << line << "\n";
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

// Where records go: a JSON-lines file, stdout ("-"), or nowhere.
struct Sink {
  std::string path;
  bool first = true;

  bool to_stdout() const { return path == "-"; }
  void emit(const Json& record) {
    if (path.empty()) return;
    const std::string line = to_json_line(record) + "\n";
    if (to_stdout()) {
      std::cout << line;
    } else {
      write_file(path, line, !first);
    }
    first = false;
  }
};

struct Common {
  int workers = 0;
  std::string jsonl;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--workers", c.workers, "worker threads (default: RCBOUND_WORKERS or hardware concurrency)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--jsonl", c.jsonl, "write JSON-lines records to this file ('-' for stdout, replacing the table)");
}

std::vector<double> opt_grid(const std::string& text) { return text.empty() ? std::vector<double>{} : parse_grid(text); }

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const char* cmd) {
  if (!seed) throw UsageError(std::string(cmd) + " requires --seed (no clock seeding)");
  return *seed;
}

// ---------------------------------------------------------------------------

struct FisherArgs {
  Common common;
  std::string family;
  double theta = 0.0;
  std::optional<double> p;
  std::string norm;
  std::string grid;
  std::string theta_grid;
  std::size_t mc_reps = 0;
  std::optional<std::uint64_t> seed;
};

int run_fisher(const FisherArgs& a) {
  const auto family = resolve_family(a.family);
  const auto theta_grid = opt_grid(a.theta_grid);
  NormSpec spec = a.norm.empty() ? NormSpec::lp(a.p.value_or(2.0)) : parse_norm(a.norm, opt_grid(a.grid), theta_grid);
  if (!a.norm.empty() && a.p) throw UsageError("fisher: give either --p or --norm");
  FisherReport r;
  if (a.mc_reps > 0) {
    if (spec.tag != NormTag::Lp) throw UsageError("fisher: --mc-reps supports Lp norms only");
    const Stream stream{require_seed(a.seed, "fisher --mc-reps"),
                        hash_string("fisher|" + family->id() + "|" + fmt(a.theta) + "|" + spec.describe())};
    r = fisher_p_mc(*family, a.theta, spec.p, a.mc_reps, stream, resolve_workers(a.common.workers));
  } else {
    switch (spec.tag) {
      case NormTag::Lp:
        r = fisher_p(*family, a.theta, spec.p);
        break;
      case NormTag::GLS:
        r = fisher_gls(family, a.theta, *spec.psi, spec.grid);
        break;
      case NormTag::Bphi:
        r = fisher_bphi(family, a.theta, *spec.phi, spec.grid);
        break;
      case NormTag::Lorentz:
        r.family = family->id();
        r.theta = a.theta;
        r.norm = spec;
        r.value = analytic_norm(score_distribution(family, a.theta), spec);
        break;
    }
  }
  Sink sink{a.common.jsonl};
  Json rec = Json::object();
  rec["record"] = "fisher";
  rec["inputs"] = {{"family", family->id()}, {"theta", a.theta}, {"norm", spec.describe()},
                   {"grid", spec.tag == NormTag::GLS || spec.tag == NormTag::Bphi ? Json(spec.resolved_grid()) : Json(nullptr)},
                   {"theta_grid", theta_grid}, {"mc_reps", a.mc_reps}, {"seed", a.seed ? Json(*a.seed) : Json(nullptr)}};
  rec["value"] = ext_json(r.value);
  rec["method"] = std::string(to_string(r.method));
  rec["error_estimate"] = r.error_estimate;
  rec["argopt"] = r.argopt;
  sink.emit(rec);
  if (!sink.to_stdout()) {
    if (spec.tag == NormTag::Lp && a.mc_reps == 0 && a.norm.empty()) {
      std::cout << fmt(r.value) << "\n";
    } else {
      Table t({"family", "theta", "norm", "value", "error", "argopt"});
      t.add({family->id(), fmt(a.theta), spec.describe(), fmt(r.value), fmt(r.error_estimate), fmt(r.argopt)});
      t.print(std::cout);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct BoundArgs {
  Common common;
  std::string family;
  double theta = 0.0;
  std::optional<double> q;
  std::string psi;
  std::string phi;
  std::string grid;
  std::string theta_grid;
};

int run_bound(const BoundArgs& a) {
  const int chosen = (a.q ? 1 : 0) + (a.psi.empty() ? 0 : 1) + (a.phi.empty() ? 0 : 1);
  if (chosen != 1) throw UsageError("bound: give exactly one of --q, --psi, --phi");
  const auto family = resolve_family(a.family);
  const auto theta_grid = opt_grid(a.theta_grid);
  BoundResult b;
  std::string pairing;
  if (a.q) {
    b = lower_bound_lp(*family, a.theta, *a.q);
    pairing = "lp(q=" + fmt(*a.q) + ")";
  } else if (!a.psi.empty()) {
    b = lower_bound_gls(family, a.theta, parse_psi(a.psi, theta_grid), opt_grid(a.grid));
    pairing = "gls(" + a.psi + ")";
  } else {
    b = lower_bound_bphi(family, a.theta, parse_phi(a.phi, theta_grid), opt_grid(a.grid));
    pairing = "bphi(" + a.phi + ")";
  }
  Sink sink{a.common.jsonl};
  Json rec = Json::object();
  rec["record"] = "bound";
  rec["inputs"] = {{"family", family->id()}, {"theta", a.theta}, {"pairing", pairing},
                   {"grid", opt_grid(a.grid)}, {"theta_grid", theta_grid}};
  rec["has_bound"] = b.has_bound;
  rec["bound"] = b.has_bound ? Json(b.bound) : Json(nullptr);
  rec["statement_norm"] = b.statement_norm;
  rec["information"] = ext_json(b.information);
  rec["constant_name"] = b.constant_name;
  rec["constant"] = b.constant;
  rec["finite_b_bound"] = b.finite_b_bound ? Json(*b.finite_b_bound) : Json(nullptr);
  rec["finite_b_statement_norm"] = b.finite_b_statement_norm ? Json(*b.finite_b_statement_norm) : Json(nullptr);
  rec["phi_bar_diverged"] = b.phi_bar_diverged ? Json(*b.phi_bar_diverged) : Json(nullptr);
  rec["reason"] = b.reason;
  sink.emit(rec);
  if (!sink.to_stdout()) {
    if (!b.has_bound) {
      std::cout << "no bound: " << b.reason << "\n";
    } else {
      Table t({"statement_norm", "bound", "information", "constant"});
      t.add({b.statement_norm, fmt(b.bound), fmt(b.information), b.constant_name + "=" + fmt(b.constant)});
      if (b.finite_b_bound) t.add({*b.finite_b_statement_norm, fmt(*b.finite_b_bound), fmt(b.information), "K(B)"});
      t.print(std::cout);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  Common common;
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::string csv;
};

int run_verify(const VerifyArgs& a) {
  Scenario s = load_scenario_file(a.scenario);
  if (a.seed) s.seed = *a.seed;
  if (a.reps) s.reps = *a.reps;
  if (!s.seed) throw UsageError("verify requires --seed or a seed in the scenario");
  const auto report = verify_bound(s, resolve_workers(a.common.workers));
  const std::string jsonl = !a.common.jsonl.empty() ? a.common.jsonl : s.jsonl_path;
  const std::string csv = !a.csv.empty() ? a.csv : s.csv_path;
  Sink sink{jsonl};
  sink.emit(report_to_json(report));
  if (!csv.empty()) write_file(csv, report_csv_header() + report_csv_rows(report), false);
  if (!sink.to_stdout()) {
    std::cout << "scenario: " << s.family << " theta0=" << fmt(s.theta0) << " estimator=" << to_string(s.estimator)
              << " mode=" << to_string(s.mode) << " seed=" << *s.seed << "\n";
    std::cout << "lhs norm: " << report.lhs_norm << "   statement: " << report.statement_norm << "\n";
    Table t({"n", "lhs", "se", "rhs", "margin"});
    for (const auto& row : report.rows)
      t.add({std::to_string(row.n), fmt(row.lhs), fmt(row.standard_error), report.has_rhs ? fmt(report.rhs) : "-",
             report.has_rhs ? fmt(row.margin) : "-"});
    t.print(std::cout);
    if (report.trend_slope) std::cout << "trend slope: " << fmt(*report.trend_slope) << " +- " << fmt(*report.trend_slope_se) << "\n";
    if (!report.note.empty()) std::cout << "note: " << report.note << "\n";
    std::cout << "verdict: " << to_string(report.verdict) << "\n";
  }
  return report.verdict == Verdict::Violated ? 3 : 0;
}

// ---------------------------------------------------------------------------

struct CltArgs {
  Common common;
  std::string dist;
  std::string norm = "lp(2)";
  std::string grid;
  std::string n_grid = "pow2(1,1024)";
  std::size_t reps = 100000;
  std::optional<std::uint64_t> seed;
};

Json clt_json(const char* record, const CltArgs& a, const CltNormEstimate& e) {
  Json rec = Json::object();
  rec["record"] = record;
  rec["inputs"] = {{"dist", e.distribution}, {"norm", e.norm.describe()}, {"grid", opt_grid(a.grid)},
                   {"n_grid", e.n_grid}, {"reps", e.reps}, {"seed", *a.seed}};
  Json vals = Json::array();
  for (const auto& v : e.values) vals.push_back(ext_json(v));
  rec["values"] = vals;
  rec["standard_errors"] = e.standard_errors;
  Json sup = Json::array();
  for (const auto& v : e.running_sup) sup.push_back(ext_json(v));
  rec["running_sup"] = sup;
  rec["sup"] = ext_json(e.sup);
  rec["growth_exponent"] = e.growth_exponent;
  rec["growth_exponent_se"] = e.growth_exponent_se;
  rec["diverged"] = e.diverged;
  return rec;
}

void print_clt(const CltNormEstimate& e) {
  Table t({"n", "value", "se", "running_sup"});
  for (std::size_t i = 0; i < e.n_grid.size(); ++i)
    t.add({std::to_string(e.n_grid[i]), fmt(e.values[i]), fmt(e.standard_errors[i]), fmt(e.running_sup[i])});
  t.print(std::cout);
  std::cout << "sup: " << fmt(e.sup) << "   growth exponent: " << fmt(e.growth_exponent) << " +- "
            << fmt(e.growth_exponent_se) << "   diverged: " << (e.diverged ? "yes" : "no") << "\n";
}

Stream clt_stream(const char* cmd, const CltArgs& a, const NormSpec& spec) {
  return Stream{require_seed(a.seed, cmd), hash_string(std::string(cmd) + "|" + a.dist + "|" + spec.describe())};
}

int run_clt(const CltArgs& a) {
  const auto dist = make_distribution(a.dist);
  const auto spec = parse_norm(a.norm, opt_grid(a.grid));
  const auto est = clt_norm_estimate(dist, spec, parse_n_grid(a.n_grid), a.reps, clt_stream("clt-norm", a, spec),
                                     resolve_workers(a.common.workers));
  Sink sink{a.common.jsonl};
  sink.emit(clt_json("clt-norm", a, est));
  if (!sink.to_stdout()) print_clt(est);
  return 0;
}

int run_probe(const CltArgs& a) {
  const auto dist = make_distribution(a.dist);
  const auto spec = parse_norm(a.norm, opt_grid(a.grid));
  const auto pr = wnri_probe(dist, spec, parse_n_grid(a.n_grid), a.reps, clt_stream("probe", a, spec),
                             resolve_workers(a.common.workers));
  Sink sink{a.common.jsonl};
  auto rec = clt_json("probe", a, pr.estimate);
  rec["verdict"] = std::string(to_string(pr.verdict));
  sink.emit(rec);
  if (!sink.to_stdout()) {
    print_clt(pr.estimate);
    std::cout << "verdict: " << to_string(pr.verdict) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct NaturalArgs {
  Common common;
  std::string family;
  std::string theta_grid;
  std::string grid;
  bool phi = false;
};

int run_natural(const NaturalArgs& a) {
  const auto family = resolve_family(a.family);
  const auto thetas = opt_grid(a.theta_grid);
  Sink sink{a.common.jsonl};
  Json rec = Json::object();
  rec["record"] = a.phi ? "natural-phi" : "natural-psi";
  rec["inputs"] = {{"family", family->id()}, {"theta_grid", thetas}, {"grid", opt_grid(a.grid)}};
  std::vector<double> xs;
  std::vector<double> ys;
  if (a.phi) {
    NaturalPhiOptions opts;
    opts.lambda_grid = opt_grid(a.grid);
    const auto phi = natural_phi(family, thetas, opts);
    xs = opts.lambda_grid.empty() ? default_lambda_grid(phi.lambda0()) : opts.lambda_grid;
    for (double l : xs) ys.push_back(phi(l));
    rec["lambda0"] = real_json(phi.lambda0());
    rec["second_derivative_at_zero"] = phi.second_derivative_at_zero();
    rec["lambda"] = xs;
  } else {
    NaturalPsiOptions opts;
    opts.p_grid = opt_grid(a.grid);
    const auto psi = natural_psi(family, thetas, opts);
    const auto grid = opts.p_grid.empty() ? default_p_grid() : opts.p_grid;
    for (double p : grid)
      if (psi.supports(p)) xs.push_back(p);
    for (double p : xs) ys.push_back(psi(p));
    rec["B"] = real_json(psi.support_B());
    rec["p"] = xs;
  }
  Json vals = Json::array();
  for (double y : ys) vals.push_back(real_json(y));
  rec["values"] = vals;
  sink.emit(rec);
  if (!sink.to_stdout()) {
    Table t({a.phi ? "lambda" : "p", a.phi ? "phi0" : "psi0"});
    for (std::size_t i = 0; i < xs.size(); ++i) t.add({fmt(xs[i]), fmt(ys[i])});
    t.print(std::cout);
    if (a.phi)
      std::cout << "lambda0: " << fmt(rec["lambda0"].is_string() ? INFINITY : rec["lambda0"].get<double>()) << "\n";
    else
      std::cout << "B: " << fmt(rec["B"].is_string() ? INFINITY : rec["B"].get<double>()) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct ConjugateArgs {
  Common common;
  std::string phi;
  std::string grid;
  std::string theta_grid;
  bool bar = false;
  double lambda_max = 1e3;
};

int run_conjugate(const ConjugateArgs& a) {
  const auto phi = parse_phi(a.phi, opt_grid(a.theta_grid));
  Sink sink{a.common.jsonl};
  Json rec = Json::object();
  rec["inputs"] = {{"phi", a.phi}, {"grid", opt_grid(a.grid)}, {"lambda_max", a.lambda_max}};
  if (a.bar) {
    const auto grid = a.grid.empty() ? default_lambda_grid(phi.lambda0()) : parse_grid(a.grid);
    const auto bar = phi_bar(phi);
    rec["record"] = "phi-bar";
    Json rows = Json::array();
    Table t({"lambda", "phi", "bar_phi", "n_argmax", "diverged"});
    for (double l : grid) {
      const auto v = bar.evaluate(l);
      rows.push_back({{"lambda", l}, {"phi", real_json(phi(l))}, {"value", real_json(v.value)},
                      {"n_argmax", v.n_argmax}, {"diverged", v.diverged}});
      t.add({fmt(l), fmt(phi(l)), fmt(v.value), std::to_string(v.n_argmax), v.diverged ? "yes" : "no"});
    }
    rec["rows"] = rows;
    sink.emit(rec);
    if (!sink.to_stdout()) t.print(std::cout);
    return 0;
  }
  YoungFenchelOptions opts;
  opts.lambda_max = a.lambda_max;
  const auto conj = young_fenchel(phi, opts);
  const auto grid = a.grid.empty() ? linear_grid(0.0, 4.0, 17) : parse_grid(a.grid);
  const auto table = conj.table(grid);
  rec["record"] = "conjugate";
  rec["convex"] = table.convex;
  Json rows = Json::array();
  Table t({"u", "conjugate", "argmax", "boundary"});
  for (std::size_t i = 0; i < table.u.size(); ++i) {
    rows.push_back({{"u", table.u[i]}, {"value", real_json(table.value[i])}, {"argmax", table.argmax[i]},
                    {"boundary", static_cast<bool>(table.boundary[i])}});
    t.add({fmt(table.u[i]), fmt(table.value[i]), fmt(table.argmax[i]), table.boundary[i] ? "yes" : "no"});
  }
  rec["rows"] = rows;
  sink.emit(rec);
  if (!sink.to_stdout()) {
    t.print(std::cout);
    if (!table.convex) std::cout << "warning: tabulated conjugate is not convex on the grid\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SuiteArgs {
  Common common;
  std::vector<int> only;
  std::uint64_t seed = 42;
};

int run_suite(const SuiteArgs& a) {
  AcceptanceOptions opts;
  opts.workers = resolve_workers(a.common.workers);
  opts.seed = a.seed;
  opts.only = a.only;
  Sink sink{a.common.jsonl};
  opts.on_result = [&](const CriterionResult& r) {
    if (!sink.to_stdout()) std::cout << format_result(r) << std::endl;
    sink.emit({{"record", "criterion"}, {"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
  };
  const auto results = run_acceptance(opts);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  if (!sink.to_stdout())
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rao-Cramer type lower bounds in rearrangement invariant norms"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  int rc = 0;
  std::function<int()> action;

  FisherArgs fa;
  auto* fisher = app.add_subcommand("fisher", "information of one observation in a chosen norm");
  fisher->add_option("--family", fa.family, "family id or tabulated family file")->required();
  fisher->add_option("--theta", fa.theta, "parameter value")->required();
  fisher->add_option("--p", fa.p, "Lp order (default 2)");
  fisher->add_option("--norm", fa.norm, "norm expression: lp(p) | lorentz(p,q) | gls(psi) | bphi(phi)");
  fisher->add_option("--grid", fa.grid, "p-grid (gls) or lambda-grid (bphi)");
  fisher->add_option("--theta-grid", fa.theta_grid, "theta grid for natural functions");
  fisher->add_option("--mc-reps", fa.mc_reps, "Monte Carlo replicates instead of quadrature");
  fisher->add_option("--seed", fa.seed, "seed for --mc-reps");
  add_common(fisher, fa.common);
  fisher->callback([&] { action = [&] { return run_fisher(fa); }; });

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "lower bound for regular unbiased estimators");
  bound->add_option("--family", ba.family, "family id or tabulated family file")->required();
  bound->add_option("--theta", ba.theta, "true parameter theta0")->required();
  bound->add_option("--q", ba.q, "Lq pairing, q in (1, 2]");
  bound->add_option("--psi", ba.psi, "GLS pairing generating function");
  bound->add_option("--phi", ba.phi, "B(phi) pairing generating function");
  bound->add_option("--grid", ba.grid, "p-grid (psi) or lambda-grid (phi)");
  bound->add_option("--theta-grid", ba.theta_grid, "theta grid for natural functions");
  add_common(bound, ba.common);
  bound->callback([&] { action = [&] { return run_bound(ba); }; });

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Monte Carlo verification of a bound scenario");
  verify->add_option("--scenario", va.scenario, "scenario file (or an emitted report)")->required();
  verify->add_option("--seed", va.seed, "64-bit seed (overrides the scenario)");
  verify->add_option("--reps", va.reps, "replicate count (overrides the scenario)");
  verify->add_option("--csv", va.csv, "write one CSV row per n");
  add_common(verify, va.common);
  verify->callback([&] { action = [&] { return run_verify(va); }; });

  CltArgs ca;
  auto* clt = app.add_subcommand("clt-norm", "estimate the CLT norm of a distribution");
  CltArgs pa;
  auto* probe = app.add_subcommand("probe", "weak normal rearrangement invariance probe");
  for (auto [sub, args] : {std::pair{clt, &ca}, std::pair{probe, &pa}}) {
    sub->add_option("--dist", args->dist, "distribution id")->required();
    sub->add_option("--norm", args->norm, "norm expression")->capture_default_str();
    sub->add_option("--grid", args->grid, "p-grid (gls) or lambda-grid (bphi)");
    sub->add_option("--n-grid", args->n_grid, "sample sizes")->capture_default_str();
    sub->add_option("--reps", args->reps, "replicates")->capture_default_str();
    sub->add_option("--seed", args->seed, "64-bit seed")->required();
    add_common(sub, args->common);
  }
  clt->callback([&] { action = [&] { return run_clt(ca); }; });
  probe->callback([&] { action = [&] { return run_probe(pa); }; });

  NaturalArgs na;
  auto* natural = app.add_subcommand("natural-psi", "natural psi (or, with --phi, natural phi) of a family");
  natural->add_option("--family", na.family, "family id or tabulated family file")->required();
  natural->add_option("--theta-grid", na.theta_grid, "parameter grid");
  natural->add_option("--grid", na.grid, "p-grid (psi) or lambda-grid (phi)");
  natural->add_flag("--phi", na.phi, "tabulate the natural phi instead");
  add_common(natural, na.common);
  natural->callback([&] { action = [&] { return run_natural(na); }; });

  ConjugateArgs ja;
  auto* conjugate = app.add_subcommand("conjugate", "Young-Fenchel transform or bar phi of a generating function");
  conjugate->add_option("--phi", ja.phi, "generating function expression")->required();
  conjugate->add_option("--grid", ja.grid, "u-grid (conjugate) or lambda-grid (--bar)");
  conjugate->add_option("--theta-grid", ja.theta_grid, "theta grid for natural(...)");
  conjugate->add_option("--lambda-max", ja.lambda_max, "half-width of the lambda search")->capture_default_str();
  conjugate->add_flag("--bar", ja.bar, "tabulate bar phi instead");
  add_common(conjugate, ja.common);
  conjugate->callback([&] { action = [&] { return run_conjugate(ja); }; });

  SuiteArgs sa;
  auto* suite = app.add_subcommand("regress-suite", "run the acceptance battery");
  suite->add_option("--only", sa.only, "criterion ids to run")->delimiter(',');
  suite->add_option("--seed", sa.seed, "seed")->capture_default_str();
  add_common(suite, sa.common);
  suite->callback([&] { action = [&] { return run_suite(sa); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    rc = action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
