#include "doctest.h"
#include "rcbound/config.hpp"
#include "rcbound/errors.hpp"
#include "rcbound/specs.hpp"

using namespace rcb;

TEST_CASE("grid expressions") {
  CHECK(parse_grid("1,2,4") == std::vector<double>{1, 2, 4});
  CHECK(parse_grid("pow2(2,16)") == std::vector<double>{2, 4, 8, 16});
  CHECK(parse_grid("lin(0,1,3)") == std::vector<double>{0, 0.5, 1});
  const auto g = parse_grid("geom(1,100,3)");
  REQUIRE(g.size() == 3);
  CHECK(g[1] == doctest::Approx(10.0));
  CHECK(parse_n_grid("10,100") == std::vector<std::size_t>{10, 100});
  CHECK_THROWS_AS(parse_grid("geom(1,2"), UsageError);
  CHECK_THROWS_AS(parse_n_grid("1.5"), UsageError);
  CHECK(std::isinf(parse_number("inf")));
}

TEST_CASE("function and norm expressions") {
  CHECK(parse_psi("psi_m(2)")(4.0) == doctest::Approx(2.0));
  CHECK(parse_psi("const(3,8)").support_B() == 8.0);
  CHECK(parse_psi("psi_R(const(1,8))")(4.0) == doctest::Approx(1.77638 * 4.0 / (std::exp(1.0) * std::log(4.0))));
  CHECK(parse_phi("phi_2")(2.0) == 2.0);
  CHECK(parse_phi("bar(phi_2)")(3.0) == 4.5);
  CHECK(parse_norm("lp(3)").p == 3.0);
  CHECK(parse_norm("lorentz(2,inf)").tag == NormTag::Lorentz);
  CHECK(parse_norm("gls(psi_m(2))", {2, 4}).grid.size() == 2);
  CHECK_THROWS_AS(parse_norm("sup(3)"), UsageError);
  CHECK_THROWS_AS(parse_psi("psi_m()"), UsageError);
  CHECK_THROWS_AS(parse_phi("power(1)"), DomainError);
}

TEST_CASE("scenario documents round-trip") {
  const char* text = R"(
    // comment lines are allowed
    {
      "family": "laplace-shift",
      "pairing": "gls",
      "psi": {"p": [1, 2, 4], "values": [1, 1, 1.5]},
      "n_grid": "10,20",
      "reps": 5000,
      "seed": 18446744073709551615,
      "p_grid": [2, 4],
      "outputs": {"jsonl": "x.jsonl"}
    })";
  const auto s = parse_scenario_text(text);
  CHECK(s.family == "laplace-shift");
  CHECK(s.pairing == PairingKind::GLS);
  CHECK(s.psi.is_table());
  CHECK(s.n_grid == std::vector<std::size_t>{10, 20});
  CHECK(*s.seed == 18446744073709551615ull);
  CHECK(s.jsonl_path == "x.jsonl");
  CHECK(s.estimator == EstimatorKind::SampleMean);
  const auto j = scenario_to_json(s);
  CHECK_FALSE(j.contains("outputs"));
  CHECK(j["lambda_grid"] == "auto");
  CHECK(j["hermite_degree"] == 3);
  const auto again = scenario_from_json(j);
  CHECK(scenario_to_json(again).dump() == j.dump());
  CHECK(scenario_stream(again).tag == scenario_stream(s).tag);
}

TEST_CASE("scenario documents reject unknown or malformed keys") {
  CHECK_THROWS_AS(parse_scenario_text(R"({"famly": "gaussian-shift"})"), UsageError);
  CHECK_THROWS_AS(parse_scenario_text(R"({"reps": -5})"), UsageError);
  CHECK_THROWS_AS(parse_scenario_text(R"({"psi": {"p": [1, 2], "vals": [1, 1]}})"), UsageError);
  CHECK_THROWS_AS(parse_scenario_text(R"({"estimator": "median"})"), UsageError);
  CHECK_THROWS_AS(parse_scenario_text("{"), UsageError);
  CHECK_THROWS_AS(parse_scenario_text(R"({"outputs": {"pdf": "a"}})"), UsageError);
}

TEST_CASE("reports embed their scenario and reload from it") {
  Scenario s;
  s.n_grid = {5, 10};
  s.reps = 2000;
  s.seed = 3;
  const auto report = verify_bound(s, 1);
  const auto j = report_to_json(report);
  CHECK(j["record"] == "bound-report");
  CHECK(j["rows"].size() == 2);
  const auto line = to_json_line(j);
  CHECK(line.find('\n') == std::string::npos);
  const auto back = parse_scenario_text(line);
  CHECK(to_json_line(report_to_json(verify_bound(back, 2))) == line);

  const auto csv = report_csv_rows(report);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(report_csv_header().rfind("family,", 0) == 0);
}

TEST_CASE("error exit codes") {
  CHECK(UsageError("x").exit_code() == 1);
  CHECK(DomainError("x").exit_code() == 2);
  CHECK(VerificationFailure("x").exit_code() == 3);
  CHECK(NonConvergenceError("x").exit_code() == 4);
}
