#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "rcbound/montecarlo.hpp"

namespace rcb {

using Json = nlohmann::ordered_json;

EstimatorKind parse_estimator(std::string_view text);
PairingKind parse_pairing(std::string_view text);
VerifyMode parse_mode(std::string_view text);

/// Every field, defaults included. Output paths are omitted unless
/// `with_outputs` is set, since they do not affect any result.
Json scenario_to_json(const Scenario& scenario, bool with_outputs = false);

/// Missing keys take their defaults; unknown keys raise UsageError.
Scenario scenario_from_json(const Json& doc);

/// Reads a scenario document (comments allowed). A report record is accepted
/// too: its embedded "scenario" object is used.
Scenario load_scenario_file(const std::string& path);
Scenario parse_scenario_text(std::string_view text);

Json report_to_json(const BoundReport& report);
/// One line, no trailing newline.
std::string to_json_line(const Json& record);

std::string report_csv_header();
/// One row per n, each terminated by a newline.
std::string report_csv_rows(const BoundReport& report);

/// Writes `text`, appending when `append` is set. Throws UsageError when the
/// file cannot be opened.
void write_file(const std::string& path, std::string_view text, bool append);

}  // namespace rcb
