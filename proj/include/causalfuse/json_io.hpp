#ifndef CAUSALFUSE_JSON_IO_HPP_
#define CAUSALFUSE_JSON_IO_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "causalfuse/hp.hpp"
#include "causalfuse/model.hpp"
#include "causalfuse/scenario.hpp"

namespace causalfuse {

using Json = nlohmann::ordered_json;

/// Model document: {name, exogenous, endogenous, equations, preemptions,
/// provenance}. UTF-8, unknown keys rejected, ranges fixed to {0,1}.
CausalModel model_from_json(const std::string& text);
Json model_to_json(const CausalModel& m);

Json assignment_to_json(const Assignment& a);
Json verdict_to_json(const CauseVerdict& v);
Json report_to_json(const ScenarioReport& report);

/// "name=bit" pairs separated by commas, e.g. "ST_exo=1,BT_exo=0".
std::vector<std::pair<std::string, bool>> parse_bindings(
    const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

/// dump(2) plus a trailing newline; the one serialization used everywhere so
/// repeated runs stay byte-identical.
std::string to_output_string(const Json& j);

/// Accepts 0/1 or true/false.
bool json_bit(const Json& j, const std::string& what);
std::vector<std::string> json_string_array(const Json& j,
                                           const std::string& what);

}  // namespace causalfuse

#endif  // CAUSALFUSE_JSON_IO_HPP_
