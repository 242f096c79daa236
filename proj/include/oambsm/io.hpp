#pragma once

#include "oambsm/channel.hpp"
#include "oambsm/elements.hpp"
#include "oambsm/measurement.hpp"
#include "oambsm/search.hpp"
#include "oambsm/state.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

// File formats of the CLI contract: 4x4 CSV tables, JSON records with numeric
// fields rounded to 12 significant digits, and the JSON-lines solution store.
namespace oambsm::io {

using json = nlohmann::ordered_json;

/// Round to 12 significant digits; emitted JSON is bit-stable across
/// platforms.
double round12(double v);

/// json number carrying round12(v).
json real(double v);

json complex_matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd complex_matrix_from_json(const json& j);

json state_to_json(const TwoPhotonState& s);
TwoPhotonState state_from_json(const json& j);

json table_to_json(const CoincidenceTable& t);
CoincidenceTable table_from_json(const json& j);

json pattern_to_json(const SupportPattern& p);
SupportPattern pattern_from_json(const json& j);

json patterns_to_json(const PatternMap& patterns);
PatternMap patterns_from_json(const json& j);

json solution_to_json(const SolutionRecord& r);
SolutionRecord solution_from_json(const json& j);

json chain_to_json(const std::vector<ElementSpec>& chain);

std::string matrix4_to_csv(const Mat4d& m);
Mat4d matrix4_from_csv(const std::string& text);

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

/// One solution per line, in discovery order.
void write_solutions_jsonl(const std::filesystem::path& path,
                           const std::vector<SolutionRecord>& solutions);
std::vector<SolutionRecord> read_solutions_jsonl(
    const std::filesystem::path& path);

} // namespace oambsm::io
