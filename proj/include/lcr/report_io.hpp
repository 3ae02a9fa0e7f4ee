#pragma once

#include "lcr/pipeline.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lcr::io {

using Json = nlohmann::ordered_json;

// Rounds to 6 significant digits, the precision of every emitted number.
double round6(double v);
std::string format6(double v);

Json to_json(const stat::SlrFit& fit);
stat::SlrFit slr_from_json(const Json& j);

Json to_json(const tree::TreeFit& tree);
tree::TreeFit tree_from_json(const Json& j);
std::string to_dot(const tree::TreeFit& tree, const std::string& name);

Json to_json(const ward::Dendrogram& dend);
ward::Dendrogram dendrogram_from_json(const Json& j);

Json to_json(const LcrReport& report);
LcrReport report_from_json(const Json& j);

void write_cluster_table_csv(const LcrReport& report, std::ostream& out);
void write_augmented_csv(const LcrReport& report, std::ostream& out);
void write_histogram_csv(const LcrReport& report, std::ostream& out);
void write_assignment_csv(const LcrReport& report, std::ostream& out);

// Writes the report files selected by `formats` into `dir` (created if
// needed) and returns their paths in write order.
std::vector<std::filesystem::path> emit_report(const LcrReport& report, const std::filesystem::path& dir,
                                               const OutputFormats& formats);

}  // namespace lcr::io
