#pragma once

#include "lcr/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lcr {

namespace var {
inline constexpr std::string_view kRowId = "RowID";
inline constexpr std::string_view kLabel = "Label";
inline constexpr std::string_view kChangeLE = "Change LE";
inline constexpr std::string_view kLcan = "Lcan_d";
inline constexpr std::string_view kCopd = "copd_d";
inline constexpr std::string_view kChangeIncome = "Change Income";
inline constexpr std::string_view kChangePM = "Change PM";
inline constexpr std::string_view kHs = "hs_d";
inline constexpr std::string_view kBlack = "black_d";
inline constexpr std::string_view kHisp = "hisp_d";
inline constexpr std::string_view kPop = "Pop_d";
inline constexpr std::string_view kUrban = "urban_d";
inline constexpr std::string_view kMig = "mig_d";
}  // namespace var

// The eleven change variables in canonical column order.
const std::vector<std::string>& canonical_variables();

// One city/region: changes over ~1980 to ~2000. `values` is aligned with
// Dataset::variables. Exposure is a PM2.5 *decrease*, so positive = cleaner air.
struct LocationRecord {
    std::int64_t row_id = 0;
    std::string label;
    std::vector<double> values;

    bool operator==(const LocationRecord&) const = default;
};

struct ExcludedRow {
    std::int64_t row_id = 0;
    std::string reason;

    bool operator==(const ExcludedRow&) const = default;
};

struct Dataset {
    std::vector<std::string> variables;
    std::vector<LocationRecord> records;
    std::vector<ExcludedRow> excluded;
    std::vector<std::string> warnings;

    std::size_t size() const noexcept { return records.size(); }
    bool has_variable(std::string_view name) const;
    // Throws ErrorKind::Schema when the variable is unknown.
    std::size_t index_of(std::string_view name) const;
    std::vector<double> column(std::string_view name) const;

    // Checks finiteness, row width and row_id uniqueness.
    void validate() const;
};

struct VariableSummary {
    std::string name;
    double mean = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

struct SummaryStats {
    std::vector<VariableSummary> variables;

    const VariableSummary& at(std::string_view name) const;
};

struct StandardizedMatrix {
    std::vector<std::string> columns;
    Matrix values;
    std::vector<double> centers;
    std::vector<double> scales;
};

struct ExtraColumn {
    std::string name;
    std::vector<std::string> cells;
};

Dataset parse_csv(std::istream& in, const std::vector<std::string>& schema = canonical_variables());
Dataset read_csv_file(const std::filesystem::path& path,
                      const std::vector<std::string>& schema = canonical_variables());

// Values are written with 17 significant digits so a re-parse is exact.
void write_csv(const Dataset& d, std::ostream& out, const std::vector<ExtraColumn>& extra = {});

Dataset exclude_rows(const Dataset& d, const std::vector<std::int64_t>& row_ids,
                     const std::string& reason);

// Sample (n-1) standard deviation. Requires n >= 2.
SummaryStats summary_stats(const Dataset& d);

double sample_mean(const std::vector<double>& x);
double sample_sd(const std::vector<double>& x);

StandardizedMatrix standardize(const Dataset& d, const std::vector<std::string>& vars);
StandardizedMatrix standardize(const Matrix& values, const std::vector<std::string>& columns);

}  // namespace lcr
