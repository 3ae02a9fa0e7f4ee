#include "lcr/dataset.hpp"

#include "lcr/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace lcr {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

// Splits one CSV line, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.emplace_back(trim(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.emplace_back(trim(cell));
    return cells;
}

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

const std::vector<std::string>& canonical_variables() {
    static const std::vector<std::string> names = {
        std::string(var::kChangeLE), std::string(var::kLcan),   std::string(var::kCopd),
        std::string(var::kChangeIncome), std::string(var::kChangePM), std::string(var::kHs),
        std::string(var::kBlack),    std::string(var::kHisp),   std::string(var::kPop),
        std::string(var::kUrban),    std::string(var::kMig),
    };
    return names;
}

bool Dataset::has_variable(std::string_view name) const {
    return std::find(variables.begin(), variables.end(), name) != variables.end();
}

std::size_t Dataset::index_of(std::string_view name) const {
    const auto it = std::find(variables.begin(), variables.end(), name);
    if (it == variables.end()) {
        throw Error(ErrorKind::Schema, "unknown variable '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - variables.begin());
}

std::vector<double> Dataset::column(std::string_view name) const {
    const std::size_t j = index_of(name);
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.values[j]);
    return out;
}

void Dataset::validate() const {
    std::unordered_set<std::int64_t> seen;
    for (const auto& r : records) {
        if (r.values.size() != variables.size()) {
            throw Error(ErrorKind::Validation,
                        "row " + std::to_string(r.row_id) + " has wrong number of values");
        }
        for (std::size_t j = 0; j < r.values.size(); ++j) {
            if (!std::isfinite(r.values[j])) {
                throw Error(ErrorKind::Validation, "row " + std::to_string(r.row_id) +
                                                       ": non-finite value in '" + variables[j] + "'");
            }
        }
        if (!seen.insert(r.row_id).second) {
            throw Error(ErrorKind::Validation, "duplicate RowID " + std::to_string(r.row_id));
        }
    }
}

const VariableSummary& SummaryStats::at(std::string_view name) const {
    for (const auto& v : variables) {
        if (v.name == name) return v;
    }
    throw Error(ErrorKind::Schema, "no summary for variable '" + std::string(name) + "'");
}

Dataset parse_csv(std::istream& in, const std::vector<std::string>& schema) {
    Dataset d;
    d.variables = schema;

    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<std::string> header;
    while (!have_header && std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        header = split_csv_line(line);
        have_header = true;
    }
    if (!have_header) throw Error(ErrorKind::Schema, "input has no header row");

    auto find_col = [&](std::string_view name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw Error(ErrorKind::Schema, "missing required column '" + std::string(name) + "'");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t id_col = find_col(var::kRowId);
    const std::size_t label_col = find_col(var::kLabel);
    std::vector<std::size_t> value_cols;
    value_cols.reserve(schema.size());
    for (const auto& name : schema) value_cols.push_back(find_col(name));

    std::set<std::size_t> used(value_cols.begin(), value_cols.end());
    used.insert(id_col);
    used.insert(label_col);
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (!used.contains(c)) d.warnings.push_back("ignoring extra column '" + header[c] + "'");
    }

    std::unordered_set<std::int64_t> seen_ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(header.size()) + " cells, found " +
                                              std::to_string(cells.size()));
        }
        LocationRecord rec;
        if (!parse_number(std::string_view(cells[id_col]), rec.row_id) || rec.row_id <= 0) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ", column '" +
                                              std::string(var::kRowId) + "': invalid row id '" +
                                              cells[id_col] + "'");
        }
        rec.label = cells[label_col];
        rec.values.reserve(schema.size());
        for (std::size_t j = 0; j < schema.size(); ++j) {
            const auto& cell = cells[value_cols[j]];
            double v = 0.0;
            if (!parse_number(std::string_view(cell), v) || !std::isfinite(v)) {
                throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ", column '" +
                                                  schema[j] + "': not a finite number: '" + cell + "'");
            }
            rec.values.push_back(v);
        }
        if (!seen_ids.insert(rec.row_id).second) {
            throw Error(ErrorKind::Validation, "line " + std::to_string(line_no) +
                                                   ": duplicate RowID " + std::to_string(rec.row_id));
        }
        d.records.push_back(std::move(rec));
    }
    return d;
}

Dataset read_csv_file(const std::filesystem::path& path, const std::vector<std::string>& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    return parse_csv(in, schema);
}

void write_csv(const Dataset& d, std::ostream& out, const std::vector<ExtraColumn>& extra) {
    out << var::kRowId << ',' << var::kLabel;
    for (const auto& v : d.variables) out << ',' << quote_if_needed(v);
    for (const auto& e : extra) out << ',' << quote_if_needed(e.name);
    out << '\n';
    for (std::size_t i = 0; i < d.records.size(); ++i) {
        const auto& r = d.records[i];
        out << r.row_id << ',' << quote_if_needed(r.label);
        for (double v : r.values) out << ',' << format_double(v);
        for (const auto& e : extra) out << ',' << quote_if_needed(e.cells.at(i));
        out << '\n';
    }
}

Dataset exclude_rows(const Dataset& d, const std::vector<std::int64_t>& row_ids,
                     const std::string& reason) {
    Dataset out;
    out.variables = d.variables;
    out.excluded = d.excluded;
    out.warnings = d.warnings;

    const std::set<std::int64_t> drop(row_ids.begin(), row_ids.end());
    std::set<std::int64_t> found;
    for (const auto& r : d.records) {
        if (drop.contains(r.row_id)) {
            found.insert(r.row_id);
            out.excluded.push_back({r.row_id, reason});
        } else {
            out.records.push_back(r);
        }
    }
    for (auto id : drop) {
        if (!found.contains(id)) {
            out.warnings.push_back("exclusion of RowID " + std::to_string(id) + ": not present");
        }
    }
    return out;
}

double sample_mean(const std::vector<double>& x) {
    if (x.empty()) throw Error(ErrorKind::InsufficientData, "mean of empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_sd(const std::vector<double>& x) {
    if (x.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "standard deviation needs at least 2 values");
    }
    const double m = sample_mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

SummaryStats summary_stats(const Dataset& d) {
    if (d.size() < 2) {
        throw Error(ErrorKind::InsufficientData,
                    "summary statistics need at least 2 records, have " + std::to_string(d.size()));
    }
    SummaryStats s;
    for (const auto& name : d.variables) {
        const auto col = d.column(name);
        s.variables.push_back({name, sample_mean(col), sample_sd(col), col.size()});
    }
    return s;
}

StandardizedMatrix standardize(const Matrix& values, const std::vector<std::string>& columns) {
    if (values.rows() < 2) {
        throw Error(ErrorKind::InsufficientData, "standardization needs at least 2 rows");
    }
    StandardizedMatrix z;
    z.columns = columns;
    z.values = Matrix(values.rows(), values.cols());
    for (std::size_t c = 0; c < values.cols(); ++c) {
        const auto col = values.column(c);
        const double m = sample_mean(col);
        const double s = sample_sd(col);
        if (!(s > 1e-12 * std::fabs(m))) {
            throw Error(ErrorKind::DegenerateColumn,
                        "variable '" + columns[c] + "' has zero variance and cannot be standardized");
        }
        z.centers.push_back(m);
        z.scales.push_back(s);
        for (std::size_t r = 0; r < values.rows(); ++r) z.values(r, c) = (values(r, c) - m) / s;
    }
    return z;
}

StandardizedMatrix standardize(const Dataset& d, const std::vector<std::string>& vars) {
    std::vector<std::size_t> idx;
    idx.reserve(vars.size());
    for (const auto& v : vars) idx.push_back(d.index_of(v));
    Matrix raw(d.size(), vars.size());
    for (std::size_t r = 0; r < d.size(); ++r) {
        for (std::size_t c = 0; c < idx.size(); ++c) raw(r, c) = d.records[r].values[idx[c]];
    }
    return standardize(raw, vars);
}

}  // namespace lcr
