#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "wtrace/boundary_norms.hpp"
#include "wtrace/norms.hpp"

namespace wtrace {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const NormReport& r);
Json to_json(const RatioEntry& e);
Json to_json(const RatioReport& r);
Json to_json(const SeminormValue& v);

/// Top-level report object: schema_version, subcommand, then the body keys.
Json report_header(const std::string& subcommand);

/// Writes `j` with two-space indentation and a trailing newline.
void write_json(const std::string& path, const Json& j);

/// Plain CSV with a header row; numbers use round-trip precision.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    void add_row(const std::vector<double>& row);
    /// A row whose first cell is a label.
    void add_row(const std::string& label, const std::vector<double>& row);

    std::size_t rows() const { return rows_.size(); }
    std::string str() const;
    void write(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

/// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace wtrace
