#include "wtrace/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace wtrace {

namespace {

// JSON has no inf/nan; they are written as strings so reports stay parseable.
Json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw NumericalError("cannot format a double");
    return std::string(buf, ptr);
}

Json to_json(const NormReport& r) {
    Json j;
    Json comps = Json::array();
    for (const auto& c : r.components) {
        comps.push_back({{"name", c.name}, {"value", number(c.value)}, {"error_estimate", number(c.error_estimate)}});
    }
    j["components"] = std::move(comps);
    j["total"] = number(r.total);
    j["upper_bound"] = r.upper_bound;
    j["degenerate"] = r.degenerate;
    j["grid_hash"] = r.grid_hash;
    Json notes = Json::object();
    for (const auto& [k, v] : r.notes) notes[k] = v;
    j["notes"] = std::move(notes);
    return j;
}

Json to_json(const RatioEntry& e) {
    Json j;
    j["label"] = e.label;
    j["numerator"] = number(e.numerator);
    j["denominator"] = number(e.denominator);
    j["ratio"] = number(e.ratio);
    j["degenerate"] = e.degenerate;
    Json extras = Json::object();
    for (const auto& [k, v] : e.extras) extras[k] = number(v);
    j["extras"] = std::move(extras);
    return j;
}

Json to_json(const RatioReport& r) {
    Json j;
    j["max"] = number(r.max);
    j["min"] = number(r.min);
    j["mean"] = number(r.mean);
    j["median"] = number(r.median);
    j["degenerate_count"] = r.degenerate_count;
    j["grid_hash"] = r.grid_hash;
    Json entries = Json::array();
    for (const auto& e : r.entries) entries.push_back(to_json(e));
    j["entries"] = std::move(entries);
    return j;
}

Json to_json(const SeminormValue& v) {
    return {{"value", number(v.value)},
            {"error_estimate", number(v.error_estimate)},
            {"truncation_bound", number(v.truncation_bound)}};
}

Json report_header(const std::string& subcommand) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["subcommand"] = subcommand;
    return j;
}

void write_json(const std::string& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& row) {
    if (row.size() != columns_.size()) throw ValidationError("csv row width does not match the header");
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) line += ',';
        line += format_double(row[i]);
    }
    rows_.push_back(std::move(line));
}

void CsvTable::add_row(const std::string& label, const std::vector<double>& row) {
    if (row.size() + 1 != columns_.size()) throw ValidationError("csv row width does not match the header");
    std::string line = label;
    for (double v : row) line += ',' + format_double(v);
    rows_.push_back(std::move(line));
}

std::string CsvTable::str() const {
    std::string s;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) s += ',';
        s += columns_[i];
    }
    s += '\n';
    for (const auto& r : rows_) s += r + '\n';
    return s;
}

void CsvTable::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << str();
}

}  // namespace wtrace
