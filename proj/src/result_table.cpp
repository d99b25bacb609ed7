#include "tidecoh/result_table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"
#include "tidecoh/numerics.hpp"

namespace tidecoh {

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void ResultTable::add_metadata(std::string key, std::string value) {
  metadata_.emplace_back(std::move(key), std::move(value));
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw DimensionError("ResultTable: row has " + std::to_string(row.size()) + " cells, expected " +
                         std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(row));
}

void ResultTable::add_footer(std::string key, Cell value) { footer_.emplace_back(std::move(key), std::move(value)); }

const Cell& ResultTable::footer_value(const std::string& key) const {
  for (const auto& [k, v] : footer_) {
    if (k == key) return v;
  }
  throw std::out_of_range("ResultTable: no footer entry '" + key + "'");
}

std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", *d);
    return buf;
  }
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

void ResultTable::write_csv(std::ostream& os) const {
  for (const auto& [k, v] : metadata_) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << "\n";
  }
  for (const auto& [k, v] : footer_) {
    const auto* text = std::get_if<std::string>(&v);
    os << "# " << k << ": " << (text ? *text : format_cell(v)) << "\n";
  }
}

namespace {

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_cell(c);
    // Round-trip through the CSV text so both formats carry identical values.
    return std::stod(format_cell(c));
  }
  return std::get<std::string>(c);
}

}  // namespace

void ResultTable::write_structured(std::ostream& os) const {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata_) j["metadata"][k] = v;
  j["columns"] = columns_;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    j["rows"].push_back(std::move(r));
  }
  j["footer"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : footer_) j["footer"][k] = cell_json(v);
  os << j.dump(2) << "\n";
}

}  // namespace tidecoh
