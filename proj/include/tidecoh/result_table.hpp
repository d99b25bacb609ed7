#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tidecoh {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Tabular command output with a metadata header and key/value footer.
///
/// CSV form: `# key: value` metadata lines, a header row, data rows, then
/// footer entries as `# key: value` lines. Doubles print with 12 significant
/// digits. The structured form is one JSON object with the same content.
class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns);

  void add_metadata(std::string key, std::string value);
  void add_row(std::vector<Cell> row);  // throws DimensionError on width mismatch
  void add_footer(std::string key, Cell value);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }
  const std::vector<std::pair<std::string, Cell>>& footer() const { return footer_; }

  // Footer lookup; throws std::out_of_range if absent.
  const Cell& footer_value(const std::string& key) const;

  void write_csv(std::ostream& os) const;
  void write_structured(std::ostream& os) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<std::pair<std::string, Cell>> footer_;
};

std::string format_cell(const Cell& c);

}  // namespace tidecoh
