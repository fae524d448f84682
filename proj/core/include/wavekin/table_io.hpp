#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace wavekin {

/// Raised when an output directory cannot be created or written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, std::int64_t, std::string>;

/// Rectangular result table; CSV and JSON files carry the same content.
struct Table {
  inline static constexpr int kSchema = 1;

  std::string kind;
  std::string config_hash;
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

/// Creates `dir` if needed and checks that a file can be written there.
void ensure_output_dir(const std::string& dir);

/// Writes dir/stem.csv and dir/stem.json; returns the two paths.
std::vector<std::string> write_table(const std::string& dir, const std::string& stem, const Table& t);

std::string to_csv(const Table& t);
std::string to_json_text(const Table& t);

/// Parses either format, chosen by file extension.
Table read_table(const std::string& path);
Table parse_csv(const std::string& text);
Table parse_json_table(const std::string& text);

}  // namespace wavekin
