#include "wavekin/table_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace wavekin {

using nlohmann::json;
namespace fs = std::filesystem;

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("row width does not match the column count");
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("no column named " + name);
}

double Table::number(std::size_t row, const std::string& name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw std::invalid_argument("column " + name + " is not numeric");
}

namespace {

std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

Cell parse_cell(const std::string& s) {
  std::int64_t i = 0;
  auto [pi, ei] = std::from_chars(s.data(), s.data() + s.size(), i);
  if (ei == std::errc() && pi == s.data() + s.size() && !s.empty()) return i;
  // from_chars for double is missing in older libstdc++
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (!s.empty() && end == s.c_str() + s.size()) return d;
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw OutputError("cannot open " + p.string() + " for writing");
  out << text;
  if (!out) throw OutputError("failed writing " + p.string());
}

}  // namespace

std::string to_csv(const Table& t) {
  std::ostringstream os;
  os << "#schema=" << Table::kSchema << "\n";
  os << "#config_hash=" << t.config_hash << "\n";
  os << "#kind=" << t.kind << "\n";
  for (const auto& [k, v] : t.meta) os << "#" << k << "=" << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << "\n";
  }
  return os.str();
}

std::string to_json_text(const Table& t) {
  json j;
  j["schema"] = Table::kSchema;
  j["config_hash"] = t.config_hash;
  j["kind"] = t.kind;
  j["meta"] = t.meta;
  j["columns"] = t.columns;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream is(text);
  std::string line;
  bool have_schema = false, have_columns = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(1, eq - 1), val = line.substr(eq + 1);
      if (key == "schema") {
        if (val != std::to_string(Table::kSchema)) throw std::runtime_error("unsupported table schema " + val);
        have_schema = true;
      } else if (key == "config_hash") {
        t.config_hash = val;
      } else if (key == "kind") {
        t.kind = val;
      } else {
        t.meta[key] = val;
      }
      continue;
    }
    if (!have_columns) {
      t.columns = split_csv_line(line);
      have_columns = true;
      continue;
    }
    std::vector<Cell> row;
    for (const auto& f : split_csv_line(line)) row.push_back(parse_cell(f));
    t.add_row(std::move(row));
  }
  if (!have_schema) throw std::runtime_error("table has no #schema header");
  return t;
}

Table parse_json_table(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("schema").get<int>() != Table::kSchema) throw std::runtime_error("unsupported table schema");
  Table t;
  t.config_hash = j.at("config_hash").get<std::string>();
  t.kind = j.at("kind").get<std::string>();
  t.meta = j.at("meta").get<std::map<std::string, std::string>>();
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : r) {
      if (c.is_number_integer())
        row.emplace_back(c.get<std::int64_t>());
      else if (c.is_number())
        row.emplace_back(c.get<double>());
      else
        row.emplace_back(c.get<std::string>());
    }
    t.add_row(std::move(row));
  }
  return t;
}

Table read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return fs::path(path).extension() == ".json" ? parse_json_table(ss.str()) : parse_csv(ss.str());
}

void ensure_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw OutputError("cannot create output directory " + dir);
  const fs::path probe = fs::path(dir) / ".wavekin_write_probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "x")) throw OutputError("output directory " + dir + " is not writable");
  }
  fs::remove(probe, ec);
}

std::vector<std::string> write_table(const std::string& dir, const std::string& stem, const Table& t) {
  ensure_output_dir(dir);
  const fs::path csv = fs::path(dir) / (stem + ".csv");
  const fs::path js = fs::path(dir) / (stem + ".json");
  write_file(csv, to_csv(t));
  write_file(js, to_json_text(t));
  return {csv.string(), js.string()};
}

}  // namespace wavekin
