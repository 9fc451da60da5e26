#include "fairsample/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace fairsample {

void GroupConfig::validate() const {
  if (reference_group.empty()) throw ConfigError("reference group must be non-empty");
  std::unordered_set<std::string> seen;
  for (const auto& g : focal_groups) {
    if (g == reference_group)
      throw ConfigError("focal group '" + g + "' equals the reference group");
    if (!seen.insert(g).second)
      throw ConfigError("duplicate focal group '" + g + "'");
  }
}

void Dataset::validate() const {
  const std::size_t n = outcome.size();
  if (n == 0) throw DataError("dataset is empty");
  if (features.rows() != n || group.size() != n || row_id.size() != n)
    throw DataError("dataset field lengths differ");
  if (features.cols() == 0) throw DataError("dataset has no feature columns");
  for (std::size_t i = 0; i < n; ++i) {
    if (outcome[i] != 0 && outcome[i] != 1)
      throw DataError("outcome at row " + std::to_string(i + 1) + " is not 0/1");
    if (group[i].empty())
      throw DataError("empty group label at row " + std::to_string(i + 1));
    for (double v : features.row(i))
      if (!std::isfinite(v))
        throw DataError("non-finite feature at row " + std::to_string(i + 1));
  }
  std::unordered_set<std::string_view> ids;
  ids.reserve(n);
  for (const auto& id : row_id)
    if (!ids.insert(id).second) throw DataError("duplicate row id '" + id + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

double parse_double(const std::string& s, std::size_t row, const std::string& col) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw DataError("non-numeric value '" + s + "' in column '" + col + "' at row " +
                    std::to_string(row));
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file '" + path.string() + "'");
  const auto header = split_csv_line(line);

  auto column_index = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw DataError("missing column '" + name + "' in '" + path.string() + "'");
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t id_col = column_index(schema.id_column);
  const std::size_t group_col = column_index(schema.group_column);
  const std::size_t outcome_col = column_index(schema.outcome_column);

  std::vector<std::size_t> feature_cols;
  if (schema.feature_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (c != id_col && c != group_col && c != outcome_col) feature_cols.push_back(c);
  } else {
    for (const auto& name : schema.feature_columns) feature_cols.push_back(column_index(name));
  }
  if (feature_cols.empty())
    throw DataError("no feature columns in '" + path.string() + "'");

  Dataset d;
  d.features = Matrix(0, feature_cols.size());
  std::vector<double> row_buf(feature_cols.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw DataError("row " + std::to_string(row) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    d.row_id.push_back(fields[id_col]);
    d.group.push_back(fields[group_col]);
    const std::string& oc = fields[outcome_col];
    if (oc == "0" || oc == "1") {
      d.outcome.push_back(oc[0] - '0');
    } else {
      throw DataError("outcome '" + oc + "' at row " + std::to_string(row) +
                      " is not 0 or 1");
    }
    for (std::size_t j = 0; j < feature_cols.size(); ++j)
      row_buf[j] = parse_double(fields[feature_cols[j]], row, header[feature_cols[j]]);
    d.features.append_row(row_buf);
  }
  if (row == 0) throw DataError("no data rows in '" + path.string() + "'");
  d.validate();
  return d;
}

void save_csv(const Dataset& d, const std::filesystem::path& path, const CsvSchema& schema) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << schema.id_column << ',' << schema.group_column << ',' << schema.outcome_column;
  if (schema.feature_columns.empty()) {
    for (std::size_t j = 0; j < d.dim(); ++j) out << ",f" << (j + 1);
  } else {
    if (schema.feature_columns.size() != d.dim())
      throw ConfigError("schema names " + std::to_string(schema.feature_columns.size()) +
                        " feature columns, dataset has " + std::to_string(d.dim()));
    for (const auto& name : schema.feature_columns) out << ',' << name;
  }
  out << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << d.row_id[i] << ',' << d.group[i] << ',' << d.outcome[i];
    for (double v : d.features.row(i)) out << ',' << format_double(v);
    out << '\n';
  }
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

std::map<CellKey, std::vector<std::size_t>> group_cells(const Dataset& d) {
  std::map<CellKey, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < d.size(); ++i)
    cells[{d.group[i], d.outcome[i]}].push_back(i);
  return cells;
}

Dataset select_rows(const Dataset& d, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.features = d.features.take_rows(rows);
  out.outcome.reserve(rows.size());
  out.group.reserve(rows.size());
  out.row_id.reserve(rows.size());
  for (std::size_t i : rows) {
    out.outcome.push_back(d.outcome[i]);
    out.group.push_back(d.group[i]);
    out.row_id.push_back(d.row_id[i]);
  }
  return out;
}

}  // namespace fairsample
