#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fairsample/core.hpp"

namespace fairsample {

/// Reference/focal roles for adverse-impact reporting.
struct GroupConfig {
  std::string reference_group = "White";
  std::vector<std::string> focal_groups = {"Black", "Hispanic"};
  /// Also report the pooled complement of the reference group.
  bool aggregate_nonreference = true;
  std::string aggregate_label = "NonWhite";

  void validate() const;
};

/// Row-aligned applicant pool: features, binary screening outcome, group
/// label, and a unique row id. Treated as immutable once validated; safe to
/// share read-only across workers.
///
/// Resampled rows carry provenance in the id: "dup:<n>:<source>" for
/// bootstrap duplicates, "smote:<n>" for synthetic rows.
struct Dataset {
  Matrix features;
  std::vector<int> outcome;
  std::vector<std::string> group;
  std::vector<std::string> row_id;

  std::size_t size() const { return outcome.size(); }
  std::size_t dim() const { return features.cols(); }

  /// Throws DataError on any invariant violation (length mismatch, empty,
  /// non-finite feature, outcome outside {0,1}, empty group, duplicate id).
  void validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct CsvSchema {
  std::string id_column = "id";
  std::string group_column = "group";
  std::string outcome_column = "outcome";
  /// Empty means: every remaining column, in file order.
  std::vector<std::string> feature_columns;
};

/// Reads a header CSV into a validated Dataset, preserving row order.
/// Missing columns raise a schema DataError; bad values raise a parse
/// DataError naming the 1-based data row.
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Writes the inverse of load_csv. Features are serialized with 17
/// significant digits so load_csv(save_csv(d)) == d.
void save_csv(const Dataset& d, const std::filesystem::path& path,
              const CsvSchema& schema = {});

using CellKey = std::pair<std::string, int>;

/// Partition of row indices by (group, outcome). Cells that would be empty
/// are absent, not empty-listed.
std::map<CellKey, std::vector<std::size_t>> group_cells(const Dataset& d);

/// New Dataset holding the given rows in the given order.
Dataset select_rows(const Dataset& d, const std::vector<std::size_t>& rows);

}  // namespace fairsample
