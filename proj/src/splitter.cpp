#include "fairsample/splitter.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "fairsample/error.hpp"
#include "fairsample/rng.hpp"

namespace fairsample {

FoldAssignment stratified_kfold(const Dataset& d, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("fold count must be at least 2");
  if (k > d.size())
    throw InfeasibleError("cannot split " + std::to_string(d.size()) + " rows into " +
                          std::to_string(k) + " folds");

  FoldAssignment f;
  f.k = k;
  f.fold_of.assign(d.size(), 0);

  Rng rng(seed);
  std::vector<std::size_t> totals(k, 0);
  for (auto& [cell, rows] : group_cells(d)) {
    std::vector<std::size_t> order = rows;
    rng.shuffle(order);
    const std::size_t q = order.size() / k;
    const std::size_t r = order.size() % k;

    // Full rounds: deal k rows at a time, one per fold.
    std::size_t pos = 0;
    for (std::size_t round = 0; round < q; ++round)
      for (std::size_t fold = 0; fold < k; ++fold) f.fold_of[order[pos++]] = fold;
    for (std::size_t fold = 0; fold < k; ++fold) totals[fold] += q;

    // Remainder rows: one each to the r folds with the smallest running
    // totals, so no fold drifts larger than another by more than one row.
    if (r > 0) {
      std::vector<std::size_t> by_total(k);
      std::iota(by_total.begin(), by_total.end(), 0);
      std::stable_sort(by_total.begin(), by_total.end(), [&](std::size_t a, std::size_t b) {
        return totals[a] < totals[b];
      });
      for (std::size_t i = 0; i < r; ++i) {
        f.fold_of[order[pos++]] = by_total[i];
        ++totals[by_total[i]];
      }
    }
  }
  return f;
}

std::pair<Dataset, Dataset> train_test_views(const Dataset& d, const FoldAssignment& f,
                                             std::size_t test_fold) {
  if (f.fold_of.size() != d.size())
    throw DataError("fold assignment length differs from dataset");
  if (test_fold >= f.k) throw ConfigError("test fold index out of range");
  std::vector<std::size_t> train_rows, test_rows;
  for (std::size_t i = 0; i < d.size(); ++i)
    (f.fold_of[i] == test_fold ? test_rows : train_rows).push_back(i);
  return {select_rows(d, train_rows), select_rows(d, test_rows)};
}

void save_folds(const FoldAssignment& f, const std::vector<std::string>& row_ids,
                const std::filesystem::path& path) {
  if (f.fold_of.size() != row_ids.size())
    throw DataError("fold assignment length differs from row ids");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "row_id,fold\n";
  for (std::size_t i = 0; i < row_ids.size(); ++i)
    out << row_ids[i] << ',' << f.fold_of[i] << '\n';
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

FoldAssignment load_folds(const std::filesystem::path& path,
                          const std::vector<std::string>& row_ids) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty fold file '" + path.string() + "'");

  std::map<std::string, std::size_t> fold_by_id;
  std::size_t max_fold = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto comma = line.rfind(',');
    if (comma == std::string::npos)
      throw DataError("malformed fold line '" + line + "'");
    const std::string id = line.substr(0, comma);
    const std::size_t fold = std::stoul(line.substr(comma + 1));
    if (!fold_by_id.emplace(id, fold).second)
      throw DataError("duplicate row id '" + id + "' in fold file");
    max_fold = std::max(max_fold, fold);
  }

  FoldAssignment f;
  f.k = max_fold + 1;
  f.fold_of.reserve(row_ids.size());
  for (const auto& id : row_ids) {
    const auto it = fold_by_id.find(id);
    if (it == fold_by_id.end())
      throw DataError("row id '" + id + "' missing from fold file");
    f.fold_of.push_back(it->second);
  }
  if (fold_by_id.size() != row_ids.size())
    throw DataError("fold file lists rows not present in the dataset");
  return f;
}

}  // namespace fairsample
