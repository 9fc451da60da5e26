#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "fairsample/dataset.hpp"

namespace fairsample {

// Assignment of every row to one of k cross-validation folds.
struct FoldAssignment {
  std::vector<std::size_t> fold_of;  // per-row fold index in 0..k-1
  std::size_t k = 0;
};

// Stratified k-fold assignment.  Rows are bucketed by (group, outcome) cell;
// each cell is shuffled with the seeded generator and dealt round-robin, so
// per-fold cell counts differ by at most one and every fold mirrors the pool's
// group sizes and pass rates.  Cell remainders go to the folds with the
// smallest running totals (ties toward the lower fold index), which keeps the
// overall fold sizes within one row of each other as well.  Deterministic for
// a fixed (dataset, k, seed).
FoldAssignment stratified_kfold(const Dataset& d, std::size_t k, std::uint64_t seed);

// Split the dataset into the rows outside `test_fold` (train) and inside it
// (test).  Row order within each view preserves the original order.
std::pair<Dataset, Dataset> train_test_views(const Dataset& d, const FoldAssignment& f,
                                             std::size_t test_fold);

// Audit serialization: `row_id,fold` CSV, one line per row.
void save_folds(const FoldAssignment& f, const std::vector<std::string>& row_ids,
                const std::filesystem::path& path);
FoldAssignment load_folds(const std::filesystem::path& path,
                          const std::vector<std::string>& row_ids);

}  // namespace fairsample
