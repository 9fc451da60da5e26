#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "fairsample/dataset.hpp"
#include "fairsample/rng.hpp"
#include "fairsample/splitter.hpp"

using namespace fairsample;
namespace fs = std::filesystem;

namespace {

// Pool with the given per-(group, outcome) cell sizes, rows interleaved
// deterministically.
Dataset make_pool(const std::map<std::pair<std::string, int>, std::size_t>& cells) {
  Dataset d;
  std::size_t id = 0;
  Rng noise(17);
  for (const auto& [key, n] : cells) {
    for (std::size_t i = 0; i < n; ++i) {
      d.features.append_row(std::vector<double>{noise.normal(), noise.normal()});
      d.outcome.push_back(key.second);
      d.group.push_back(key.first);
      d.row_id.push_back("r" + std::to_string(++id));
    }
  }
  d.validate();
  return d;
}

}  // namespace

TEST_CASE("per-cell fold counts differ by at most one") {
  Dataset d = make_pool({{{"A", 0}, 53}, {{"A", 1}, 47}, {{"B", 0}, 22}, {{"B", 1}, 9}});
  auto f = stratified_kfold(d, 4, 99);
  REQUIRE(f.fold_of.size() == d.size());
  REQUIRE(f.k == 4);
  auto cells = group_cells(d);
  for (const auto& [key, rows] : cells) {
    std::vector<std::size_t> per_fold(4, 0);
    for (auto r : rows) ++per_fold[f.fold_of[r]];
    auto [lo, hi] = std::minmax_element(per_fold.begin(), per_fold.end());
    CHECK(*hi - *lo <= 1);
  }
}

TEST_CASE("overall fold sizes stay within one row of each other") {
  // Many odd-sized cells: naive remainder placement would pile rows onto one
  // fold; the balanced rule must keep global sizes tight.
  Dataset d = make_pool({{{"A", 0}, 31},
                         {{"A", 1}, 17},
                         {{"B", 0}, 13},
                         {{"B", 1}, 7},
                         {{"C", 0}, 11},
                         {{"C", 1}, 5},
                         {{"D", 0}, 10},
                         {{"D", 1}, 4}});
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 40ull, 500ull}) {
    auto f = stratified_kfold(d, 3, seed);
    std::vector<std::size_t> sizes(3, 0);
    for (auto x : f.fold_of) ++sizes[x];
    auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    CHECK(*hi - *lo <= 1);
  }
}

TEST_CASE("assignment is deterministic in the seed") {
  Dataset d = make_pool({{{"A", 0}, 40}, {{"A", 1}, 35}, {{"B", 0}, 25}});
  auto f1 = stratified_kfold(d, 5, 1234);
  auto f2 = stratified_kfold(d, 5, 1234);
  CHECK(f1.fold_of == f2.fold_of);
  auto f3 = stratified_kfold(d, 5, 1235);
  CHECK(f1.fold_of != f3.fold_of);
}

TEST_CASE("train and test views partition the pool in original order") {
  Dataset d = make_pool({{{"A", 0}, 20}, {{"A", 1}, 20}, {{"B", 0}, 10}});
  auto f = stratified_kfold(d, 3, 7);
  for (std::size_t t = 0; t < 3; ++t) {
    auto [train, test] = train_test_views(d, f, t);
    CHECK(train.size() + test.size() == d.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
      auto pos = std::find(d.row_id.begin(), d.row_id.end(), test.row_id[i]);
      REQUIRE(pos != d.row_id.end());
      CHECK(f.fold_of[pos - d.row_id.begin()] == t);
    }
    // Row order within each view is the pool order.
    auto ordered = [&](const std::vector<std::string>& ids) {
      std::vector<std::size_t> pos;
      for (const auto& id : ids)
        pos.push_back(std::find(d.row_id.begin(), d.row_id.end(), id) - d.row_id.begin());
      return std::is_sorted(pos.begin(), pos.end());
    };
    CHECK(ordered(train.row_id));
    CHECK(ordered(test.row_id));
  }
}

TEST_CASE("fold audit file round-trips") {
  Dataset d = make_pool({{{"A", 0}, 12}, {{"A", 1}, 9}});
  auto f = stratified_kfold(d, 3, 55);
  auto p = fs::temp_directory_path() / ("folds_" + std::to_string(::getpid()) + ".csv");
  save_folds(f, d.row_id, p);
  auto back = load_folds(p, d.row_id);
  CHECK(back.k == f.k);
  CHECK(back.fold_of == f.fold_of);
  fs::remove(p);
}
