#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "fairsample/dataset.hpp"
#include "fairsample/error.hpp"

using namespace fairsample;
namespace fs = std::filesystem;

namespace {

Dataset tiny_pool() {
  Dataset d;
  d.features = Matrix::from_rows({{1.0, 2.0},
                                  {0.5, 1.0 / 3.0},
                                  {-3.25, 1e-17},
                                  {4.0, 5.0},
                                  {6.0, 7.0}});
  d.outcome = {1, 0, 1, 0, 1};
  d.group = {"A", "A", "B", "B", "B"};
  d.row_id = {"r1", "r2", "r3", "r4", "r5"};
  d.validate();
  return d;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fs_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("validation rejects malformed pools") {
  Dataset d = tiny_pool();
  SUBCASE("length mismatch") {
    d.outcome.pop_back();
    CHECK_THROWS_AS(d.validate(), DataError);
  }
  SUBCASE("outcome outside zero-one") {
    d.outcome[0] = 2;
    CHECK_THROWS_AS(d.validate(), DataError);
  }
  SUBCASE("non-finite feature") {
    d.features(1, 1) = std::nan("");
    CHECK_THROWS_AS(d.validate(), DataError);
  }
  SUBCASE("duplicate row id") {
    d.row_id[3] = "r1";
    CHECK_THROWS_AS(d.validate(), DataError);
  }
  SUBCASE("empty group label") {
    d.group[2] = "";
    CHECK_THROWS_AS(d.validate(), DataError);
  }
  SUBCASE("empty pool") {
    Dataset e;
    CHECK_THROWS_AS(e.validate(), DataError);
  }
}

TEST_CASE("group cells partition rows by group and outcome") {
  auto cells = group_cells(tiny_pool());
  CHECK(cells.size() == 4);
  CHECK(cells.at({"A", 1}) == std::vector<std::size_t>{0});
  CHECK(cells.at({"A", 0}) == std::vector<std::size_t>{1});
  CHECK(cells.at({"B", 1}) == std::vector<std::size_t>{2, 4});
  CHECK(cells.at({"B", 0}) == std::vector<std::size_t>{3});
  std::size_t total = 0;
  for (const auto& [key, rows] : cells) {
    CHECK(!rows.empty());  // empty cells are absent, not empty-listed
    total += rows.size();
  }
  CHECK(total == 5);
}

TEST_CASE("row selection preserves requested order") {
  Dataset d = tiny_pool();
  Dataset s = select_rows(d, {4, 0, 2});
  CHECK(s.size() == 3);
  CHECK(s.row_id == std::vector<std::string>{"r5", "r1", "r3"});
  CHECK(s.group == std::vector<std::string>{"B", "A", "B"});
  CHECK(s.outcome == std::vector<int>{1, 1, 1});
  CHECK(s.features(0, 0) == 6.0);
  CHECK(s.features(1, 1) == 2.0);
}

TEST_CASE("csv round trip reproduces the pool bit for bit") {
  TempDir tmp;
  Dataset d = tiny_pool();
  auto p = tmp.path / "pool.csv";
  save_csv(d, p);
  Dataset back = load_csv(p);
  CHECK(back == d);
}

TEST_CASE("csv loading reports schema and parse problems") {
  TempDir tmp;
  auto p = tmp.path / "bad.csv";
  SUBCASE("missing column") {
    FILE* f = fopen(p.string().c_str(), "w");
    fputs("id,outcome,f1\nr1,1,0.5\n", f);
    fclose(f);
    CHECK_THROWS_AS(load_csv(p), DataError);
  }
  SUBCASE("unparseable value names the data row") {
    FILE* f = fopen(p.string().c_str(), "w");
    fputs("id,group,outcome,f1\nr1,A,1,0.5\nr2,A,1,oops\n", f);
    fclose(f);
    CHECK_THROWS_WITH_AS(load_csv(p), doctest::Contains("2"), DataError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_csv(tmp.path / "absent.csv"), DataError); }
}

TEST_CASE("matrix helpers behave") {
  Matrix m(2, 3, 1.5);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(1, 2) == 1.5);
  std::vector<double> r = {9.0, 8.0, 7.0};
  m.append_row(r);
  CHECK(m.rows() == 3);
  CHECK(m(2, 0) == 9.0);
  std::vector<std::size_t> idx = {2, 0};
  Matrix t = m.take_rows(idx);
  CHECK(t.rows() == 2);
  CHECK(t(0, 1) == 8.0);
  CHECK(t(1, 1) == 1.5);
}
