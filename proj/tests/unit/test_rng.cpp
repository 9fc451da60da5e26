#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "fairsample/rng.hpp"

using namespace fairsample;

TEST_CASE("identical seeds give identical streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng c(42), d(43);
  bool differ = false;
  for (int i = 0; i < 16 && !differ; ++i) differ = c.next_u64() != d.next_u64();
  CHECK(differ);
}

TEST_CASE("uniform lies in the half-open unit interval") {
  Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("bounded draw stays below its bound and covers small ranges") {
  Rng r(11);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    auto v = r.below(5);
    CHECK(v < 5);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
  CHECK(Rng(3).below(1) == 0);
}

TEST_CASE("normal draws have roughly standard moments") {
  Rng r(123);
  const int n = 50000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = r.normal();
    sum += z;
    sumsq += z * z;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("shuffle is a seeded permutation") {
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  auto w = v;
  Rng(99).shuffle(v);
  Rng(99).shuffle(w);
  CHECK(v == w);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
  auto u = sorted;
  Rng(100).shuffle(u);
  CHECK(u != v);
}

TEST_CASE("sample without replacement yields k distinct in-range values") {
  Rng r(5);
  auto s = r.sample_without_replacement(100, 20);
  CHECK(s.size() == 20);
  std::set<std::size_t> uniq(s.begin(), s.end());
  CHECK(uniq.size() == 20);
  for (auto x : s) CHECK(x < 100);
  auto all = Rng(8).sample_without_replacement(10, 10);
  std::set<std::size_t> full(all.begin(), all.end());
  CHECK(full.size() == 10);
}

TEST_CASE("derived seeds separate named sub-streams") {
  CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
  CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
  CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
  CHECK(derive_seed(7, "tree:1") != derive_seed(7, "tree:2"));
}
