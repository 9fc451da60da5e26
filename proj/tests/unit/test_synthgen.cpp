#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "fairsample/error.hpp"
#include "fairsample/synthgen.hpp"

using namespace fairsample;

namespace {

PoolConfig base_config() {
  PoolConfig cfg;
  cfg.n_total = 1000;
  cfg.n_features = 3;
  cfg.group_mix = {{"A", 0.5}, {"B", 0.3}, {"C", 0.2}};
  cfg.group_mean_shift = {{"A", {0.3, 0.2, 0.1}}, {"B", {0.0, 0.0, 0.0}}, {"C", {-0.3, -0.2, -0.1}}};
  cfg.noise_sd = 1.0;
  cfg.outcome_coefs = {0.8, 0.5, 0.3};
  cfg.target_srs = {{"A", 0.6}, {"B", 0.46}, {"C", 0.37}};
  cfg.seed = 11;
  return cfg;
}

double pool_sr(const Dataset& d, const std::string& g) {
  std::size_t n = 0, p = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d.group[i] == g) {
      ++n;
      p += d.outcome[i] != 0;
    }
  return static_cast<double>(p) / n;
}

}  // namespace

TEST_CASE("apportionment hands leftovers to the largest remainders") {
  PoolConfig cfg = base_config();
  cfg.n_total = 10;
  cfg.group_mix = {{"A", 0.55}, {"B", 0.27}, {"C", 0.18}};
  // Floors 5/2/1 leave two rows; remainders .5/.7/.8 -> C then B.
  auto counts = apportion_counts(cfg);
  CHECK(counts.at("A") == 5);
  CHECK(counts.at("B") == 3);
  CHECK(counts.at("C") == 2);
  std::size_t total = 0;
  for (const auto& [g, n] : counts) total += n;
  CHECK(total == 10);
}

TEST_CASE("remainder ties favor the earlier declared group") {
  PoolConfig cfg = base_config();
  cfg.n_total = 3;
  cfg.group_mix = {{"A", 0.5}, {"B", 0.5}};
  cfg.group_mean_shift = {{"A", {0, 0, 0}}, {"B", {0, 0, 0}}};
  cfg.target_srs = {{"A", 0.5}, {"B", 0.5}};
  auto counts = apportion_counts(cfg);
  CHECK(counts.at("A") == 2);  // equal .5 remainders: first-seen wins
  CHECK(counts.at("B") == 1);
}

TEST_CASE("a group squeezed to zero rows is infeasible") {
  PoolConfig cfg = base_config();
  cfg.n_total = 5;
  cfg.group_mix = {{"A", 0.9}, {"B", 0.06}, {"C", 0.04}};
  CHECK_THROWS_AS(apportion_counts(cfg), InfeasibleError);
}

TEST_CASE("calibration recovers the closed-form intercept when features drop out") {
  PoolConfig cfg = base_config();
  cfg.outcome_coefs = {0.0, 0.0, 0.0};  // expected pass rate is sigmoid(b) exactly
  SUBCASE("even odds") {
    cfg.target_srs = {{"A", 0.5}, {"B", 0.5}, {"C", 0.5}};
    auto b = calibrate_intercepts(cfg);
    for (const auto& [g, v] : b) CHECK(std::abs(v) <= 0.021);
  }
  SUBCASE("sixty percent") {
    cfg.target_srs = {{"A", 0.6}, {"B", 0.6}, {"C", 0.6}};
    auto b = calibrate_intercepts(cfg);
    double expect = std::log(0.6 / 0.4);
    for (const auto& [g, v] : b) CHECK(std::abs(v - expect) <= 0.022);
  }
}

TEST_CASE("explicit intercepts pass through untouched") {
  PoolConfig cfg = base_config();
  cfg.group_intercepts = {{"A", 0.25}};
  auto b = calibrate_intercepts(cfg);
  CHECK(b.at("A") == 0.25);
  CHECK(b.count("B") == 1);  // still calibrated from its target
}

TEST_CASE("generated pools follow the recipe") {
  PoolConfig cfg = base_config();
  cfg.group_intercepts = calibrate_intercepts(cfg);
  Dataset d = generate_pool(cfg);
  d.validate();
  CHECK(d.size() == 1000);
  CHECK(d.dim() == 3);
  auto counts = apportion_counts(cfg);
  for (const auto& [g, n] : counts)
    CHECK(static_cast<std::size_t>(std::count(d.group.begin(), d.group.end(), g)) == n);
  // Map order means contiguous blocks: A rows, then B rows, then C rows.
  CHECK(d.group.front() == "A");
  CHECK(d.group.back() == "C");
  CHECK(d.row_id.front() == "r1");
  CHECK(d.row_id.back() == "r1000");
  // Out-of-sample check: empirical pass rates track the calibrated targets.
  CHECK(std::abs(pool_sr(d, "A") - 0.6) < 0.07);
  CHECK(std::abs(pool_sr(d, "B") - 0.46) < 0.08);
  CHECK(std::abs(pool_sr(d, "C") - 0.37) < 0.09);
  // Mean shifts survive the noise: A's first feature sits above C's.
  double ma = 0.0, mc = 0.0;
  std::size_t na = 0, nc = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.group[i] == "A") {
      ma += d.features(i, 0);
      ++na;
    } else if (d.group[i] == "C") {
      mc += d.features(i, 0);
      ++nc;
    }
  }
  CHECK(ma / na > mc / nc);
}

TEST_CASE("generation is a pure function of the config") {
  PoolConfig cfg = base_config();
  cfg.group_intercepts = calibrate_intercepts(cfg);
  CHECK(generate_pool(cfg) == generate_pool(cfg));
  auto cfg2 = cfg;
  cfg2.seed = 12;
  CHECK(!(generate_pool(cfg) == generate_pool(cfg2)));
}

TEST_CASE("a pool without intercepts or calibration targets cannot generate") {
  PoolConfig cfg = base_config();
  cfg.target_srs.clear();  // nothing to calibrate from, nothing explicit
  CHECK_THROWS_AS(generate_pool(cfg), ConfigError);
}

TEST_CASE("config validation rejects inconsistent recipes") {
  SUBCASE("mix does not sum to one") {
    PoolConfig cfg = base_config();
    cfg.group_mix["A"] = 0.9;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("shift length mismatch") {
    PoolConfig cfg = base_config();
    cfg.group_mean_shift["B"] = {1.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("coef length mismatch") {
    PoolConfig cfg = base_config();
    cfg.outcome_coefs = {1.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("empty pool") {
    PoolConfig cfg = base_config();
    cfg.n_total = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
}
