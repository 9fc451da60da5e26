#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "fairsample/error.hpp"
#include "fairsample/metrics.hpp"

using namespace fairsample;

namespace {

// Decision/group vectors with the given pass counts per group.
void fill(std::vector<char>& dec, std::vector<std::string>& grp, const std::string& g,
          std::size_t n, std::size_t passes) {
  for (std::size_t i = 0; i < n; ++i) {
    dec.push_back(i < passes ? 1 : 0);
    grp.push_back(g);
  }
}

}  // namespace

TEST_CASE("selection stats count passes per group") {
  std::vector<char> dec;
  std::vector<std::string> grp;
  fill(dec, grp, "A", 10, 4);
  fill(dec, grp, "B", 5, 5);
  auto s = selection_stats(dec, grp);
  CHECK(s.n_total == 15);
  CHECK(s.passes_total == 9);
  CHECK(s.overall_sr == doctest::Approx(9.0 / 15.0));
  CHECK(s.per_group.at("A").n == 10);
  CHECK(s.per_group.at("A").passes == 4);
  CHECK(s.per_group.at("A").sr == doctest::Approx(0.4));
  CHECK(s.per_group.at("B").sr == doctest::Approx(1.0));
  CHECK(s.per_group.count("C") == 0);
  CHECK_THROWS_AS(selection_stats({}, {}), DataError);
}

TEST_CASE("impact ratios divide focal by reference selection ratios exactly") {
  // Reference 915 of 1525 (ratio .60) against focal rates .46 and .37: the
  // quotients must be exact to double rounding, not display precision.
  std::vector<char> dec;
  std::vector<std::string> grp;
  fill(dec, grp, "White", 1525, 915);
  fill(dec, grp, "Black", 100, 46);
  fill(dec, grp, "Hispanic", 100, 37);
  auto stats = selection_stats(dec, grp);
  CHECK(stats.per_group.at("White").sr == doctest::Approx(0.60).epsilon(1e-15));
  GroupConfig cfg;
  auto r = ai_ratios(stats, cfg);
  CHECK(r.reference == "White");
  CHECK(std::abs(r.ratios.at("Black") - 0.46 / 0.60) <= 1e-12);
  CHECK(std::abs(r.ratios.at("Hispanic") - 0.37 / 0.60) <= 1e-12);
  // Pooled complement: (46 + 37) of 200.
  CHECK(std::abs(r.ratios.at("NonWhite") - (83.0 / 200.0) / 0.60) <= 1e-12);
  CHECK(violates_four_fifths(r.ratios.at("Black")));
  CHECK(violates_four_fifths(r.ratios.at("Hispanic")));
  CHECK(violates_four_fifths(r.ratios.at("NonWhite")));
}

TEST_CASE("aggregate pools every non-reference group") {
  std::vector<char> dec;
  std::vector<std::string> grp;
  fill(dec, grp, "White", 10, 5);
  fill(dec, grp, "Black", 10, 4);
  fill(dec, grp, "Asian", 10, 6);  // not focal, still part of the pool
  auto r = ai_ratios(selection_stats(dec, grp), GroupConfig{});
  CHECK(r.ratios.at("NonWhite") == doctest::Approx((10.0 / 20.0) / 0.5));
  CHECK(r.ratios.count("Asian") == 0);
  GroupConfig no_agg;
  no_agg.aggregate_nonreference = false;
  auto r2 = ai_ratios(selection_stats(dec, grp), no_agg);
  CHECK(r2.ratios.count("NonWhite") == 0);
  CHECK(r2.ratios.count("Black") == 1);
}

TEST_CASE("zero or absent reference selection is an error, never a NaN") {
  std::vector<char> dec;
  std::vector<std::string> grp;
  fill(dec, grp, "White", 10, 0);
  fill(dec, grp, "Black", 10, 3);
  CHECK_THROWS_AS(ai_ratios(selection_stats(dec, grp), GroupConfig{}), UndefinedRatioError);
  std::vector<char> dec2;
  std::vector<std::string> grp2;
  fill(dec2, grp2, "Black", 10, 3);
  CHECK_THROWS_AS(ai_ratios(selection_stats(dec2, grp2), GroupConfig{}), UndefinedRatioError);
}

TEST_CASE("four-fifths screen is strict at the boundary") {
  CHECK(!violates_four_fifths(0.80));
  CHECK(!violates_four_fifths(1.0));
  CHECK(violates_four_fifths(0.7999999));
  CHECK(violates_four_fifths(0.0));
}

TEST_CASE("binary standard deviation follows the counting formula") {
  CHECK(binary_sd(2501, 0.494) == doctest::Approx(25.003199075).epsilon(1e-9));
  CHECK(binary_sd(2501, 0.494) == std::sqrt(2501 * 0.494 * 0.506));
  CHECK(binary_sd(100, 0.5) == doctest::Approx(5.0));
  CHECK(binary_sd(10, 0.0) == 0.0);
  CHECK_THROWS_AS(binary_sd(0, 0.5), ConfigError);
  CHECK_THROWS_AS(binary_sd(10, 1.5), ConfigError);
}

TEST_CASE("selection count rounds halves away from zero") {
  CHECK(selection_count(835, 0.10) == 84);   // 83.5 rounds up
  CHECK(selection_count(835, 0.50) == 418);  // 417.5 rounds up
  CHECK(selection_count(10, 0.25) == 3);     // 2.5 rounds up
  CHECK(selection_count(10, 0.24) == 2);
  CHECK(selection_count(100, 0.0) == 0);
  CHECK(selection_count(100, 1.0) == 100);
}

TEST_CASE("thresholding takes the k highest probabilities") {
  std::vector<double> probs = {0.1, 0.9, 0.3, 0.8, 0.2};
  auto dec = threshold_at_sr(probs, 0.4);  // k = 2
  CHECK(dec == std::vector<char>{0, 1, 0, 1, 0});
  CHECK(std::count(dec.begin(), dec.end(), 1) == 2);
}

TEST_CASE("probability ties break toward the lower row index") {
  std::vector<double> probs = {0.5, 0.9, 0.5, 0.5, 0.5};
  auto dec = threshold_at_sr(probs, 0.6);  // k = 3: the .9 plus two of four tied .5s
  CHECK(dec == std::vector<char>{1, 1, 1, 0, 0});
  // Relabeling rows must move the selection with the indices, not the values.
  std::vector<double> rev(probs.rbegin(), probs.rend());
  auto dec_rev = threshold_at_sr(rev, 0.6);
  CHECK(dec_rev == std::vector<char>{1, 1, 0, 1, 0});
}

TEST_CASE("accuracy scores all rows or a masked subset") {
  std::vector<char> dec = {1, 0, 1, 1};
  std::vector<int> truth = {1, 0, 0, 1};
  CHECK(accuracy(dec, truth) == doctest::Approx(0.75));
  std::vector<char> mask = {0, 0, 1, 1};
  CHECK(accuracy(dec, truth, &mask) == doctest::Approx(0.5));
  std::vector<char> none = {0, 0, 0, 0};
  CHECK_THROWS_AS(accuracy(dec, truth, &none), Error);
}
