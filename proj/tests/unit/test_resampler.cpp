#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "fairsample/dataset.hpp"
#include "fairsample/error.hpp"
#include "fairsample/metrics.hpp"
#include "fairsample/resampler.hpp"
#include "fairsample/rng.hpp"

using namespace fairsample;

namespace {

// Exhaustive minimizer of |(P+x)/(N+x) - t| over x >= 0 (ties -> smaller x).
std::size_t brute_oversample(std::size_t P, std::size_t N, double t) {
  std::size_t best = 0;
  double best_err = std::abs(static_cast<double>(P) / N - t);
  // Past the real-valued root the error only grows again; a generous cap
  // around it bounds the scan.
  auto cap = static_cast<std::size_t>(std::ceil((t * N - P) / (1.0 - t))) + 3;
  for (std::size_t x = 1; x <= cap; ++x) {
    double err = std::abs(static_cast<double>(P + x) / (N + x) - t);
    if (err < best_err) {
      best_err = err;
      best = x;
    }
  }
  return best;
}

// Exhaustive minimizer of |(P-x)/(N-x) - t| over 0 <= x <= P-1.
std::size_t brute_undersample(std::size_t P, std::size_t N, double t) {
  std::size_t best = 0;
  double best_err = std::abs(static_cast<double>(P) / N - t);
  for (std::size_t x = 1; x + 1 <= P; ++x) {
    double err = std::abs(static_cast<double>(P - x) / (N - x) - t);
    if (err < best_err) {
      best_err = err;
      best = x;
    }
  }
  return best;
}

Dataset two_group_pool(std::size_t ref_n, std::size_t ref_pass, std::size_t focal_n,
                       std::size_t focal_pass, const std::string& focal = "Black") {
  Dataset d;
  std::size_t id = 0;
  Rng noise(3);
  auto add = [&](const std::string& g, std::size_t n, std::size_t passes) {
    for (std::size_t i = 0; i < n; ++i) {
      d.features.append_row(std::vector<double>{noise.normal(), noise.normal(), noise.normal()});
      d.outcome.push_back(i < passes ? 1 : 0);
      d.group.push_back(g);
      d.row_id.push_back("r" + std::to_string(++id));
    }
  };
  add("White", ref_n, ref_pass);
  add(focal, focal_n, focal_pass);
  d.validate();
  return d;
}

GroupConfig one_focal(const std::string& focal = "Black") {
  GroupConfig cfg;
  cfg.focal_groups = {focal};
  return cfg;
}

double group_sr(const Dataset& d, const std::string& g) {
  std::size_t n = 0, p = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d.group[i] == g) {
      ++n;
      p += d.outcome[i] != 0;
    }
  return static_cast<double>(p) / n;
}

std::size_t group_n(const Dataset& d, const std::string& g) {
  return std::count(d.group.begin(), d.group.end(), g);
}

}  // namespace

TEST_CASE("pass oversampling matches the exhaustive scan") {
  Rng r(2001);
  for (int i = 0; i < 300; ++i) {
    auto N = 20 + r.below(2000);
    auto P = 1 + r.below(N - 1);
    double sr = static_cast<double>(P) / N;
    double t = sr + (0.97 - sr) * r.uniform();
    if (t <= sr || t >= 0.98) continue;
    auto x = solve_pass_oversample(P, N, t);
    CHECK(x == brute_oversample(P, N, t));
    double achieved = static_cast<double>(P + x) / (N + x);
    CHECK(std::abs(achieved - t) <= 1.0 / (N * (1.0 - t)));
  }
  CHECK(solve_pass_oversample(50, 100, 0.5) == 0);   // already there
  CHECK(solve_pass_oversample(60, 100, 0.5) == 0);   // already above
  CHECK_THROWS_AS(solve_pass_oversample(50, 100, 1.0), InfeasibleError);
}

TEST_CASE("pass undersampling matches the exhaustive scan") {
  Rng r(2002);
  int done = 0;
  while (done < 300) {
    auto N = 20 + r.below(2000);
    auto P = 2 + r.below(N - 2);
    double sr = static_cast<double>(P) / N;
    double lo = 1.5 / static_cast<double>(N - P + 1);
    if (lo >= sr) continue;
    double t = lo + (sr - lo) * r.uniform();
    if (t >= sr) continue;
    auto x = solve_pass_undersample(P, N, t);
    CHECK(x == brute_undersample(P, N, t));
    // The rounding bound applies when the real-valued root is interior.
    // Removal shrinks the cell, so the bound uses the adjusted size N - x:
    // each extra removal moves the rate by (1 - achieved) / (N - x - 1).
    double root = (P - t * N) / (1.0 - t);
    if (std::ceil(root) <= static_cast<double>(P - 1)) {
      double achieved = static_cast<double>(P - x) / (N - x);
      CHECK(std::abs(achieved - t) <= 1.0 / ((N - x) * (1.0 - t)));
    }
    ++done;
  }
  CHECK(solve_pass_undersample(40, 100, 0.5) == 0);  // already below
  CHECK_THROWS_AS(solve_pass_undersample(5, 100, 0.001), InfeasibleError);
}

TEST_CASE("ratio-only plans touch focal pass cells only") {
  Dataset d = two_group_pool(100, 60, 80, 36);
  ResampleTarget target{0.8, Strategy::SR_ONLY, Technique::BOOTSTRAP};
  auto plan = plan_sr_only(d, one_focal(), target);
  for (const auto& e : plan.entries) {
    CHECK(e.group == "Black");
    CHECK(e.outcome == 1);
  }
  // Focal SR .45 -> target .8 * .6 = .48: oversample passes.
  auto out = apply_plan(d, plan, 11);
  CHECK(group_sr(out, "White") == doctest::Approx(0.6));
  CHECK(group_n(out, "White") == 100);
  CHECK(plan.achieved.at("Black") ==
        doctest::Approx(group_sr(out, "Black") / 0.6).epsilon(1e-12));
  CHECK(std::abs(plan.achieved.at("Black") - 0.8) < 0.02);
}

TEST_CASE("ratio-only undersampling lowers an over-target focal group") {
  Dataset d = two_group_pool(100, 50, 90, 45);  // both at .5
  ResampleTarget target{0.6, Strategy::SR_ONLY, Technique::BOOTSTRAP};
  auto plan = make_plan(d, one_focal(), target);
  REQUIRE(plan.entries.size() == 1);
  CHECK(plan.entries[0].delta < 0);
  auto out = apply_plan(d, plan, 4);
  CHECK(std::abs(group_sr(out, "Black") / 0.5 - 0.6) < 0.02);
  CHECK(group_n(out, "White") == 100);
}

TEST_CASE("raw target is the identity") {
  Dataset d = two_group_pool(30, 18, 20, 9);
  ResampleTarget raw;
  auto plan = make_plan(d, one_focal(), raw);
  CHECK(plan.entries.empty());
  CHECK(apply_plan(d, plan, 123) == d);
}

TEST_CASE("equal-size strategy lands the worked example exactly") {
  // Reference 100 rows / 60 passes; focal 80 rows / 36 passes; target 1.0.
  Dataset d = two_group_pool(100, 60, 80, 36);
  ResampleTarget target{1.0, Strategy::SR_AND_N, Technique::BOOTSTRAP};
  auto plan = plan_equal_n(d, one_focal(), target);
  auto out = apply_plan(d, plan, 9);
  CHECK(group_n(out, "Black") == 100);
  CHECK(group_sr(out, "Black") == doctest::Approx(0.60).epsilon(1e-15));
  CHECK(group_n(out, "White") == 100);
  CHECK(group_sr(out, "White") == doctest::Approx(0.60));
  CHECK(plan.achieved.at("Black") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equal-size strategy pads reference fails before shrinking focal fails") {
  // Focal holds 44 fails against the reference's 40, but the target wants
  // fewer fails than the reference keeps: the plan must first duplicate
  // exactly 4 reference fails, then build focal cells against the padded
  // reference.
  Dataset d = two_group_pool(100, 60, 80, 36);
  ResampleTarget target{1.2, Strategy::SR_AND_N, Technique::BOOTSTRAP};
  auto plan = plan_equal_n(d, one_focal(), target);
  REQUIRE(!plan.entries.empty());
  CHECK(plan.entries[0].group == "White");
  CHECK(plan.entries[0].outcome == 0);
  CHECK(plan.entries[0].delta == 4);
  auto out = apply_plan(d, plan, 21);
  CHECK(group_n(out, "White") == 104);
  CHECK(group_n(out, "Black") == 104);
  CHECK(group_sr(out, "Black") / group_sr(out, "White") == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(plan.achieved.at("Black") == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("added rows record their origin and removals stay in-cell") {
  Dataset d = two_group_pool(40, 24, 30, 9);
  ResampleTarget target{1.0, Strategy::SR_ONLY, Technique::BOOTSTRAP};
  auto plan = make_plan(d, one_focal(), target);
  auto out = apply_plan(d, plan, 31);
  CHECK(out.size() > d.size());
  bool saw_dup = false;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.row_id[i].rfind("dup:", 0) == 0) {
      saw_dup = true;
      CHECK(i >= d.size());  // additions come after all original rows
      CHECK(out.group[i] == "Black");
      CHECK(out.outcome[i] == 1);
      // The recorded source row must exist and carry identical features.
      auto sep = out.row_id[i].rfind(':');
      auto src = out.row_id[i].substr(sep + 1);
      auto pos = std::find(d.row_id.begin(), d.row_id.end(), src);
      REQUIRE(pos != d.row_id.end());
      auto j = static_cast<std::size_t>(pos - d.row_id.begin());
      for (std::size_t c = 0; c < d.dim(); ++c) CHECK(out.features(i, c) == d.features(j, c));
    }
  }
  CHECK(saw_dup);
}

TEST_CASE("plan application is deterministic in the seed") {
  Dataset d = two_group_pool(60, 36, 50, 15);
  ResampleTarget target{1.1, Strategy::SR_AND_N, Technique::BOOTSTRAP};
  auto plan = make_plan(d, one_focal(), target);
  CHECK(apply_plan(d, plan, 77) == apply_plan(d, plan, 77));
  CHECK(apply_plan(d, plan, 77) != apply_plan(d, plan, 78));
}

TEST_CASE("unreachable targets are infeasible, not clamped") {
  Dataset d = two_group_pool(50, 30, 40, 16);
  ResampleTarget target{2.0, Strategy::SR_ONLY, Technique::BOOTSTRAP};
  // 2.0 * .6 = 1.2 > 1: no amount of oversampling reaches it.
  CHECK_THROWS_AS(make_plan(d, one_focal(), target), InfeasibleError);
}
