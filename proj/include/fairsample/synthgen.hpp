#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fairsample/dataset.hpp"

namespace fairsample {

// Synthetic applicant pool: group sizes follow a largest-remainder
// apportionment of group_mix, features are per-group mean shifts plus
// independent Gaussian noise, and outcomes are Bernoulli draws from a
// per-group logistic model.  Pure function of the config, seed included.
struct PoolConfig {
  std::size_t n_total = 0;
  std::size_t n_features = 0;
  std::map<std::string, double> group_mix;                      // shares, sum to 1
  std::map<std::string, std::vector<double>> group_mean_shift;  // per-feature offsets
  double noise_sd = 1.0;
  std::vector<double> outcome_coefs;
  std::map<std::string, double> group_intercepts;  // fixed logit intercepts
  std::map<std::string, double> target_srs;        // pass rates to calibrate toward
  std::uint64_t seed = 0;

  void validate() const;
};

// Integer counts per group: floor shares first, leftovers to the largest
// fractional remainders (ties favor the earlier group).  A declared group
// that would receive zero rows raises InfeasibleError.
std::map<std::string, std::size_t> apportion_counts(const PoolConfig& cfg);

// Logit intercept for every group: explicit values pass through; targeted
// groups are bisected until the Monte-Carlo expected pass rate (>= 10,000
// fixed-seed draws per group) lands within 0.005 of the target.
std::map<std::string, double> calibrate_intercepts(const PoolConfig& cfg);

Dataset generate_pool(const PoolConfig& cfg);

}  // namespace fairsample
