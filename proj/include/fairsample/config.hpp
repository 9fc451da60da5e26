#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fairsample/classifiers.hpp"
#include "fairsample/dataset.hpp"
#include "fairsample/resampler.hpp"
#include "fairsample/synthgen.hpp"

namespace fairsample {

// The factor lists and knobs of one factorial sweep.
struct DesignConfig {
  std::vector<double> ratios;
  std::vector<Strategy> strategies;
  std::vector<Technique> techniques;
  std::vector<ClassifierKind> classifiers;
  std::size_t folds = 3;
  std::vector<double> sr_levels = {0.10, 0.50};
  std::size_t inner_folds = 5;
  std::size_t smote_neighbors = 5;
  std::uint64_t master_seed = 0;

  void validate() const;
};

// Everything one experiment needs: the pool recipe, the group roles, and the
// sweep design.  Loaded from a JSON file.
struct ExperimentConfig {
  PoolConfig pool;
  GroupConfig groups;
  DesignConfig design;

  void validate() const;
};

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace fairsample
