#include "fairsample/config.hpp"

#include <fstream>
#include <sstream>

#include "fairsample/error.hpp"
#include "json.hpp"

namespace fairsample {

namespace {

using json = nlohmann::ordered_json;

const json& need(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ConfigError(std::string("config: '") + where + "' needs field '" + key + "'");
  return obj.at(key);
}

template <typename T>
T as(const json& v, const char* what) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: field '") + what + "' has the wrong type");
  }
}

template <typename T>
T opt(const json& obj, const char* key, T fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return as<T>(obj.at(key), key);
}

PoolConfig parse_pool(const json& j) {
  PoolConfig p;
  p.n_total = as<std::size_t>(need(j, "n_total", "pool"), "n_total");
  p.n_features = as<std::size_t>(need(j, "n_features", "pool"), "n_features");
  p.noise_sd = opt(j, "noise_sd", 1.0);
  p.seed = opt<std::uint64_t>(j, "seed", 0);
  p.group_mix = as<std::map<std::string, double>>(need(j, "group_mix", "pool"),
                                                  "group_mix");
  p.group_mean_shift = as<std::map<std::string, std::vector<double>>>(
      need(j, "group_mean_shift", "pool"), "group_mean_shift");
  p.outcome_coefs =
      as<std::vector<double>>(need(j, "outcome_coefs", "pool"), "outcome_coefs");
  p.group_intercepts = opt<std::map<std::string, double>>(j, "group_intercepts", {});
  p.target_srs = opt<std::map<std::string, double>>(j, "target_srs", {});
  return p;
}

GroupConfig parse_groups(const json& j) {
  GroupConfig g;
  g.reference_group = as<std::string>(need(j, "reference", "groups"), "reference");
  g.focal_groups = as<std::vector<std::string>>(need(j, "focal", "groups"), "focal");
  g.aggregate_nonreference = opt(j, "aggregate_nonreference", true);
  g.aggregate_label = opt<std::string>(j, "aggregate_label", "NonWhite");
  return g;
}

DesignConfig parse_design(const json& j) {
  DesignConfig d;
  d.ratios = as<std::vector<double>>(need(j, "ratios", "design"), "ratios");
  for (const auto& s :
       as<std::vector<std::string>>(need(j, "strategies", "design"), "strategies"))
    d.strategies.push_back(strategy_from_string(s));
  for (const auto& s :
       as<std::vector<std::string>>(need(j, "techniques", "design"), "techniques"))
    d.techniques.push_back(technique_from_string(s));
  for (const auto& s :
       as<std::vector<std::string>>(need(j, "classifiers", "design"), "classifiers"))
    d.classifiers.push_back(classifier_from_string(s));
  d.folds = as<std::size_t>(need(j, "folds", "design"), "folds");
  d.sr_levels = opt<std::vector<double>>(j, "sr_levels", {0.10, 0.50});
  d.inner_folds = opt<std::size_t>(j, "inner_folds", 5);
  d.smote_neighbors = opt<std::size_t>(j, "smote_neighbors", 5);
  d.master_seed = as<std::uint64_t>(need(j, "master_seed", "design"), "master_seed");
  return d;
}

}  // namespace

void DesignConfig::validate() const {
  if (ratios.empty()) throw ConfigError("design: ratio list is empty");
  for (double r : ratios)
    if (!(r > 0.0) || !(r < 10.0))
      throw ConfigError("design: ratios must be in (0, 10)");
  if (strategies.empty()) throw ConfigError("design: strategy list is empty");
  if (techniques.empty()) throw ConfigError("design: technique list is empty");
  if (classifiers.empty()) throw ConfigError("design: classifier list is empty");
  if (folds < 2) throw ConfigError("design: need at least 2 folds");
  if (sr_levels.empty()) throw ConfigError("design: overall SR list is empty");
  for (double s : sr_levels)
    if (!(s > 0.0) || s > 1.0)
      throw ConfigError("design: overall SR levels must be in (0, 1]");
  if (inner_folds < 2) throw ConfigError("design: need at least 2 inner folds");
  if (smote_neighbors < 1) throw ConfigError("design: smote_neighbors must be positive");
}

void ExperimentConfig::validate() const {
  pool.validate();
  groups.validate();
  design.validate();
  if (!pool.group_mix.count(groups.reference_group))
    throw ConfigError("config: reference group '" + groups.reference_group +
                      "' is not in the pool mix");
  for (const auto& g : groups.focal_groups)
    if (!pool.group_mix.count(g))
      throw ConfigError("config: focal group '" + g + "' is not in the pool mix");
  if (groups.aggregate_nonreference) {
    if (groups.aggregate_label == groups.reference_group)
      throw ConfigError("config: aggregate label collides with the reference group");
    for (const auto& g : groups.focal_groups)
      if (groups.aggregate_label == g)
        throw ConfigError("config: aggregate label collides with focal group '" + g +
                          "'");
  }
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.pool = parse_pool(need(j, "pool", "config"));
  cfg.groups = parse_groups(need(j, "groups", "config"));
  cfg.design = parse_design(need(j, "design", "config"));
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

}  // namespace fairsample
