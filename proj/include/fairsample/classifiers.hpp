#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fairsample/core.hpp"

namespace fairsample {

enum class ClassifierKind {
  LOGISTIC,
  RIDGE_LOGISTIC,
  GAUSSIAN_NB,
  LDA,
  KNN,
  DECISION_TREE,
  RANDOM_FOREST
};

const char* to_string(ClassifierKind k);
ClassifierKind classifier_from_string(const std::string& s);

// A classifier kind plus its hyperparameter settings.  Unset parameters fall
// back to per-kind defaults at fit time.
struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::LOGISTIC;
  std::map<std::string, double> hyperparams;

  double param(const std::string& name, double fallback) const;
};

// A fitted binary classifier: scores rows with P(outcome = 1).
class TrainedModel {
 public:
  virtual ~TrainedModel() = default;
  virtual std::vector<double> predict_proba(const Matrix& X) const = 0;
  ClassifierKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

 protected:
  TrainedModel(ClassifierKind k, std::size_t p) : kind_(k), dim_(p) {}

 private:
  ClassifierKind kind_;
  std::size_t dim_;
};

// Train a model.  X must be finite, y in {0,1}, with both classes present for
// the kinds that need them (KNN, trees, and forests degrade to constant
// prediction on single-class data).
std::unique_ptr<TrainedModel> fit(const ClassifierSpec& spec, const Matrix& X,
                                  const std::vector<int>& y);

// Internals of the iteratively reweighted logistic fit, exposed so the
// convergence contract is directly checkable: the penalized negative
// log-likelihood trace is monotone non-increasing and the gradient norm at
// return is below tolerance whenever the fit converged.
struct LogisticFit {
  std::vector<double> weights;  // index 0 is the intercept
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // one entry per accepted iterate
};

// Maximize the (alpha-penalized) binary log-likelihood by damped Newton
// steps; the intercept is never penalized.
LogisticFit fit_logistic(const Matrix& X, const std::vector<int>& y, double alpha,
                         double tolerance = 1e-8, std::size_t max_iterations = 500);

// Hyperparameter search space: named axes in declaration order; the search
// walks the Cartesian product with the last axis varying fastest.
struct HyperGrid {
  std::vector<std::pair<std::string, std::vector<double>>> axes;
};

// The stock grid for each kind (empty for plain logistic, which has nothing
// to tune).  Depth 0 on trees means unlimited.
HyperGrid default_grid(ClassifierKind kind);

std::vector<ClassifierSpec> enumerate_grid(ClassifierKind kind, const HyperGrid& grid);

// Pick the grid point with the best mean accuracy over a stratified inner
// k-fold split of (X, y).  Ties keep the earlier grid point; a single-point
// grid is returned without any cross-validation.  Grid points whose fit
// degenerates on a fold (single-class training data) are scored by constant
// prediction of that class.
ClassifierSpec grid_tune(ClassifierKind kind, const Matrix& X, const std::vector<int>& y,
                         const HyperGrid& grid, std::size_t inner_k, std::uint64_t seed);

}  // namespace fairsample
