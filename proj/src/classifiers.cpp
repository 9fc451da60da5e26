#include "fairsample/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairsample/dataset.hpp"
#include "fairsample/error.hpp"
#include "fairsample/kernels.hpp"
#include "fairsample/rng.hpp"
#include "fairsample/splitter.hpp"

namespace fairsample {

const char* to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::LOGISTIC: return "logistic";
    case ClassifierKind::RIDGE_LOGISTIC: return "ridge_logistic";
    case ClassifierKind::GAUSSIAN_NB: return "gaussian_nb";
    case ClassifierKind::LDA: return "lda";
    case ClassifierKind::KNN: return "knn";
    case ClassifierKind::DECISION_TREE: return "decision_tree";
    case ClassifierKind::RANDOM_FOREST: return "random_forest";
  }
  return "?";
}

ClassifierKind classifier_from_string(const std::string& s) {
  if (s == "logistic") return ClassifierKind::LOGISTIC;
  if (s == "ridge_logistic") return ClassifierKind::RIDGE_LOGISTIC;
  if (s == "gaussian_nb") return ClassifierKind::GAUSSIAN_NB;
  if (s == "lda") return ClassifierKind::LDA;
  if (s == "knn") return ClassifierKind::KNN;
  if (s == "decision_tree") return ClassifierKind::DECISION_TREE;
  if (s == "random_forest") return ClassifierKind::RANDOM_FOREST;
  throw ConfigError("unknown classifier '" + s + "'");
}

double ClassifierSpec::param(const std::string& name, double fallback) const {
  const auto it = hyperparams.find(name);
  return it == hyperparams.end() ? fallback : it->second;
}

namespace {

void check_training_input(const Matrix& X, const std::vector<int>& y) {
  if (X.rows() != y.size()) throw DataError("feature and label counts differ");
  if (X.rows() == 0) throw DataError("empty training set");
  if (X.cols() == 0) throw DataError("training set has no features");
  for (double v : X.data())
    if (!std::isfinite(v)) throw DataError("non-finite training feature");
  for (int v : y)
    if (v != 0 && v != 1) throw DataError("labels must be 0 or 1");
}

void check_query(const Matrix& X, std::size_t dim) {
  if (X.cols() != dim)
    throw DataError("query has " + std::to_string(X.cols()) +
                    " features, model expects " + std::to_string(dim));
  for (double v : X.data())
    if (!std::isfinite(v)) throw DataError("non-finite query feature");
}

std::size_t count_ones(const std::vector<int>& y) {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
}

void require_both_classes(const std::vector<int>& y, const char* kind) {
  const std::size_t n1 = count_ones(y);
  if (n1 == 0 || n1 == y.size())
    throw DegenerateFitError(std::string(kind) +
                             " needs both outcome classes in the training data");
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)), overflow-safe.
double log1pexp(double z) {
  if (z > 36.0) return z;
  if (z < -36.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

// Solve the SPD system a x = b by Cholesky; a is n*n row-major, consumed.
bool try_cholesky_solve(std::vector<double> a, std::size_t n, std::vector<double> b,
                        std::vector<double>& x) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double l = std::sqrt(d);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / l;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
    b[i] = s / a[i * n + i];
  }
  x = std::move(b);
  return true;
}

// Cholesky with escalating diagonal jitter for near-singular systems.
std::vector<double> solve_spd(const std::vector<double>& a, std::size_t n,
                              const std::vector<double>& b) {
  std::vector<double> x;
  if (try_cholesky_solve(a, n, b, x)) return x;
  double jitter = 1e-10;
  for (int attempt = 0; attempt < 8; ++attempt, jitter *= 100.0) {
    std::vector<double> aj = a;
    for (std::size_t i = 0; i < n; ++i) aj[i * n + i] += jitter;
    if (try_cholesky_solve(std::move(aj), n, b, x)) return x;
  }
  throw DegenerateFitError("normal equations are numerically singular");
}

class LogisticModel final : public TrainedModel {
 public:
  LogisticModel(ClassifierKind kind, std::size_t p, std::vector<double> w)
      : TrainedModel(kind, p), w_(std::move(w)) {}

  std::vector<double> predict_proba(const Matrix& X) const override {
    check_query(X, dim());
    std::vector<double> out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i)
      out[i] = sigmoid(w_[0] + kernels::dot(w_.data() + 1, X.row(i).data(), dim()));
    return out;
  }

 private:
  std::vector<double> w_;
};

class NaiveBayesModel final : public TrainedModel {
 public:
  NaiveBayesModel(std::size_t p, double log_prior0, double log_prior1,
                  std::vector<double> mean0, std::vector<double> var0,
                  std::vector<double> mean1, std::vector<double> var1)
      : TrainedModel(ClassifierKind::GAUSSIAN_NB, p),
        log_prior0_(log_prior0),
        log_prior1_(log_prior1),
        mean0_(std::move(mean0)),
        var0_(std::move(var0)),
        mean1_(std::move(mean1)),
        var1_(std::move(var1)) {}

  std::vector<double> predict_proba(const Matrix& X) const override {
    check_query(X, dim());
    std::vector<double> out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) {
      const auto x = X.row(i);
      double ll0 = log_prior0_, ll1 = log_prior1_;
      for (std::size_t j = 0; j < dim(); ++j) {
        const double d0 = x[j] - mean0_[j];
        const double d1 = x[j] - mean1_[j];
        ll0 += -0.5 * std::log(two_pi * var0_[j]) - d0 * d0 / (2.0 * var0_[j]);
        ll1 += -0.5 * std::log(two_pi * var1_[j]) - d1 * d1 / (2.0 * var1_[j]);
      }
      const double m = std::max(ll0, ll1);
      const double e0 = std::exp(ll0 - m), e1 = std::exp(ll1 - m);
      out[i] = e1 / (e0 + e1);
    }
    return out;
  }

 private:
  static constexpr double two_pi = 6.283185307179586476925287;
  double log_prior0_, log_prior1_;
  std::vector<double> mean0_, var0_, mean1_, var1_;
};

class LdaModel final : public TrainedModel {
 public:
  LdaModel(std::size_t p, std::vector<double> w, double b)
      : TrainedModel(ClassifierKind::LDA, p), w_(std::move(w)), b_(b) {}

  std::vector<double> predict_proba(const Matrix& X) const override {
    check_query(X, dim());
    std::vector<double> out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i)
      out[i] = sigmoid(kernels::dot(w_.data(), X.row(i).data(), dim()) + b_);
    return out;
  }

 private:
  std::vector<double> w_;
  double b_;
};

class KnnModel final : public TrainedModel {
 public:
  KnnModel(Matrix x, std::vector<int> y, std::size_t k)
      : TrainedModel(ClassifierKind::KNN, x.cols()), x_(std::move(x)), y_(std::move(y)),
        k_(k) {}

  std::vector<double> predict_proba(const Matrix& X) const override {
    check_query(X, dim());
    const std::size_t n = x_.rows();
    const std::size_t kk = std::min(k_, n);
    std::vector<double> out(X.rows());
    std::vector<double> dist(n);
    std::vector<std::size_t> order(n);
    for (std::size_t q = 0; q < X.rows(); ++q) {
      const double* xq = X.row(q).data();
      for (std::size_t i = 0; i < n; ++i)
        dist[i] = kernels::squared_distance(xq, x_.row(i).data(), dim());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
      std::size_t votes = 0;
      for (std::size_t i = 0; i < kk; ++i) votes += static_cast<std::size_t>(y_[order[i]]);
      out[q] = static_cast<double>(votes) / static_cast<double>(kk);
    }
    return out;
  }

 private:
  Matrix x_;
  std::vector<int> y_;
  std::size_t k_;
};

// Binary CART node; feature < 0 marks a leaf carrying the class-1 fraction.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double proba = 0.0;
};

double tree_score(const std::vector<TreeNode>& nodes, std::span<const double> x) {
  std::size_t i = 0;
  while (nodes[i].feature >= 0)
    i = x[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold
            ? nodes[i].left
            : nodes[i].right;
  return nodes[i].proba;
}

double gini(std::size_t ones, std::size_t n) {
  const double p = static_cast<double>(ones) / static_cast<double>(n);
  return 2.0 * p * (1.0 - p);
}

// Grows a CART with Gini impurity.  All tie-breaks are fixed: features are
// scanned in ascending index order, cut points in ascending value order, and
// only a strictly better gain replaces the incumbent split.
class TreeBuilder {
 public:
  TreeBuilder(const Matrix& X, const std::vector<int>& y, std::size_t max_depth,
              std::size_t mtry, Rng* rng)
      : x_(X), y_(y), max_depth_(max_depth), mtry_(mtry), rng_(rng) {}

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    nodes_.clear();
    grow(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  std::size_t grow(std::vector<std::size_t> rows, std::size_t depth) {
    const std::size_t me = nodes_.size();
    nodes_.push_back({});
    std::size_t ones = 0;
    for (std::size_t r : rows) ones += static_cast<std::size_t>(y_[r]);
    nodes_[me].proba = static_cast<double>(ones) / static_cast<double>(rows.size());

    if (ones == 0 || ones == rows.size() || rows.size() < 2 ||
        (max_depth_ > 0 && depth >= max_depth_))
      return me;

    const std::size_t p = x_.cols();
    std::vector<std::size_t> feats;
    if (mtry_ == 0 || mtry_ >= p || rng_ == nullptr) {
      feats.resize(p);
      std::iota(feats.begin(), feats.end(), 0);
    } else {
      feats = rng_->sample_without_replacement(p, mtry_);
      std::sort(feats.begin(), feats.end());
    }

    const double parent = gini(ones, rows.size());
    std::int32_t best_f = -1;
    double best_thr = 0.0, best_gain = 0.0;
    std::vector<std::pair<double, int>> vals(rows.size());
    for (std::size_t f : feats) {
      for (std::size_t i = 0; i < rows.size(); ++i)
        vals[i] = {x_(rows[i], f), y_[rows[i]]};
      std::sort(vals.begin(), vals.end());
      std::size_t nl = 0, ones_l = 0;
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        ++nl;
        ones_l += static_cast<std::size_t>(vals[i].second);
        if (vals[i].first == vals[i + 1].first) continue;
        const double thr = vals[i].first + 0.5 * (vals[i + 1].first - vals[i].first);
        if (!(thr < vals[i + 1].first)) continue;  // adjacent doubles: no cut exists
        const std::size_t nr = vals.size() - nl;
        const std::size_t ones_r = ones - ones_l;
        const double split =
            (static_cast<double>(nl) * gini(ones_l, nl) +
             static_cast<double>(nr) * gini(ones_r, nr)) /
            static_cast<double>(vals.size());
        const double gain = parent - split;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best_f = static_cast<std::int32_t>(f);
          best_thr = thr;
        }
      }
    }
    if (best_f < 0) return me;

    std::vector<std::size_t> lrows, rrows;
    for (std::size_t r : rows)
      (x_(r, static_cast<std::size_t>(best_f)) <= best_thr ? lrows : rrows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    nodes_[me].feature = best_f;
    nodes_[me].threshold = best_thr;
    const std::size_t li = grow(std::move(lrows), depth + 1);
    const std::size_t ri = grow(std::move(rrows), depth + 1);
    nodes_[me].left = static_cast<std::uint32_t>(li);
    nodes_[me].right = static_cast<std::uint32_t>(ri);
    return me;
  }

  const Matrix& x_;
  const std::vector<int>& y_;
  std::size_t max_depth_;
  std::size_t mtry_;
  Rng* rng_;
  std::vector<TreeNode> nodes_;
};

class TreeModel final : public TrainedModel {
 public:
  TreeModel(std::size_t p, std::vector<TreeNode> nodes)
      : TrainedModel(ClassifierKind::DECISION_TREE, p), nodes_(std::move(nodes)) {}

  std::vector<double> predict_proba(const Matrix& X) const override {
    check_query(X, dim());
    std::vector<double> out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) out[i] = tree_score(nodes_, X.row(i));
    return out;
  }

 private:
  std::vector<TreeNode> nodes_;
};

class ForestModel final : public TrainedModel {
 public:
  ForestModel(std::size_t p, std::vector<std::vector<TreeNode>> trees)
      : TrainedModel(ClassifierKind::RANDOM_FOREST, p), trees_(std::move(trees)) {}

  std::vector<double> predict_proba(const Matrix& X) const override {
    check_query(X, dim());
    std::vector<double> out(X.rows(), 0.0);
    for (const auto& t : trees_)
      for (std::size_t i = 0; i < X.rows(); ++i) out[i] += tree_score(t, X.row(i));
    for (double& v : out) v /= static_cast<double>(trees_.size());
    return out;
  }

 private:
  std::vector<std::vector<TreeNode>> trees_;
};

std::unique_ptr<TrainedModel> fit_gaussian_nb(const ClassifierSpec& spec, const Matrix& X,
                                              const std::vector<int>& y) {
  require_both_classes(y, "gaussian_nb");
  const std::size_t n = X.rows(), p = X.cols();
  const std::size_t n1 = count_ones(y), n0 = n - n1;

  std::vector<double> mean0(p, 0.0), mean1(p, 0.0), var0(p, 0.0), var1(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& m = y[i] ? mean1 : mean0;
    for (std::size_t j = 0; j < p; ++j) m[j] += X(i, j);
  }
  for (std::size_t j = 0; j < p; ++j) {
    mean0[j] /= static_cast<double>(n0);
    mean1[j] /= static_cast<double>(n1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = y[i] ? mean1 : mean0;
    auto& v = y[i] ? var1 : var0;
    for (std::size_t j = 0; j < p; ++j) {
      const double d = X(i, j) - m[j];
      v[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < p; ++j) {
    var0[j] /= static_cast<double>(n0);
    var1[j] /= static_cast<double>(n1);
  }

  // Variance floor tied to the largest feature variance over the whole
  // training set, so near-constant features cannot dominate the likelihood.
  double max_var = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += X(i, j);
      ss += X(i, j) * X(i, j);
    }
    const double mu = s / static_cast<double>(n);
    max_var = std::max(max_var, ss / static_cast<double>(n) - mu * mu);
  }
  const double floor = std::max(spec.param("smoothing", 1e-9) * max_var, 1e-30);
  for (std::size_t j = 0; j < p; ++j) {
    var0[j] = std::max(var0[j], floor);
    var1[j] = std::max(var1[j], floor);
  }

  const double lp0 = std::log(static_cast<double>(n0) / static_cast<double>(n));
  const double lp1 = std::log(static_cast<double>(n1) / static_cast<double>(n));
  return std::make_unique<NaiveBayesModel>(p, lp0, lp1, std::move(mean0), std::move(var0),
                                           std::move(mean1), std::move(var1));
}

std::unique_ptr<TrainedModel> fit_lda(const ClassifierSpec& spec, const Matrix& X,
                                      const std::vector<int>& y) {
  require_both_classes(y, "lda");
  const std::size_t n = X.rows(), p = X.cols();
  const std::size_t n1 = count_ones(y), n0 = n - n1;

  std::vector<double> mean0(p, 0.0), mean1(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& m = y[i] ? mean1 : mean0;
    for (std::size_t j = 0; j < p; ++j) m[j] += X(i, j);
  }
  for (std::size_t j = 0; j < p; ++j) {
    mean0[j] /= static_cast<double>(n0);
    mean1[j] /= static_cast<double>(n1);
  }

  std::vector<double> cov(p * p, 0.0);
  std::vector<double> d(p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = y[i] ? mean1 : mean0;
    for (std::size_t j = 0; j < p; ++j) d[j] = X(i, j) - m[j];
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k) cov[j * p + k] += d[j] * d[k];
  }
  const double denom = static_cast<double>(n > 2 ? n - 2 : 1);
  const double ridge = spec.param("ridge", 1e-6);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < p; ++k) cov[j * p + k] /= denom;
  for (std::size_t j = 0; j < p; ++j) cov[j * p + j] += ridge;

  std::vector<double> diff(p);
  for (std::size_t j = 0; j < p; ++j) diff[j] = mean1[j] - mean0[j];
  std::vector<double> w = solve_spd(cov, p, diff);

  double b = std::log(static_cast<double>(n1) / static_cast<double>(n0));
  for (std::size_t j = 0; j < p; ++j) b -= 0.5 * (mean0[j] + mean1[j]) * w[j];
  return std::make_unique<LdaModel>(p, std::move(w), b);
}

std::unique_ptr<TrainedModel> fit_forest(const ClassifierSpec& spec, const Matrix& X,
                                         const std::vector<int>& y) {
  const std::size_t p = X.cols(), n = X.rows();
  const long long t_count = std::llround(spec.param("trees", 100.0));
  if (t_count < 1) throw ConfigError("forest needs at least one tree");
  const std::size_t max_depth =
      static_cast<std::size_t>(std::llround(spec.param("max_depth", 0.0)));
  long long mtry = std::llround(spec.param("mtry", -1.0));
  if (mtry < 0) mtry = std::max<long long>(1, static_cast<long long>(std::sqrt(p)));
  const auto seed = static_cast<std::uint64_t>(std::llround(spec.param("seed", 0.0)));

  std::vector<std::vector<TreeNode>> trees;
  trees.reserve(static_cast<std::size_t>(t_count));
  for (long long t = 0; t < t_count; ++t) {
    Rng rng(derive_seed(seed, "tree:" + std::to_string(t)));
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = rng.below(n);
    TreeBuilder builder(X, y, max_depth, static_cast<std::size_t>(mtry), &rng);
    trees.push_back(builder.build(std::move(rows)));
  }
  return std::make_unique<ForestModel>(p, std::move(trees));
}

}  // namespace

LogisticFit fit_logistic(const Matrix& X, const std::vector<int>& y, double alpha,
                         double tolerance, std::size_t max_iterations) {
  check_training_input(X, y);
  if (alpha < 0.0) throw ConfigError("penalty must be nonnegative");
  const std::size_t n = X.rows(), p = X.cols(), d = p + 1;

  auto objective = [&](const std::vector<double>& w) {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = w[0] + kernels::dot(w.data() + 1, X.row(i).data(), p);
      obj += log1pexp(z) - (y[i] ? z : 0.0);
    }
    for (std::size_t j = 1; j < d; ++j) obj += alpha * w[j] * w[j];
    return obj;
  };
  auto gradient = [&](const std::vector<double>& w, std::vector<double>& g,
                      std::vector<double>& prob) {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double z = w[0] + kernels::dot(w.data() + 1, X.row(i).data(), p);
      prob[i] = sigmoid(z);
      const double r = prob[i] - static_cast<double>(y[i]);
      g[0] += r;
      kernels::axpy(r, X.row(i).data(), g.data() + 1, p);
    }
    for (std::size_t j = 1; j < d; ++j) g[j] += 2.0 * alpha * w[j];
    double ss = 0.0;
    for (double v : g) ss += v * v;
    return std::sqrt(ss);
  };

  LogisticFit fit;
  std::vector<double> w(d, 0.0), g(d), prob(n), h(d * d), cand(d);
  double obj = objective(w);
  fit.objective_trace.push_back(obj);

  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    const double norm = gradient(w, g, prob);
    if (norm <= tolerance) break;

    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = prob[i] * (1.0 - prob[i]);
      const auto x = X.row(i);
      h[0] += s;
      for (std::size_t j = 0; j < p; ++j) {
        h[(j + 1) * d] += s * x[j];
        for (std::size_t k = 0; k <= j; ++k) h[(j + 1) * d + (k + 1)] += s * x[j] * x[k];
      }
    }
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = j + 1; k < d; ++k) h[j * d + k] = h[k * d + j];
    for (std::size_t j = 1; j < d; ++j) h[j * d + j] += 2.0 * alpha;

    const std::vector<double> step = solve_spd(h, d, g);
    bool accepted = false;
    double scale = 1.0;
    for (int half = 0; half < 60; ++half, scale *= 0.5) {
      for (std::size_t j = 0; j < d; ++j) cand[j] = w[j] - scale * step[j];
      const double cobj = objective(cand);
      if (cobj <= obj) {
        w = cand;
        obj = cobj;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    fit.objective_trace.push_back(obj);
    fit.iterations = iter + 1;
  }

  fit.gradient_norm = gradient(w, g, prob);
  fit.converged = fit.gradient_norm <= tolerance;
  fit.weights = std::move(w);
  return fit;
}

std::unique_ptr<TrainedModel> fit(const ClassifierSpec& spec, const Matrix& X,
                                  const std::vector<int>& y) {
  check_training_input(X, y);
  const std::size_t p = X.cols();
  switch (spec.kind) {
    case ClassifierKind::LOGISTIC:
    case ClassifierKind::RIDGE_LOGISTIC: {
      require_both_classes(y, to_string(spec.kind));
      const double alpha =
          spec.kind == ClassifierKind::RIDGE_LOGISTIC ? spec.param("alpha", 1.0) : 0.0;
      LogisticFit f = fit_logistic(X, y, alpha);
      return std::make_unique<LogisticModel>(spec.kind, p, std::move(f.weights));
    }
    case ClassifierKind::GAUSSIAN_NB:
      return fit_gaussian_nb(spec, X, y);
    case ClassifierKind::LDA:
      return fit_lda(spec, X, y);
    case ClassifierKind::KNN: {
      const long long k = std::llround(spec.param("k", 5.0));
      if (k < 1) throw ConfigError("neighbor count must be positive");
      return std::make_unique<KnnModel>(X, y, static_cast<std::size_t>(k));
    }
    case ClassifierKind::DECISION_TREE: {
      const std::size_t depth =
          static_cast<std::size_t>(std::llround(spec.param("max_depth", 0.0)));
      std::vector<std::size_t> rows(X.rows());
      std::iota(rows.begin(), rows.end(), 0);
      TreeBuilder builder(X, y, depth, 0, nullptr);
      return std::make_unique<TreeModel>(p, builder.build(std::move(rows)));
    }
    case ClassifierKind::RANDOM_FOREST:
      return fit_forest(spec, X, y);
  }
  throw ConfigError("unknown classifier kind");
}

HyperGrid default_grid(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::LOGISTIC:
      return {};
    case ClassifierKind::RIDGE_LOGISTIC:
      return {{{"alpha", {0.5, 1.0, 5.0, 10.0}}}};
    case ClassifierKind::GAUSSIAN_NB:
      return {{{"smoothing", {1e-8, 1e-9, 1e-10}}}};
    case ClassifierKind::LDA:
      return {{{"ridge", {1e-6, 1e-4, 1e-2}}}};
    case ClassifierKind::KNN:
      return {{{"k", {3.0, 5.0, 10.0, 15.0}}}};
    case ClassifierKind::DECISION_TREE:
      return {{{"max_depth", {0.0, 3.0, 8.0, 15.0}}}};
    case ClassifierKind::RANDOM_FOREST:
      return {{{"trees", {50.0, 100.0, 150.0, 200.0}}}};
  }
  return {};
}

std::vector<ClassifierSpec> enumerate_grid(ClassifierKind kind, const HyperGrid& grid) {
  if (grid.axes.empty()) return {ClassifierSpec{kind, {}}};
  std::size_t total = 1;
  for (const auto& [name, values] : grid.axes) {
    if (values.empty()) throw ConfigError("grid axis '" + name + "' is empty");
    total *= values.size();
  }
  std::vector<ClassifierSpec> specs;
  specs.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    ClassifierSpec spec{kind, {}};
    std::size_t rem = idx;
    for (std::size_t a = grid.axes.size(); a-- > 0;) {
      const auto& [name, values] = grid.axes[a];
      spec.hyperparams[name] = values[rem % values.size()];
      rem /= values.size();
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

ClassifierSpec grid_tune(ClassifierKind kind, const Matrix& X, const std::vector<int>& y,
                         const HyperGrid& grid, std::size_t inner_k, std::uint64_t seed) {
  check_training_input(X, y);
  std::vector<ClassifierSpec> specs = enumerate_grid(kind, grid);
  if (specs.size() == 1) return specs.front();
  if (inner_k < 2) throw ConfigError("inner fold count must be at least 2");

  Dataset pseudo;
  pseudo.features = X;
  pseudo.outcome = y;
  pseudo.group.assign(y.size(), "all");
  pseudo.row_id.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) pseudo.row_id[i] = "t" + std::to_string(i + 1);
  const FoldAssignment folds = stratified_kfold(pseudo, inner_k, seed);

  std::vector<std::vector<std::size_t>> test_rows(inner_k), train_rows(inner_k);
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t f = 0; f < inner_k; ++f)
      (folds.fold_of[i] == f ? test_rows[f] : train_rows[f]).push_back(i);

  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t si = 0; si < specs.size(); ++si) {
    double sum = 0.0;
    for (std::size_t f = 0; f < inner_k; ++f) {
      const Matrix xtr = X.take_rows(train_rows[f]);
      const Matrix xte = X.take_rows(test_rows[f]);
      std::vector<int> ytr, yte;
      for (std::size_t r : train_rows[f]) ytr.push_back(y[r]);
      for (std::size_t r : test_rows[f]) yte.push_back(y[r]);

      std::size_t hits = 0;
      try {
        const auto model = fit(specs[si], xtr, ytr);
        const auto probs = model->predict_proba(xte);
        for (std::size_t i = 0; i < yte.size(); ++i)
          if ((probs[i] >= 0.5 ? 1 : 0) == yte[i]) ++hits;
      } catch (const DegenerateFitError&) {
        // Single-class training fold: score what a constant model would get.
        const int cls = ytr.empty() ? 0 : ytr.front();
        for (int v : yte)
          if (v == cls) ++hits;
      }
      sum += static_cast<double>(hits) / static_cast<double>(yte.size());
    }
    const double score = sum / static_cast<double>(inner_k);
    if (score > best_score) {
      best_score = score;
      best = si;
    }
  }
  return specs[best];
}

}  // namespace fairsample
