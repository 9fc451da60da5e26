#include "fairsample/smote.hpp"

#include <algorithm>
#include <numeric>

#include "fairsample/error.hpp"
#include "fairsample/kernels.hpp"
#include "fairsample/rng.hpp"

namespace fairsample {

std::vector<std::size_t> k_nearest(const Matrix& cell, std::size_t i, std::size_t k) {
  const std::size_t m = cell.rows();
  if (m < 2) throw NoNeighborError("cell has no neighbors");
  if (i >= m) throw ConfigError("row index out of range");
  if (k == 0) throw ConfigError("neighbor count must be positive");

  std::vector<double> dist(m, 0.0);
  const double* xi = cell.row(i).data();
  for (std::size_t j = 0; j < m; ++j)
    if (j != i) dist[j] = kernels::squared_distance(xi, cell.row(j).data(), cell.cols());

  std::vector<std::size_t> order;
  order.reserve(m - 1);
  for (std::size_t j = 0; j < m; ++j)
    if (j != i) order.push_back(j);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  order.resize(std::min(k, m - 1));
  return order;
}

std::vector<double> synthesize(std::span<const double> x_i, std::span<const double> x_nn,
                               double u) {
  if (x_i.size() != x_nn.size()) throw DataError("point dimensions differ");
  if (u < 0.0 || u > 1.0) throw ConfigError("interpolation parameter out of [0,1]");
  std::vector<double> z(x_i.size());
  for (std::size_t j = 0; j < x_i.size(); ++j) z[j] = x_i[j] + u * (x_nn[j] - x_i[j]);
  return z;
}

SmoteResult smote_sample(const Matrix& cell, std::size_t count, const SmoteParams& params) {
  const std::size_t m = cell.rows();
  if (m == 0) throw DataError("cannot synthesize from an empty cell");
  if (params.k == 0) throw ConfigError("neighbor count must be positive");

  SmoteResult res;
  res.rows = Matrix(0, cell.cols());
  res.origins.reserve(count);
  if (count == 0) return res;

  if (m == 1) {
    // No neighbors to interpolate toward: duplicate the lone row.
    const auto row = cell.row(0);
    for (std::size_t r = 0; r < count; ++r) {
      res.rows.append_row(row);
      res.origins.push_back({0, 0, 0.0});
    }
    return res;
  }

  Rng rng(params.seed);
  std::vector<std::vector<std::size_t>> nn_cache(m);
  for (std::size_t r = 0; r < count; ++r) {
    const std::size_t s = r % m;  // round-robin over the cell
    auto& nn = nn_cache[s];
    if (nn.empty()) nn = k_nearest(cell, s, params.k);
    const std::size_t partner = nn[rng.below(nn.size())];
    const double u = rng.uniform();  // [0,1)
    res.rows.append_row(synthesize(cell.row(s), cell.row(partner), u));
    res.origins.push_back({s, partner, u});
  }
  return res;
}

}  // namespace fairsample
