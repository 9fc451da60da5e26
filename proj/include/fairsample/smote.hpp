#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fairsample/core.hpp"

namespace fairsample {

// Synthetic row generation on segments between a cell row and one of its
// nearest neighbors.
struct SmoteParams {
  std::size_t k = 5;       // neighbor pool size, clamped to cell size - 1
  std::uint64_t seed = 0;  // drives neighbor choice and interpolation
};

// How one synthetic row was built: rows[i] = cell.row(seed_row) +
// u * (cell.row(neighbor_row) - cell.row(seed_row)).
struct SmoteOrigin {
  std::size_t seed_row = 0;
  std::size_t neighbor_row = 0;
  double u = 0.0;
};

struct SmoteResult {
  Matrix rows;
  std::vector<SmoteOrigin> origins;  // one entry per generated row
};

// Indices of the min(k, m-1) rows of `cell` nearest to row i by Euclidean
// distance, nearest first; distance ties break toward the lower index.
// Throws NoNeighborError when the cell has a single row.
std::vector<std::size_t> k_nearest(const Matrix& cell, std::size_t i, std::size_t k);

// Point on the segment from x_i to x_nn at parameter u: x_i + u*(x_nn - x_i).
std::vector<double> synthesize(std::span<const double> x_i, std::span<const double> x_nn,
                               double u);

// Generate `count` synthetic rows from a cell.  Seed rows are taken
// round-robin over the cell (cycling when count exceeds the cell size); the
// partner is drawn uniformly from the seed row's k-nearest set and u uniformly
// from [0,1).  A single-row cell degrades to exact duplication.  Deterministic
// for fixed params.
SmoteResult smote_sample(const Matrix& cell, std::size_t count, const SmoteParams& params);

}  // namespace fairsample
