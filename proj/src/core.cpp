#include "fairsample/core.hpp"

namespace fairsample {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  if (rows.empty()) return m;
  m.rows_ = rows.size();
  m.cols_ = rows.front().size();
  m.data_.reserve(m.rows_ * m.cols_);
  for (const auto& r : rows) {
    if (r.size() != m.cols_) throw DataError("ragged row in matrix construction");
    m.data_.insert(m.data_.end(), r.begin(), r.end());
  }
  return m;
}

void Matrix::append_row(std::span<const double> r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) throw DataError("appended row has wrong width");
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

Matrix Matrix::take_rows(std::span<const std::size_t> indices) const {
  Matrix out;
  out.cols_ = cols_;
  out.rows_ = indices.size();
  out.data_.reserve(indices.size() * cols_);
  for (std::size_t i : indices) {
    auto r = row(i);
    out.data_.insert(out.data_.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace fairsample
