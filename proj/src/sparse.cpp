#include "fracflow/sparse.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <stdexcept>

namespace fracflow {

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != cols)
    throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
  std::vector<double> y(rows, 0.0);
  for (int i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      acc += values[k] * x[col_indices[k]];
    y[i] = acc;
  }
  return y;
}

std::vector<double> SparseMatrix::multiply_transpose(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != rows)
    throw std::invalid_argument("SparseMatrix::multiply_transpose: dimension mismatch");
  std::vector<double> y(cols, 0.0);
  for (int i = 0; i < rows; ++i)
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      y[col_indices[k]] += values[k] * x[i];
  return y;
}

SparseMatrix compress(const TripletBuffer& buffer, int rows, int cols) {
  for (const auto& t : buffer.entries)
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::out_of_range("compress: triplet index out of range");

  std::vector<Triplet> sorted = buffer.entries;
  std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_offsets.assign(rows + 1, 0);
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < sorted.size() && sorted[j].row == sorted[i].row && sorted[j].col == sorted[i].col)
      sum += sorted[j++].value;
    m.col_indices.push_back(sorted[i].col);
    m.values.push_back(sum);
    ++m.row_offsets[sorted[i].row + 1];
    i = j;
  }
  for (int r = 0; r < rows; ++r) m.row_offsets[r + 1] += m.row_offsets[r];
  return m;
}

struct Factorization::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

Factorization::Factorization(const SparseMatrix& m) : impl_(new Impl), dim_(m.rows) {
  if (m.rows != m.cols) throw std::invalid_argument("Factorization: matrix must be square");
  Eigen::SparseMatrix<double> a(m.rows, m.cols);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.values.size());
  for (int i = 0; i < m.rows; ++i)
    for (int k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k)
      trips.emplace_back(i, m.col_indices[k], m.values[k]);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  impl_->lu.compute(a);
  if (impl_->lu.info() != Eigen::Success)
    throw std::runtime_error("Factorization: matrix is singular or factorization failed");
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

std::vector<double> Factorization::solve(const std::vector<double>& rhs) const {
  if (static_cast<int>(rhs.size()) != dim_)
    throw std::invalid_argument("Factorization::solve: dimension mismatch");
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), dim_);
  Eigen::VectorXd x = impl_->lu.solve(b);
  return std::vector<double>(x.data(), x.data() + dim_);
}

}  // namespace fracflow
