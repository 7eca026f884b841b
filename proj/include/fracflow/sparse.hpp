#pragma once

#include <memory>
#include <vector>

namespace fracflow {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Assembly buffer; duplicate (row, col) contributions are summed on compression.
struct TripletBuffer {
  std::vector<Triplet> entries;

  void add(int row, int col, double value) { entries.push_back({row, col, value}); }
};

/// Compressed-row storage with sorted column indices and no duplicates.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_offsets;  // size rows + 1
  std::vector<int> col_indices;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(values.size()); }
  /// y = A x
  std::vector<double> multiply(const std::vector<double>& x) const;
  /// y = A^T x
  std::vector<double> multiply_transpose(const std::vector<double>& x) const;
};

SparseMatrix compress(const TripletBuffer& buffer, int rows, int cols);

/// Direct sparse LU factorization of a fixed square matrix, reusable for
/// many right-hand sides. Solves are deterministic: repeated solves with the
/// same rhs are bit-identical.
class Factorization {
 public:
  explicit Factorization(const SparseMatrix& m);
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;
  Factorization(const Factorization&) = delete;
  Factorization& operator=(const Factorization&) = delete;

  std::vector<double> solve(const std::vector<double>& rhs) const;
  int dim() const { return dim_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int dim_ = 0;
};

}  // namespace fracflow
