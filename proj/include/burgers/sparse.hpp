#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "burgers/kernels.hpp"

namespace burgers {

using Vector = std::vector<double>;

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix with strictly increasing columns per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<int> row_offsets,
               std::vector<int> column_indices, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& column_indices() const { return column_indices_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Stored entry or 0.
  double at(std::size_t r, std::size_t c) const;
  /// Position of (r, c) in values(), or -1 if not stored.
  int find(std::size_t r, std::size_t c) const;

  bool same_pattern(const SparseMatrix& other) const;
  /// this += s * other; patterns must match.
  void add_scaled(double s, const SparseMatrix& other);
  SparseMatrix scaled(double s) const;

  kernels::CsrView view() const;
  double norm_inf() const;

  /// Zero row and column of each listed index and put 1 on the diagonal.
  void eliminate(std::span<const int> indices);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> column_indices_;
  std::vector<double> values_;
};

/// Duplicates summed, columns sorted.
SparseMatrix csr_from_triplets(std::span<const Triplet> triplets, std::size_t rows, std::size_t cols);

Vector spmv(const SparseMatrix& a, std::span<const double> x);

double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
/// ||A x - b||_2
double residual_norm(const SparseMatrix& a, std::span<const double> x, std::span<const double> b);

struct CgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients to ||Ax-b|| <= tol ||b||, at
/// most 10 n iterations. Throws SolverFailure past the cap.
CgResult solve_spd(const SparseMatrix& a, std::span<const double> b, double tol = 1e-12);

/// Sparse LU with partial pivoting. The symbolic analysis is kept between
/// factorizations of matrices sharing one sparsity pattern.
class SparseLu {
 public:
  SparseLu();
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;

  /// Throws SingularMatrix on a zero pivot.
  void factorize(const SparseMatrix& a);
  Vector solve(std::span<const double> b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Direct solve; the residual bound 1e-10 (||A||_inf ||x||_inf + ||b||_inf)
/// is checked before returning.
Vector solve_general(const SparseMatrix& a, std::span<const double> b);

/// [[A, c^T], [c, 0]] (x, mu) = (b, value).
struct BorderedSystem {
  SparseMatrix core;
  Vector constraint_row;
  Vector rhs;
  double constraint_value = 0.0;
};

struct BorderedSolution {
  Vector x;
  double multiplier = 0.0;
};

BorderedSolution solve_bordered(const BorderedSystem& sys);

}  // namespace burgers
