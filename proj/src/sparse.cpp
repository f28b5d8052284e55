#include "burgers/sparse.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "burgers/error.hpp"

namespace burgers {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<int> row_offsets,
                           std::vector<int> column_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      column_indices_(std::move(column_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != rows_ + 1 || row_offsets_.front() != 0 ||
      static_cast<std::size_t>(row_offsets_.back()) != column_indices_.size() ||
      column_indices_.size() != values_.size()) {
    throw DimensionMismatch("inconsistent CSR arrays");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_offsets_[r] > row_offsets_[r + 1]) throw DimensionMismatch("CSR offsets decrease");
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      const int c = column_indices_[k];
      if (c < 0 || static_cast<std::size_t>(c) >= cols_) throw DimensionMismatch("column out of range");
      if (k > row_offsets_[r] && column_indices_[k - 1] >= c) {
        throw DimensionMismatch("CSR columns not strictly increasing");
      }
    }
  }
}

int SparseMatrix::find(std::size_t r, std::size_t c) const {
  if (r >= rows_) return -1;
  const auto first = column_indices_.begin() + row_offsets_[r];
  const auto last = column_indices_.begin() + row_offsets_[r + 1];
  const auto it = std::lower_bound(first, last, static_cast<int>(c));
  if (it == last || *it != static_cast<int>(c)) return -1;
  return static_cast<int>(it - column_indices_.begin());
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const int k = find(r, c);
  return k < 0 ? 0.0 : values_[k];
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && row_offsets_ == other.row_offsets_ &&
         column_indices_ == other.column_indices_;
}

void SparseMatrix::add_scaled(double s, const SparseMatrix& other) {
  if (!same_pattern(other)) throw DimensionMismatch("add_scaled needs identical sparsity patterns");
  kernels::axpy(s, other.values_, values_);
}

SparseMatrix SparseMatrix::scaled(double s) const {
  SparseMatrix out = *this;
  for (double& v : out.values_) v *= s;
  return out;
}

kernels::CsrView SparseMatrix::view() const {
  return {rows_, row_offsets_, column_indices_, values_};
}

double SparseMatrix::norm_inf() const {
  double m = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) s += std::abs(values_[k]);
    m = std::max(m, s);
  }
  return m;
}

void SparseMatrix::eliminate(std::span<const int> indices) {
  if (indices.empty()) return;
  std::vector<char> drop(cols_, 0);
  for (int i : indices) drop.at(static_cast<std::size_t>(i)) = 1;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      const auto c = static_cast<std::size_t>(column_indices_[k]);
      if ((r < drop.size() && drop[r]) || drop[c]) values_[k] = (r == c) ? 1.0 : 0.0;
    }
  }
}

SparseMatrix csr_from_triplets(std::span<const Triplet> triplets, std::size_t rows, std::size_t cols) {
  for (const auto& t : triplets) {
    if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= rows ||
        static_cast<std::size_t>(t.col) >= cols) {
      throw InvalidParameter("triplet index out of range");
    }
  }
  // Counting sort by row, then a stable sort by column within each row so
  // duplicates are summed in input order.
  std::vector<int> count(rows + 1, 0);
  for (const auto& t : triplets) ++count[t.row + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<int> order(triplets.size());
  {
    std::vector<int> fill(count.begin(), count.end() - 1);
    for (std::size_t i = 0; i < triplets.size(); ++i) order[fill[triplets[i].row]++] = static_cast<int>(i);
  }
  std::vector<int> offsets(rows + 1, 0);
  std::vector<int> cols_out;
  std::vector<double> vals;
  cols_out.reserve(triplets.size());
  vals.reserve(triplets.size());
  for (std::size_t r = 0; r < rows; ++r) {
    auto first = order.begin() + count[r];
    auto last = order.begin() + count[r + 1];
    std::stable_sort(first, last, [&](int a, int b) { return triplets[a].col < triplets[b].col; });
    for (auto it = first; it != last; ++it) {
      const auto& t = triplets[*it];
      if (static_cast<int>(cols_out.size()) > offsets[r] && cols_out.back() == t.col) {
        vals.back() += t.value;
      } else {
        cols_out.push_back(t.col);
        vals.push_back(t.value);
      }
    }
    offsets[r + 1] = static_cast<int>(cols_out.size());
  }
  return SparseMatrix(rows, cols, std::move(offsets), std::move(cols_out), std::move(vals));
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw DimensionMismatch("spmv: vector length differs from matrix columns");
  Vector y(a.rows());
  kernels::csr_spmv(a.view(), x, y);
  return y;
}

double norm2(std::span<const double> x) { return std::sqrt(kernels::dot(x, x)); }

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double residual_norm(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
  Vector r = spmv(a, x);
  kernels::axpy(-1.0, b, r);
  return norm2(r);
}

CgResult solve_spd(const SparseMatrix& a, std::span<const double> b, double tol) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw DimensionMismatch("solve_spd: dimension mismatch");
  CgResult out;
  out.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return out;

  Vector inv_diag(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a.at(i, i);
    if (d > 0.0) inv_diag[i] = 1.0 / d;
  }
  Vector r(b.begin(), b.end());
  Vector z(n), p(n), q(n);
  kernels::multiply(inv_diag, r, z);
  p = z;
  double rz = kernels::dot(r, z);
  const int cap = static_cast<int>(10 * n);
  double rnorm = bnorm;
  for (int it = 1; it <= cap; ++it) {
    kernels::csr_spmv(a.view(), p, q);
    const double pq = kernels::dot(p, q);
    if (!(pq > 0.0)) throw SolverFailure("conjugate gradients broke down: matrix is not positive definite", rnorm / bnorm);
    const double alpha = rz / pq;
    kernels::axpy(alpha, p, out.x);
    kernels::axpy(-alpha, q, r);
    rnorm = norm2(r);
    if (rnorm <= tol * bnorm) {
      out.iterations = it;
      // Recursive residuals drift; confirm against the true residual.
      out.relative_residual = residual_norm(a, out.x, b) / bnorm;
      if (out.relative_residual <= tol) return out;
      kernels::csr_spmv(a.view(), out.x, r);
      kernels::xpby(b, -1.0, r);
      rnorm = norm2(r);
    }
    kernels::multiply(inv_diag, r, z);
    const double rz_next = kernels::dot(r, z);
    kernels::xpby(z, rz_next / rz, p);
    rz = rz_next;
  }
  throw SolverFailure("conjugate gradients hit the iteration cap", rnorm / bnorm);
}

struct SparseLu::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  std::vector<int> offsets;
  std::vector<int> columns;
  bool analyzed = false;
};

SparseLu::SparseLu() : impl_(std::make_unique<Impl>()) {}
SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

void SparseLu::factorize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("LU needs a square matrix");
  using RowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
  const Eigen::Map<const RowMajor> map(static_cast<Eigen::Index>(a.rows()),
                                       static_cast<Eigen::Index>(a.cols()),
                                       static_cast<Eigen::Index>(a.nnz()), a.row_offsets().data(),
                                       a.column_indices().data(), a.values().data());
  Eigen::SparseMatrix<double> cm = map;
  cm.makeCompressed();
  if (!impl_->analyzed || impl_->offsets != a.row_offsets() || impl_->columns != a.column_indices()) {
    impl_->lu.analyzePattern(cm);
    impl_->offsets = a.row_offsets();
    impl_->columns = a.column_indices();
    impl_->analyzed = true;
  }
  impl_->lu.factorize(cm);
  if (impl_->lu.info() != Eigen::Success) {
    throw SingularMatrix("sparse LU: " + impl_->lu.lastErrorMessage());
  }
}

Vector SparseLu::solve(std::span<const double> b) const {
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  const Eigen::VectorXd x = impl_->lu.solve(rhs);
  return Vector(x.data(), x.data() + x.size());
}

Vector solve_general(const SparseMatrix& a, std::span<const double> b) {
  if (a.rows() != a.cols() || b.size() != a.rows()) throw DimensionMismatch("solve_general: dimension mismatch");
  SparseLu lu;
  lu.factorize(a);
  Vector x = lu.solve(b);
  Vector r = spmv(a, x);
  kernels::axpy(-1.0, b, r);
  const double res = norm_inf(r);
  const double bound = 1e-10 * (a.norm_inf() * norm_inf(x) + norm_inf(b));
  if (!std::isfinite(res) || res > bound) {
    throw SingularMatrix("sparse LU residual check failed (matrix numerically singular)");
  }
  return x;
}

BorderedSolution solve_bordered(const BorderedSystem& sys) {
  const std::size_t n = sys.core.rows();
  if (sys.core.cols() != n || sys.constraint_row.size() != n || sys.rhs.size() != n) {
    throw DimensionMismatch("bordered system: dimension mismatch");
  }
  if (std::none_of(sys.constraint_row.begin(), sys.constraint_row.end(), [](double c) { return c != 0.0; })) {
    throw InvalidParameter("constraint row must have a nonzero entry");
  }
  std::vector<Triplet> t;
  t.reserve(sys.core.nnz() + 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (int k = sys.core.row_offsets()[r]; k < sys.core.row_offsets()[r + 1]; ++k) {
      t.push_back({static_cast<int>(r), sys.core.column_indices()[k], sys.core.values()[k]});
    }
    if (sys.constraint_row[r] != 0.0) {
      t.push_back({static_cast<int>(r), static_cast<int>(n), sys.constraint_row[r]});
      t.push_back({static_cast<int>(n), static_cast<int>(r), sys.constraint_row[r]});
    }
  }
  const SparseMatrix aug = csr_from_triplets(t, n + 1, n + 1);
  Vector rhs = sys.rhs;
  rhs.push_back(sys.constraint_value);
  Vector sol = solve_general(aug, rhs);
  BorderedSolution out;
  out.multiplier = sol.back();
  sol.pop_back();
  out.x = std::move(sol);
  return out;
}

}  // namespace burgers
