#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace spsnmf {

// Dense real matrix stored in row-major order.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // Throws ShapeMismatch if entries.size() != rows * cols and
  // NonFiniteValue if any entry is NaN or infinite.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }

  std::span<double> data() noexcept { return entries_; }
  std::span<const double> data() const noexcept { return entries_; }

  std::vector<double> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> values);

  bool all_finite() const noexcept;
  bool all_nonnegative() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// Symmetric nonnegative affinity matrix. Construction verifies exact
// symmetry, nonnegativity and finiteness.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(DenseMatrix data);

  std::size_t n() const noexcept { return data_.rows(); }
  const DenseMatrix& data() const noexcept { return data_; }
  double operator()(std::size_t i, std::size_t j) const { return data_(i, j); }

  // True when every diagonal entry is exactly zero (the convention used by
  // the k-NN graph builder).
  bool zero_diagonal() const noexcept;

 private:
  DenseMatrix data_;
};

// Nonnegative factor pair (U, V), both n x k.
struct FactorPair {
  DenseMatrix u;
  DenseMatrix v;

  std::size_t n() const noexcept { return u.rows(); }
  std::size_t k() const noexcept { return u.cols(); }

  // Throws InvalidFactors on shape disagreement or a negative entry.
  void validate() const;

  friend bool operator==(const FactorPair&, const FactorPair&) = default;
};

struct SpectralNormEstimate {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

double frobenius_norm(const DenseMatrix& m);

// Largest singular value via power iteration on M^T M started from the
// normalized all-ones vector. When the iteration budget is exhausted the best
// estimate is returned with converged == false.
SpectralNormEstimate spectral_norm(const DenseMatrix& m, double tol = 1e-10,
                                   std::size_t max_iter = 10000);

// U V^T for n x k factors.
DenseMatrix multiply_abt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);

// X_c = X - sum_{j != c} u_j v_j^T, computed directly.
DenseMatrix rank_one_residual(const SimilarityMatrix& x, const FactorPair& factors, std::size_t c);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace spsnmf
