#include "spsnmf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spsnmf/errors.hpp"

namespace spsnmf {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw NonFiniteValue("DenseMatrix: non-finite fill value");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw ShapeMismatch("DenseMatrix: expected " + std::to_string(rows_ * cols_) +
                        " entries, got " + std::to_string(entries_.size()));
  }
  if (!all_finite()) throw NonFiniteValue("DenseMatrix: entries must be finite");
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeMismatch("DenseMatrix::from_rows: ragged rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(entries));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> values) {
  if (values.size() != rows_) throw ShapeMismatch("DenseMatrix::set_column: length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double x) { return std::isfinite(x); });
}

bool DenseMatrix::all_nonnegative() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double x) { return x >= 0.0; });
}

SimilarityMatrix::SimilarityMatrix(DenseMatrix data) : data_(std::move(data)) {
  if (!data_.square()) throw InvalidSimilarity("similarity matrix must be square");
  if (!data_.all_finite()) throw InvalidSimilarity("similarity matrix has non-finite entries");
  const std::size_t n = data_.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (data_(i, j) < 0.0) throw InvalidSimilarity("similarity matrix has negative entries");
      if (j > i && data_(i, j) != data_(j, i)) {
        throw InvalidSimilarity("similarity matrix is not symmetric at (" + std::to_string(i) +
                                ", " + std::to_string(j) + ")");
      }
    }
  }
}

bool SimilarityMatrix::zero_diagonal() const noexcept {
  for (std::size_t i = 0; i < n(); ++i) {
    if (data_(i, i) != 0.0) return false;
  }
  return true;
}

void FactorPair::validate() const {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw InvalidFactors("factor shapes differ");
  }
  if (!u.all_nonnegative() || !v.all_nonnegative()) {
    throw InvalidFactors("factors must be nonnegative");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double frobenius_norm(const DenseMatrix& m) {
  double s = 0.0;
  for (double x : m.data()) s += x * x;
  return std::sqrt(s);
}

namespace {

// y = M x
void apply(const DenseMatrix& m, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < m.rows(); ++i) y[i] = dot(m.row(i), x);
}

// y = M^T x
void apply_transpose(const DenseMatrix& m, std::span<const double> x, std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) y[j] += x[i] * row[j];
  }
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace

SpectralNormEstimate spectral_norm(const DenseMatrix& m, double tol, std::size_t max_iter) {
  if (!m.square()) throw ShapeMismatch("spectral_norm: matrix must be square");
  if (!(tol > 0.0)) throw Error("spectral_norm: tol must be positive");
  SpectralNormEstimate est;
  const std::size_t n = m.rows();
  if (n == 0 || frobenius_norm(m) == 0.0) return est;

  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n), z(n);

  apply(m, x, y);
  if (norm2(y) == 0.0) {
    // The all-ones start lies in the null space; restart from the basis
    // vector of the heaviest column, still deterministic.
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += m(i, j) * m(i, j);
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    std::fill(x.begin(), x.end(), 0.0);
    x[best] = 1.0;
    apply(m, x, y);
  }

  double sigma = norm2(y);
  est.converged = false;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    apply_transpose(m, y, z);
    const double zn = norm2(z);
    if (zn == 0.0) {
      est.converged = true;
      est.iterations = it;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / zn;
    apply(m, x, y);
    const double next = norm2(y);
    est.iterations = it;
    const bool done = std::abs(next - sigma) <= tol * next;
    sigma = std::max(sigma, next);
    if (done) {
      est.converged = true;
      break;
    }
  }
  est.value = sigma;
  return est;
}

DenseMatrix multiply_abt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw ShapeMismatch("multiply_abt: inner dimensions differ");
  DenseMatrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = dot(a.row(i), b.row(j));
  }
  return out;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeMismatch("subtract: shapes differ");
  DenseMatrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bd[i];
  return out;
}

DenseMatrix rank_one_residual(const SimilarityMatrix& x, const FactorPair& factors, std::size_t c) {
  const std::size_t n = x.n();
  const std::size_t k = factors.k();
  if (c >= k) {
    throw IndexOutOfRange("rank_one_residual: column " + std::to_string(c) + " out of range for k = " +
                          std::to_string(k));
  }
  if (factors.n() != n || factors.v.rows() != n || factors.v.cols() != k) {
    throw ShapeMismatch("rank_one_residual: factor shape does not match X");
  }
  DenseMatrix out = x.data();
  for (std::size_t p = 0; p < n; ++p) {
    const auto up = factors.u.row(p);
    for (std::size_t q = 0; q < n; ++q) {
      const auto vq = factors.v.row(q);
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (j != c) s += up[j] * vq[j];
      }
      out(p, q) -= s;
    }
  }
  return out;
}

}  // namespace spsnmf
