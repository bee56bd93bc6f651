#pragma once

// Synthetic inputs shared by the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spsnmf/linalg.hpp"

namespace synthetic {

struct BlockInstance {
  spsnmf::SimilarityMatrix x;
  std::vector<int> truth;
};

// Exact block-diagonal affinity: 1 inside a block, 0 across blocks, zero
// diagonal.
inline BlockInstance block_diagonal(std::size_t blocks, std::size_t block_size) {
  const std::size_t n = blocks * block_size;
  spsnmf::DenseMatrix a(n, n);
  std::vector<int> truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = static_cast<int>(i / block_size);
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && i / block_size == j / block_size) a(i, j) = 1.0;
    }
  }
  return {spsnmf::SimilarityMatrix(std::move(a)), truth};
}

struct Blobs {
  spsnmf::DenseMatrix features;
  std::vector<int> truth;
  oracle::Mat centers;
};

// Isotropic Gaussian blobs on the corners of a triangle with side `spacing`.
inline Blobs blobs(std::size_t per_blob, double spacing, double sigma, std::uint64_t seed) {
  const oracle::Mat centers{{0.0, 0.0}, {spacing, 0.0}, {0.5 * spacing, spacing * std::sqrt(3.0) / 2.0}};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  const std::size_t n = per_blob * centers.size();
  spsnmf::DenseMatrix f(n, 2);
  std::vector<int> truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i / per_blob;
    truth[i] = static_cast<int>(c);
    f(i, 0) = centers[c][0] + noise(rng);
    f(i, 1) = centers[c][1] + noise(rng);
  }
  return {f, truth, centers};
}

inline oracle::Mat to_rows(const spsnmf::DenseMatrix& m) {
  oracle::Mat out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

// Replace the affinity rows (and columns) of `corrupt` with U[lo, hi] noise.
inline spsnmf::SimilarityMatrix corrupt_rows(const spsnmf::SimilarityMatrix& x, const std::vector<std::size_t>& corrupt,
                                             double lo, double hi, std::uint64_t seed) {
  spsnmf::DenseMatrix a = x.data();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  for (std::size_t c : corrupt) {
    for (std::size_t j = 0; j < a.rows(); ++j) {
      if (j == c) continue;
      const double v = u(rng);
      a(c, j) = v;
      a(j, c) = v;
    }
  }
  return spsnmf::SimilarityMatrix(std::move(a));
}

inline spsnmf::DenseMatrix random_matrix(std::size_t r, std::size_t c, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  spsnmf::DenseMatrix m(r, c);
  for (double& e : m.data()) e = u(rng);
  return m;
}

inline spsnmf::SimilarityMatrix random_similarity(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  spsnmf::DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = u(rng);
  return spsnmf::SimilarityMatrix(std::move(a));
}

}  // namespace synthetic
