#include "spsnmf/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spsnmf/errors.hpp"

namespace spsnmf {

double gaussian_affinity(double sq_dist, double sigma_i, double sigma_j) {
  return std::exp(-sq_dist / (sigma_i * sigma_j));
}

DenseMatrix pairwise_sq_dists(const DenseMatrix& features) {
  const std::size_t n = features.rows();
  DenseMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = features.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto xj = features.row(j);
      double s = 0.0;
      for (std::size_t t = 0; t < xi.size(); ++t) {
        const double diff = xi[t] - xj[t];
        s += diff * diff;
      }
      s = std::max(s, 0.0);
      d(i, j) = s;
      d(j, i) = s;
    }
  }
  return d;
}

NeighborSets knn_sets(const DenseMatrix& sq_dists, std::size_t k_nn) {
  const std::size_t n = sq_dists.rows();
  if (!sq_dists.square()) throw ShapeMismatch("knn_sets: distance matrix must be square");
  if (k_nn == 0 || k_nn >= n) {
    throw InvalidK("knn_sets: k_nn = " + std::to_string(k_nn) + " must satisfy 1 <= k_nn < n = " +
                   std::to_string(n));
  }
  NeighborSets out(n);
  std::vector<std::size_t> order(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order[pos++] = j;
    }
    const auto row = sq_dists.row(i);
    const auto closer = [&](std::size_t a, std::size_t b) {
      return row[a] < row[b] || (row[a] == row[b] && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_nn), order.end(),
                      closer);
    out[i].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_nn));
  }
  return out;
}

SimilarityMatrix build_similarity(const DenseMatrix& features, const GraphConfig& cfg) {
  if (!(cfg.sigma_floor > 0.0)) throw InvalidConfig("build_similarity: sigma_floor must be > 0");
  const DenseMatrix d = pairwise_sq_dists(features);
  const NeighborSets nbrs = knn_sets(d, cfg.k_nn);
  const std::size_t n = d.rows();

  std::vector<double> sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    sigma[i] = std::max(std::sqrt(d(i, nbrs[i].back())), cfg.sigma_floor);
  }

  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : nbrs[i]) {
      // Same expression for (i,j) and (j,i) keeps the result bitwise symmetric.
      const std::size_t lo = std::min(i, j);
      const std::size_t hi = std::max(i, j);
      const double value = gaussian_affinity(d(lo, hi), sigma[lo], sigma[hi]);
      a(lo, hi) = value;
      a(hi, lo) = value;
    }
  }
  return SimilarityMatrix(std::move(a));
}

}  // namespace spsnmf
