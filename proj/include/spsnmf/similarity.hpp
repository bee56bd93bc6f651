#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spsnmf/linalg.hpp"

namespace spsnmf {

// Feature matrix plus ground-truth class ids. Labels are only consumed by the
// evaluation metrics.
struct LabeledDataset {
  DenseMatrix features;
  std::vector<int> labels;
  std::string name;
  // class_names[c] is the raw label text that was mapped to id c.
  std::vector<std::string> class_names;
};

struct GraphConfig {
  std::size_t k_nn = 7;
  double sigma_floor = 1e-12;
};

using NeighborSets = std::vector<std::vector<std::size_t>>;

// exp(-sq_dist / (sigma_i * sigma_j))
double gaussian_affinity(double sq_dist, double sigma_i, double sigma_j);

// Squared Euclidean distances between rows; exactly symmetric, zero diagonal.
DenseMatrix pairwise_sq_dists(const DenseMatrix& features);

// k_nn nearest neighbors of each sample (excluding itself), ordered by
// distance with ties going to the smaller index. Throws InvalidK if
// k_nn == 0 or k_nn >= n.
NeighborSets knn_sets(const DenseMatrix& sq_dists, std::size_t k_nn);

// Self-tuning Gaussian affinity on the symmetrized k-NN mask:
//   A[i][j] = exp(-D[i][j] / (sigma_i * sigma_j))  if j in knn(i) or i in knn(j)
// with sigma_i = max(sqrt(D[i][k_nn-th neighbor]), sigma_floor) and a zero
// diagonal.
SimilarityMatrix build_similarity(const DenseMatrix& features, const GraphConfig& cfg);

}  // namespace spsnmf
