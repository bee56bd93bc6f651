#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spsnmf {

struct ContingencyTable {
  // counts[i][j]: samples with predicted class i and true class j, ids
  // canonicalized to 0..r-1 / 0..c-1 in ascending order of the raw ids.
  std::vector<std::vector<long>> counts;
  std::vector<long> row_sums;
  std::vector<long> col_sums;
  long total = 0;

  std::size_t rows() const noexcept { return counts.size(); }
  std::size_t cols() const noexcept { return col_sums.size(); }
};

ContingencyTable contingency(std::span<const int> pred, std::span<const int> truth);

// Minimum-cost perfect assignment on a square cost matrix (Kuhn-Munkres with
// potentials, O(n^3)). Returns assignment[row] = column.
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost);

// Fraction of samples matched under the best one-to-one class mapping.
double accuracy(std::span<const int> pred, std::span<const int> truth);

// I(pred; truth) / sqrt(H(pred) H(truth)), natural logs.
double nmi(std::span<const int> pred, std::span<const int> truth);

// Adjusted Rand index (permutation model); may be negative.
double ari(std::span<const int> pred, std::span<const int> truth);

}  // namespace spsnmf
