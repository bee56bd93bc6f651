#include "spsnmf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "spsnmf/errors.hpp"

namespace spsnmf {

namespace {

std::vector<std::size_t> canonical_ids(std::span<const int> labels, std::size_t& classes) {
  std::map<int, std::size_t> ids;
  for (int l : labels) ids.emplace(l, 0);
  std::size_t next = 0;
  for (auto& [raw, id] : ids) id = next++;
  classes = next;
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids.at(labels[i]);
  return out;
}

// Both partitions coincide up to a relabeling of class ids.
bool same_partition(const ContingencyTable& t) {
  if (t.rows() != t.cols()) return false;
  for (const auto& row : t.counts) {
    if (std::count_if(row.begin(), row.end(), [](long c) { return c > 0; }) != 1) return false;
  }
  for (std::size_t j = 0; j < t.cols(); ++j) {
    std::size_t nz = 0;
    for (const auto& row : t.counts) nz += row[j] > 0 ? 1 : 0;
    if (nz != 1) return false;
  }
  return true;
}

double choose2(long m) { return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1); }

double entropy(const std::vector<long>& sums, double total) {
  double h = 0.0;
  for (long s : sums) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / total;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

ContingencyTable contingency(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) {
    throw LengthMismatch("label vectors differ in length (" + std::to_string(pred.size()) + " vs " +
                         std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) throw LengthMismatch("label vectors must be non-empty");
  std::size_t r = 0, c = 0;
  const auto p = canonical_ids(pred, r);
  const auto t = canonical_ids(truth, c);

  ContingencyTable table;
  table.counts.assign(r, std::vector<long>(c, 0));
  table.row_sums.assign(r, 0);
  table.col_sums.assign(c, 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    ++table.counts[p[i]][t[i]];
    ++table.row_sums[p[i]];
    ++table.col_sums[t[i]];
  }
  table.total = static_cast<long>(p.size());
  return table;
}

std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  for (const auto& row : cost) {
    if (row.size() != n) throw ShapeMismatch("solve_assignment: cost matrix must be square");
  }
  if (n == 0) return {};
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is a virtual start.
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - row_pot[i0] - col_pot[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          row_pot[match[j]] += delta;
          col_pot[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  const ContingencyTable t = contingency(pred, truth);
  const std::size_t m = std::max(t.rows(), t.cols());
  // Maximize matches == minimize negated counts; padding entries are zero.
  std::vector<std::vector<double>> cost(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) cost[i][j] = -static_cast<double>(t.counts[i][j]);
  }
  const auto assignment = solve_assignment(cost);
  long matched = 0;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (assignment[i] < t.cols()) matched += t.counts[i][assignment[i]];
  }
  return static_cast<double>(matched) / static_cast<double>(t.total);
}

double nmi(std::span<const int> pred, std::span<const int> truth) {
  const ContingencyTable t = contingency(pred, truth);
  if (same_partition(t)) return 1.0;
  const auto total = static_cast<double>(t.total);
  const double hp = entropy(t.row_sums, total);
  const double ht = entropy(t.col_sums, total);
  if (hp == 0.0 || ht == 0.0) return 0.0;
  double mi = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const long c = t.counts[i][j];
      if (c == 0) continue;
      const double pij = static_cast<double>(c) / total;
      mi += pij * std::log(static_cast<double>(c) * total /
                           (static_cast<double>(t.row_sums[i]) * static_cast<double>(t.col_sums[j])));
    }
  }
  return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

double ari(std::span<const int> pred, std::span<const int> truth) {
  const ContingencyTable t = contingency(pred, truth);
  if (t.total < 2) throw LengthMismatch("ari needs at least two samples");
  double index = 0.0;
  for (const auto& row : t.counts) {
    for (long c : row) index += choose2(c);
  }
  double sum_a = 0.0, sum_b = 0.0;
  for (long a : t.row_sums) sum_a += choose2(a);
  for (long b : t.col_sums) sum_b += choose2(b);
  const double expected = sum_a * sum_b / choose2(t.total);
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return same_partition(t) ? 1.0 : 0.0;
  return (index - expected) / denom;
}

}  // namespace spsnmf
