#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "spsnmf/linalg.hpp"

namespace spsnmf {

// Per-sample weights in [0, 1].
class SampleWeights {
 public:
  SampleWeights() = default;
  // Throws InvalidWeights if any entry lies outside [0, 1] or is not finite.
  explicit SampleWeights(std::vector<double> values);

  static SampleWeights ones(std::size_t n) { return SampleWeights(std::vector<double>(n, 1.0)); }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  std::size_t active_count() const noexcept;  // entries > 0
  double mean() const noexcept;
  bool is_binary() const noexcept;

  friend bool operator==(const SampleWeights&, const SampleWeights&) = default;

 private:
  std::vector<double> values_;
};

// Raw squared row residuals l_i = sum_j (X - U V^T)_{ij}^2 (no 1/2 factor).
using PerSampleLoss = std::vector<double>;

// Coupling weight of the ||U - V||_F^2 penalty; always > 0.
class PenaltyTheta {
 public:
  explicit PenaltyTheta(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

struct TraceRecord {
  std::size_t sweep = 0;
  double objective = 0.0;
  std::size_t active_samples = 0;
  double mean_weight = 0.0;
  // Self-paced regularizer f(w; lambda) at the time of the sweep; kept apart
  // from `objective` so objectives stay comparable across rounds.
  double regularizer = 0.0;
};

using SolveTrace = std::vector<TraceRecord>;

// 1/2 sum_i w_i sum_j (X - U V^T)_{ij}^2 + theta/2 ||U - V||_F^2
double weighted_objective(const SimilarityMatrix& x, const FactorPair& factors, const SampleWeights& w,
                          const PenaltyTheta& theta);

PerSampleLoss per_sample_loss(const SimilarityMatrix& x, const FactorPair& factors);

// theta = max(1, ceil(b)) with b = 1/2 (||X||_2 + ||X - U0 U0^T||_F); bumped
// by one when b is already an integer so that theta > b strictly.
PenaltyTheta theta_from_bound(const SimilarityMatrix& x, const DenseMatrix& u0);

// Exact nonnegative minimizers of
//   1/2 sum_{p,q} w_p (Xc[p][q] - u[p] v[q])^2 + theta/2 ||u - v||^2
// over u (resp. v) with the other vector held fixed.
std::vector<double> update_column_u(const DenseMatrix& xc, std::span<const double> u,
                                    std::span<const double> v, const SampleWeights& w,
                                    const PenaltyTheta& theta);
std::vector<double> update_column_v(const DenseMatrix& xc, std::span<const double> u,
                                    std::span<const double> v, const SampleWeights& w,
                                    const PenaltyTheta& theta);

// Stateful cyclic column solver. Keeps the residual R = X - U V^T up to date
// after every column change and rebuilds it from scratch every
// kResyncInterval sweeps.
class SymHalsSolver {
 public:
  static constexpr std::size_t kResyncInterval = 50;

  SymHalsSolver(const SimilarityMatrix& x, FactorPair factors, PenaltyTheta theta);

  // One pass over the k columns (u_c then v_c for c = 0..k-1). Returns the
  // weighted objective after the pass, evaluated from the maintained
  // residual.
  double sweep(const SampleWeights& w);

  const FactorPair& factors() const noexcept { return factors_; }
  const DenseMatrix& residual() const noexcept { return residual_; }
  PenaltyTheta theta() const noexcept { return theta_; }
  std::size_t sweeps_done() const noexcept { return sweeps_; }

  PerSampleLoss per_sample_loss() const;
  double objective(const SampleWeights& w) const;

 private:
  void resync();

  const SimilarityMatrix* x_;
  FactorPair factors_;
  PenaltyTheta theta_;
  DenseMatrix residual_;
  std::size_t sweeps_ = 0;
  // scratch
  std::vector<double> u_, v_, un_, vn_, acc_;
};

FactorPair hals_sweep(const SimilarityMatrix& x, const FactorPair& factors, const SampleWeights& w,
                      const PenaltyTheta& theta);

// n_sweeps consecutive sweeps at fixed w; one trace record per sweep.
std::pair<FactorPair, SolveTrace> solve_inner(const SimilarityMatrix& x, const FactorPair& factors,
                                              const SampleWeights& w, const PenaltyTheta& theta,
                                              std::size_t n_sweeps);

}  // namespace spsnmf
