#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spsnmf/linalg.hpp"
#include "spsnmf/self_paced.hpp"
#include "spsnmf/symhals.hpp"

namespace spsnmf {

struct SpsConfig {
  std::size_t k = 2;
  SpMode mode = SpMode::hard;
  double init_fraction = 0.5;
  double fraction_step = 0.1;
  std::size_t sweeps_per_round = 10;
  double conv_tol = 1e-6;
  std::size_t max_sweeps = 1000;
  std::uint64_t seed = 0;

  // Throws InvalidConfig / InvalidFraction on out-of-range fields.
  void validate() const;
};

struct ClusteringResult {
  std::vector<int> labels;
  FactorPair factors;
  SampleWeights weights_initial;  // weights used by the first sweep
  SampleWeights weights_final;
  SolveTrace trace;
  PenaltyTheta theta{1.0};
  SpScheduleState schedule;
  std::size_t sweeps_used = 0;
  bool converged = false;
};

// U0 ~ U[0, s]^{n x k} with s = sqrt(mean(X) / k) (1e-3 when X is all zero),
// V0 = U0. Deterministic in seed. Throws InvalidK if k > n or k == 0.
FactorPair init_factors(const SimilarityMatrix& x, std::size_t k, std::uint64_t seed);

// Row-wise argmax; ties and all-zero rows go to the smallest column index.
std::vector<int> extract_labels(const DenseMatrix& u);

// Self-paced SNMF end to end. Weights are refreshed every sweeps_per_round
// sweeps; the relative-decrease stopping rule is only armed once every sample
// has been admitted and the weights did not change since the previous sweep.
ClusteringResult run_spsnmf(const SimilarityMatrix& x, const SpsConfig& cfg);

}  // namespace spsnmf
