#include "spsnmf/pipeline.hpp"

#include <cmath>
#include <random>
#include <string>

#include "spsnmf/errors.hpp"

namespace spsnmf {

void SpsConfig::validate() const {
  if (k < 2) throw InvalidConfig("k must be >= 2");
  if (!(init_fraction > 0.0 && init_fraction <= 1.0)) {
    throw InvalidFraction("init_fraction must lie in (0, 1]");
  }
  if (!(fraction_step > 0.0 && fraction_step <= 1.0)) {
    throw InvalidFraction("fraction_step must lie in (0, 1]");
  }
  if (sweeps_per_round == 0) throw InvalidConfig("sweeps_per_round must be >= 1");
  if (!(conv_tol > 0.0)) throw InvalidConfig("conv_tol must be > 0");
  if (max_sweeps == 0) throw InvalidConfig("max_sweeps must be >= 1");
}

FactorPair init_factors(const SimilarityMatrix& x, std::size_t k, std::uint64_t seed) {
  const std::size_t n = x.n();
  if (k == 0 || k > n) {
    throw InvalidK("init_factors: k = " + std::to_string(k) + " must satisfy 1 <= k <= n = " +
                   std::to_string(n));
  }
  double mean = 0.0;
  for (double a : x.data().data()) mean += a;
  mean /= static_cast<double>(n * n);
  const double scale = mean > 0.0 ? std::sqrt(mean / static_cast<double>(k)) : 1e-3;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, scale);
  DenseMatrix u(n, k);
  for (double& e : u.data()) e = dist(rng);
  return FactorPair{u, u};
}

std::vector<int> extract_labels(const DenseMatrix& u) {
  std::vector<int> labels(u.rows(), 0);
  for (std::size_t i = 0; i < u.rows(); ++i) {
    const auto row = u.row(i);
    std::size_t best = 0;
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c] > row[best]) best = c;
    }
    labels[i] = static_cast<int>(best);
  }
  return labels;
}

ClusteringResult run_spsnmf(const SimilarityMatrix& x, const SpsConfig& cfg) {
  cfg.validate();
  FactorPair init = init_factors(x, cfg.k, cfg.seed);
  const PenaltyTheta theta = theta_from_bound(x, init.u);
  SymHalsSolver solver(x, std::move(init), theta);

  PerSampleLoss losses = solver.per_sample_loss();
  SpScheduleState schedule = start_schedule(cfg.mode, losses, cfg.init_fraction, cfg.fraction_step);
  SampleWeights w = weights_for(schedule, losses);

  ClusteringResult result;
  result.theta = theta;
  result.weights_initial = w;
  result.trace.reserve(cfg.max_sweeps);

  std::size_t sweeps = 0;
  double previous = 0.0;
  bool comparable = false;  // previous objective was taken under the same w
  bool converged = false;

  while (sweeps < cfg.max_sweeps && !converged) {
    const std::size_t active = w.active_count();
    const double mean_w = w.mean();
    const double reg = regularizer_for(schedule, w);
    for (std::size_t r = 0; r < cfg.sweeps_per_round && sweeps < cfg.max_sweeps; ++r) {
      const double objective = solver.sweep(w);
      ++sweeps;
      result.trace.push_back(TraceRecord{sweeps, objective, active, mean_w, reg});
      if (schedule.all_included && comparable) {
        if (previous <= 0.0 || (previous - objective) / previous < cfg.conv_tol) {
          converged = true;
          break;
        }
      }
      previous = objective;
      comparable = true;
    }
    if (converged || sweeps >= cfg.max_sweeps) break;

    losses = solver.per_sample_loss();
    schedule = advance_schedule(schedule, losses);
    SampleWeights next = weights_for(schedule, losses);
    if (!(next == w)) comparable = false;
    w = std::move(next);
  }

  result.factors = solver.factors();
  result.labels = extract_labels(result.factors.u);
  result.weights_final = std::move(w);
  result.schedule = schedule;
  result.sweeps_used = sweeps;
  result.converged = converged;
  return result;
}

}  // namespace spsnmf
