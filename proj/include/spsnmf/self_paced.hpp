#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "spsnmf/symhals.hpp"

namespace spsnmf {

enum class SpMode { hard, soft, baseline };

std::string_view to_string(SpMode mode);
std::optional<SpMode> parse_mode(std::string_view text);

// Thresholds below this are floored so that 1/threshold stays finite.
inline constexpr double kLossFloor = 1e-12;

struct SpScheduleState {
  SpMode mode = SpMode::hard;
  double lambda = 1.0;
  double lambda_prime = 0.0;  // soft mode only; > lambda
  double fraction = 0.5;      // target inclusion fraction p
  double step = 0.1;
  std::size_t round = 0;
  bool all_included = false;
};

// 1 / median(l); even n averages the two middle order statistics.
double init_lambda_median(std::span<const double> losses);

// 1 / tau where tau is the ceil(p n)-th smallest loss. Throws InvalidFraction
// unless 0 < p <= 1.
double lambda_for_fraction(std::span<const double> losses, double p);

// w_i = 1 iff l_i <= 1/lambda.
SampleWeights hard_weights(std::span<const double> losses, double lambda);

// Mixture weighting with zeta = 1/(lambda' - lambda):
//   1 if l <= 1/lambda', 0 if l >= 1/lambda, zeta/l - lambda zeta otherwise.
// Throws InvalidLambdaPair unless lambda' > lambda > 0.
SampleWeights soft_weights(std::span<const double> losses, double lambda, double lambda_prime);

// Regularizer values whose per-sample minimizers are hard_weights and
// soft_weights respectively.
double hard_regularizer(const SampleWeights& w, double lambda);
double soft_regularizer(const SampleWeights& w, double lambda, double lambda_prime);

// Initial schedule from the losses of the initial factors. Baseline mode is
// fully included from the start; init_fraction == 0.5 uses the median rule.
SpScheduleState start_schedule(SpMode mode, std::span<const double> losses, double init_fraction,
                               double step = 0.1);

// Admit the next slice of samples: fraction += step (clamped at 1) and the
// thresholds are recomputed on the current losses. In soft mode the slice
// admitted in the previous round moves to full weight, so one round after
// the fraction saturates every soft weight is 1.
SpScheduleState advance_schedule(const SpScheduleState& state, std::span<const double> losses);

SampleWeights weights_for(const SpScheduleState& state, std::span<const double> losses);

double regularizer_for(const SpScheduleState& state, const SampleWeights& w);

}  // namespace spsnmf
