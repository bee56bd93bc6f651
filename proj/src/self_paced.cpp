#include "spsnmf/self_paced.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "spsnmf/errors.hpp"

namespace spsnmf {

std::string_view to_string(SpMode mode) {
  switch (mode) {
    case SpMode::hard:
      return "hard";
    case SpMode::soft:
      return "soft";
    case SpMode::baseline:
      return "baseline";
  }
  return "unknown";
}

std::optional<SpMode> parse_mode(std::string_view text) {
  if (text == "hard") return SpMode::hard;
  if (text == "soft") return SpMode::soft;
  if (text == "baseline") return SpMode::baseline;
  return std::nullopt;
}

namespace {

// Slack for p * n landing a hair above an integer (0.6 * 10 = 6.000...01).
constexpr double kFractionSlack = 1e-9;

// Largest lambda whose reciprocal still reaches tau, so that the loss sitting
// exactly at the threshold is admitted despite rounding in 1/(1/tau).
double threshold_to_lambda(double tau) {
  tau = std::max(tau, kLossFloor);
  double lambda = 1.0 / tau;
  while (1.0 / lambda < tau) lambda = std::nextafter(lambda, 0.0);
  return lambda;
}

double order_statistic(std::span<const double> losses, std::size_t m) {
  std::vector<double> sorted(losses.begin(), losses.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(m - 1), sorted.end());
  return sorted[m - 1];
}

double quantile_threshold(std::span<const double> losses, double p) {
  const auto n = static_cast<double>(losses.size());
  auto m = static_cast<std::size_t>(std::ceil(p * n - kFractionSlack));
  m = std::clamp<std::size_t>(m, 1, losses.size());
  return order_statistic(losses, m);
}

void check_losses(std::span<const double> losses) {
  if (losses.empty()) throw LengthMismatch("loss vector must be non-empty");
  for (double l : losses) {
    if (!std::isfinite(l) || l < 0.0) throw Error("losses must be finite and nonnegative");
  }
}

double next_fraction(double fraction, double step) {
  const double next = fraction + step;
  return next >= 1.0 - kFractionSlack ? 1.0 : next;
}

// lambda' for the soft schedule: the previous slice (fraction - step) gets full
// weight. Nudged above lambda when ties collapse the two thresholds.
double soft_lambda_prime(std::span<const double> losses, double lower, double lambda) {
  double lp = lower <= kFractionSlack ? 1.0 / kLossFloor : lambda_for_fraction(losses, lower);
  if (!(lp > lambda)) lp = lambda * (1.0 + 1e-9);
  return lp;
}

}  // namespace

double init_lambda_median(std::span<const double> losses) {
  check_losses(losses);
  std::vector<double> sorted(losses.begin(), losses.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return threshold_to_lambda(median);
}

double lambda_for_fraction(std::span<const double> losses, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidFraction("fraction must lie in (0, 1]");
  check_losses(losses);
  return threshold_to_lambda(quantile_threshold(losses, p));
}

SampleWeights hard_weights(std::span<const double> losses, double lambda) {
  if (!(lambda > 0.0)) throw InvalidLambdaPair("lambda must be > 0");
  const double threshold = 1.0 / lambda;
  std::vector<double> w(losses.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = losses[i] <= threshold ? 1.0 : 0.0;
  return SampleWeights(std::move(w));
}

SampleWeights soft_weights(std::span<const double> losses, double lambda, double lambda_prime) {
  if (!(lambda > 0.0) || !(lambda_prime > lambda)) {
    throw InvalidLambdaPair("soft weighting requires lambda' > lambda > 0");
  }
  const double zeta = 1.0 / (lambda_prime - lambda);
  const double full = 1.0 / lambda_prime;
  const double none = 1.0 / lambda;
  std::vector<double> w(losses.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double l = losses[i];
    if (l <= full) {
      w[i] = 1.0;
    } else if (l >= none) {
      w[i] = 0.0;
    } else {
      w[i] = std::clamp(zeta / l - lambda * zeta, 0.0, 1.0);
    }
  }
  return SampleWeights(std::move(w));
}

double hard_regularizer(const SampleWeights& w, double lambda) {
  double s = 0.0;
  for (double x : w.values()) s += x;
  return -s / lambda;
}

double soft_regularizer(const SampleWeights& w, double lambda, double lambda_prime) {
  const double zeta = 1.0 / (lambda_prime - lambda);
  double s = 0.0;
  for (double x : w.values()) s += std::log(x + zeta * lambda);
  return -zeta * s;
}

SpScheduleState start_schedule(SpMode mode, std::span<const double> losses, double init_fraction,
                               double step) {
  check_losses(losses);
  if (!(init_fraction > 0.0 && init_fraction <= 1.0)) {
    throw InvalidFraction("initial fraction must lie in (0, 1]");
  }
  if (!(step > 0.0 && step <= 1.0)) throw InvalidFraction("fraction step must lie in (0, 1]");

  SpScheduleState s;
  s.mode = mode;
  s.step = step;
  if (mode == SpMode::baseline) {
    s.fraction = 1.0;
    s.lambda = lambda_for_fraction(losses, 1.0);
    s.all_included = true;
    return s;
  }
  s.fraction = init_fraction;
  s.lambda = init_fraction == 0.5 ? init_lambda_median(losses) : lambda_for_fraction(losses, init_fraction);
  if (mode == SpMode::soft) s.lambda_prime = soft_lambda_prime(losses, s.fraction - step, s.lambda);
  if (s.fraction == 1.0) {
    s.all_included = mode == SpMode::soft || hard_weights(losses, s.lambda).active_count() == losses.size();
  }
  return s;
}

SpScheduleState advance_schedule(const SpScheduleState& state, std::span<const double> losses) {
  SpScheduleState s = state;
  ++s.round;
  if (s.mode == SpMode::baseline) return s;
  s.fraction = std::min(1.0, next_fraction(s.fraction, s.step));
  s.lambda = lambda_for_fraction(losses, s.fraction);
  if (s.mode == SpMode::soft) {
    // The slice admitted last round gets full weight now. Once the schedule
    // has saturated that slice is the whole set and every weight becomes 1.
    if (state.fraction >= 1.0) {
      s.lambda_prime = s.lambda;
      s.lambda = s.lambda_prime / (1.0 + 1e-9);
    } else {
      s.lambda_prime = soft_lambda_prime(losses, state.fraction, s.lambda);
    }
  }
  if (s.fraction == 1.0) {
    s.all_included = s.mode == SpMode::soft || hard_weights(losses, s.lambda).active_count() == losses.size();
  }
  return s;
}

SampleWeights weights_for(const SpScheduleState& state, std::span<const double> losses) {
  switch (state.mode) {
    case SpMode::hard:
      return hard_weights(losses, state.lambda);
    case SpMode::soft:
      return soft_weights(losses, state.lambda, state.lambda_prime);
    case SpMode::baseline:
      break;
  }
  return SampleWeights::ones(losses.size());
}

double regularizer_for(const SpScheduleState& state, const SampleWeights& w) {
  switch (state.mode) {
    case SpMode::hard:
      return hard_regularizer(w, state.lambda);
    case SpMode::soft:
      return soft_regularizer(w, state.lambda, state.lambda_prime);
    case SpMode::baseline:
      break;
  }
  return 0.0;
}

}  // namespace spsnmf
