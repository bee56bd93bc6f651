#include "spsnmf/symhals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spsnmf/errors.hpp"

namespace spsnmf {

SampleWeights::SampleWeights(std::vector<double> values) : values_(std::move(values)) {
  for (double x : values_) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidWeights("sample weights must lie in [0, 1]");
  }
}

std::size_t SampleWeights::active_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double x) { return x > 0.0; }));
}

double SampleWeights::mean() const noexcept {
  if (values_.empty()) return 0.0;
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

bool SampleWeights::is_binary() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0 || x == 1.0; });
}

PenaltyTheta::PenaltyTheta(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw InvalidConfig("theta must be finite and > 0");
}

namespace {

void check_shapes(const SimilarityMatrix& x, const FactorPair& f) {
  if (f.u.rows() != x.n() || f.v.rows() != x.n() || f.u.cols() != f.v.cols()) {
    throw ShapeMismatch("factor shapes do not match X (n = " + std::to_string(x.n()) + ")");
  }
}

void check_weights(const SampleWeights& w, std::size_t n) {
  if (w.size() != n) throw ShapeMismatch("weight vector length does not match n");
}

double penalty_term(const FactorPair& f) {
  double s = 0.0;
  auto u = f.u.data();
  auto v = f.v.data();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    s += d * d;
  }
  return s;
}

double objective_from_residual(const DenseMatrix& r, const FactorPair& f, const SampleWeights& w,
                               double theta) {
  double data = 0.0;
  for (std::size_t p = 0; p < r.rows(); ++p) {
    if (w[p] == 0.0) continue;
    const auto row = r.row(p);
    data += w[p] * dot(row, row);
  }
  return 0.5 * data + 0.5 * theta * penalty_term(f);
}

}  // namespace

double weighted_objective(const SimilarityMatrix& x, const FactorPair& factors, const SampleWeights& w,
                          const PenaltyTheta& theta) {
  check_shapes(x, factors);
  check_weights(w, x.n());
  const DenseMatrix r = subtract(x.data(), multiply_abt(factors.u, factors.v));
  return objective_from_residual(r, factors, w, theta.value());
}

PerSampleLoss per_sample_loss(const SimilarityMatrix& x, const FactorPair& factors) {
  check_shapes(x, factors);
  const DenseMatrix r = subtract(x.data(), multiply_abt(factors.u, factors.v));
  PerSampleLoss l(x.n());
  for (std::size_t p = 0; p < x.n(); ++p) l[p] = dot(r.row(p), r.row(p));
  return l;
}

PenaltyTheta theta_from_bound(const SimilarityMatrix& x, const DenseMatrix& u0) {
  if (u0.rows() != x.n()) throw ShapeMismatch("theta_from_bound: U0 rows must equal n");
  if (!u0.all_nonnegative()) throw InvalidFactors("theta_from_bound: U0 must be nonnegative");
  const double spectral = spectral_norm(x.data()).value;
  const double fit = frobenius_norm(subtract(x.data(), multiply_abt(u0, u0)));
  const double bound = 0.5 * (spectral + fit);
  double theta = std::ceil(bound);
  if (theta <= bound) theta += 1.0;
  return PenaltyTheta(std::max(1.0, theta));
}

std::vector<double> update_column_u(const DenseMatrix& xc, std::span<const double> u,
                                    std::span<const double> v, const SampleWeights& w,
                                    const PenaltyTheta& theta) {
  const std::size_t n = xc.rows();
  if (!xc.square() || u.size() != n || v.size() != n || w.size() != n) {
    throw ShapeMismatch("update_column_u: inconsistent shapes");
  }
  const double t = theta.value();
  const double vv = dot(v, v);
  std::vector<double> out(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double xv = dot(xc.row(p), v);
    out[p] = std::max(0.0, (w[p] * xv + t * v[p]) / (w[p] * vv + t));
  }
  return out;
}

std::vector<double> update_column_v(const DenseMatrix& xc, std::span<const double> u,
                                    std::span<const double> v, const SampleWeights& w,
                                    const PenaltyTheta& theta) {
  const std::size_t n = xc.rows();
  if (!xc.square() || u.size() != n || v.size() != n || w.size() != n) {
    throw ShapeMismatch("update_column_v: inconsistent shapes");
  }
  const double t = theta.value();
  double uwu = 0.0;
  std::vector<double> xtwu(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    const double wu = w[p] * u[p];
    uwu += wu * u[p];
    if (wu == 0.0) continue;
    const auto row = xc.row(p);
    for (std::size_t q = 0; q < n; ++q) xtwu[q] += wu * row[q];
  }
  std::vector<double> out(n);
  for (std::size_t q = 0; q < n; ++q) out[q] = std::max(0.0, (xtwu[q] + t * u[q]) / (uwu + t));
  return out;
}

SymHalsSolver::SymHalsSolver(const SimilarityMatrix& x, FactorPair factors, PenaltyTheta theta)
    : x_(&x), factors_(std::move(factors)), theta_(theta) {
  check_shapes(x, factors_);
  factors_.validate();
  const std::size_t n = x.n();
  u_.resize(n);
  v_.resize(n);
  un_.resize(n);
  vn_.resize(n);
  acc_.resize(n);
  resync();
}

void SymHalsSolver::resync() { residual_ = subtract(x_->data(), multiply_abt(factors_.u, factors_.v)); }

double SymHalsSolver::sweep(const SampleWeights& w) {
  const std::size_t n = x_->n();
  const std::size_t k = factors_.k();
  check_weights(w, n);
  const double t = theta_.value();
  DenseMatrix& r = residual_;

  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t p = 0; p < n; ++p) {
      u_[p] = factors_.u(p, c);
      v_[p] = factors_.v(p, c);
    }

    // u_c: (X_c v)_p = (R v)_p + u_p ||v||^2
    const double vv = dot(v_, v_);
    for (std::size_t p = 0; p < n; ++p) {
      const double xv = dot(r.row(p), v_) + u_[p] * vv;
      un_[p] = std::max(0.0, (w[p] * xv + t * v_[p]) / (w[p] * vv + t));
    }
    for (std::size_t p = 0; p < n; ++p) {
      const double du = un_[p] - u_[p];
      if (du == 0.0) continue;
      auto row = r.row(p);
      for (std::size_t q = 0; q < n; ++q) row[q] -= du * v_[q];
    }

    // v_c: (X_c^T W u)_q = (R^T W u)_q + v_q u^T W u
    double uwu = 0.0;
    std::fill(acc_.begin(), acc_.end(), 0.0);
    for (std::size_t p = 0; p < n; ++p) {
      const double wu = w[p] * un_[p];
      uwu += wu * un_[p];
      if (wu == 0.0) continue;
      const auto row = r.row(p);
      for (std::size_t q = 0; q < n; ++q) acc_[q] += wu * row[q];
    }
    for (std::size_t q = 0; q < n; ++q) {
      vn_[q] = std::max(0.0, (acc_[q] + v_[q] * uwu + t * un_[q]) / (uwu + t));
      acc_[q] = vn_[q] - v_[q];
    }
    for (std::size_t p = 0; p < n; ++p) {
      const double up = un_[p];
      if (up == 0.0) continue;
      auto row = r.row(p);
      for (std::size_t q = 0; q < n; ++q) row[q] -= up * acc_[q];
    }

    for (std::size_t p = 0; p < n; ++p) {
      factors_.u(p, c) = un_[p];
      factors_.v(p, c) = vn_[p];
    }
  }

  ++sweeps_;
  if (sweeps_ % kResyncInterval == 0) resync();
  return objective_from_residual(r, factors_, w, t);
}

PerSampleLoss SymHalsSolver::per_sample_loss() const {
  PerSampleLoss l(residual_.rows());
  for (std::size_t p = 0; p < l.size(); ++p) l[p] = dot(residual_.row(p), residual_.row(p));
  return l;
}

double SymHalsSolver::objective(const SampleWeights& w) const {
  check_weights(w, x_->n());
  return objective_from_residual(residual_, factors_, w, theta_.value());
}

FactorPair hals_sweep(const SimilarityMatrix& x, const FactorPair& factors, const SampleWeights& w,
                      const PenaltyTheta& theta) {
  SymHalsSolver solver(x, factors, theta);
  solver.sweep(w);
  return solver.factors();
}

std::pair<FactorPair, SolveTrace> solve_inner(const SimilarityMatrix& x, const FactorPair& factors,
                                              const SampleWeights& w, const PenaltyTheta& theta,
                                              std::size_t n_sweeps) {
  if (n_sweeps == 0) throw InvalidConfig("solve_inner: n_sweeps must be >= 1");
  SymHalsSolver solver(x, factors, theta);
  SolveTrace trace;
  trace.reserve(n_sweeps);
  const std::size_t active = w.active_count();
  const double mean_w = w.mean();
  for (std::size_t s = 1; s <= n_sweeps; ++s) {
    const double obj = solver.sweep(w);
    trace.push_back(TraceRecord{s, obj, active, mean_w, 0.0});
  }
  return {solver.factors(), std::move(trace)};
}

}  // namespace spsnmf
