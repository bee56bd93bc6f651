#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "spsnmf/dataset.hpp"
#include "spsnmf/pipeline.hpp"
#include "spsnmf/similarity.hpp"

namespace spsnmf {

struct ExperimentSpec {
  std::filesystem::path dataset;
  LabelSelector label_column;
  GraphConfig graph;
  // k == 0 means "number of classes in the dataset"; solver.seed is the base
  // seed, trial t uses base + t.
  SpsConfig solver;
  std::size_t trials = 10;
  std::vector<SpMode> modes{SpMode::hard};
  std::filesystem::path output_dir;  // empty: nothing is written
  std::size_t jobs = 1;
  // Measure wall time per trial. When false every record reports 0 seconds,
  // which makes the report files byte-reproducible.
  bool record_time = true;
  bool write_traces = true;
};

struct TrialRecord {
  std::string dataset;
  SpMode mode = SpMode::hard;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double acc = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  std::size_t sweeps = 0;
  bool converged = false;
  double seconds = 0.0;
  bool failed = false;
  std::string error;
};

struct ModeAggregate {
  SpMode mode = SpMode::hard;
  std::size_t trials = 0;
  std::size_t failed = 0;
  double acc_mean = 0.0, acc_std = 0.0;
  double nmi_mean = 0.0, nmi_std = 0.0;
  double ari_mean = 0.0, ari_std = 0.0;
  double sweeps_mean = 0.0;
};

struct TrialReport {
  std::vector<TrialRecord> records;  // ordered by (mode, trial)
  std::vector<ModeAggregate> aggregates;
  std::vector<ClusteringResult> results;  // parallel to records; empty when failed

  bool all_failed() const noexcept;
};

// "%.6g" in the C locale.
std::string format_number(double x);

// Runs every (mode, trial) pair on a prepared similarity matrix. Trials run on
// up to spec.jobs threads; ordering of the output never depends on it.
TrialReport run_trials(const LabeledDataset& data, const SimilarityMatrix& x, const ExperimentSpec& spec);

// Loads the dataset, builds the k-NN graph, runs the trials and, when
// output_dir is set, writes trials.jsonl, summary.csv and traces/.
TrialReport run_experiment(const ExperimentSpec& spec);

std::string trial_json(const TrialRecord& record);
std::string summary_csv(const std::vector<ModeAggregate>& aggregates);

// Aggregates over the non-failed records, computed from the values as they
// are printed (6 significant digits) so the summary can be recomputed from
// the JSON lines.
std::vector<ModeAggregate> aggregate(const std::vector<TrialRecord>& records, const std::vector<SpMode>& modes);

// Trace CSV: sweep,objective,active_samples,mean_weight
void emit_traces(const ClusteringResult& result, const std::filesystem::path& path);

struct FractionPoint {
  SpMode mode = SpMode::hard;
  double fraction = 0.0;
  double acc = 0.0;
};

// Repeats the experiment for init_fraction in {0.1, 0.2, ..., 1.0}; writes
// fractions.csv (mode,fraction,acc) when output_dir is set.
std::vector<FractionPoint> run_fraction_sweep(const ExperimentSpec& spec);

void write_similarity_csv(const SimilarityMatrix& x, const std::filesystem::path& path);

}  // namespace spsnmf
