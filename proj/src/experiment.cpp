#include "spsnmf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "spsnmf/errors.hpp"
#include "spsnmf/metrics.hpp"

namespace spsnmf {

bool TrialReport::all_failed() const noexcept {
  return !records.empty() &&
         std::all_of(records.begin(), records.end(), [](const TrialRecord& r) { return r.failed; });
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

namespace {

double printed(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

std::size_t class_count(const std::vector<int>& labels) {
  if (labels.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

TrialReport run_trials(const LabeledDataset& data, const SimilarityMatrix& x, const ExperimentSpec& spec) {
  if (spec.trials == 0) throw InvalidConfig("trials must be >= 1");
  if (spec.modes.empty()) throw InvalidConfig("at least one mode is required");

  SpsConfig base = spec.solver;
  if (base.k == 0) base.k = class_count(data.labels);

  const std::size_t total = spec.modes.size() * spec.trials;
  TrialReport report;
  report.records.resize(total);
  report.results.resize(total);

  const auto run_one = [&](std::size_t index) {
    const SpMode mode = spec.modes[index / spec.trials];
    const std::size_t trial = index % spec.trials;
    TrialRecord& rec = report.records[index];
    rec.dataset = data.name;
    rec.mode = mode;
    rec.trial = trial;
    rec.seed = base.seed + trial;
    SpsConfig cfg = base;
    cfg.mode = mode;
    cfg.seed = rec.seed;
    const auto start = std::chrono::steady_clock::now();
    try {
      ClusteringResult result = run_spsnmf(x, cfg);
      rec.acc = accuracy(result.labels, data.labels);
      rec.nmi = nmi(result.labels, data.labels);
      rec.ari = ari(result.labels, data.labels);
      rec.sweeps = result.sweeps_used;
      rec.converged = result.converged;
      report.results[index] = std::move(result);
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
    if (spec.record_time) {
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };

  const std::size_t jobs = std::clamp<std::size_t>(spec.jobs, 1, total);
  if (jobs == 1) {
    for (std::size_t i = 0; i < total; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < total; i = next++) run_one(i);
      });
    }
    for (auto& t : workers) t.join();
  }

  report.aggregates = aggregate(report.records, spec.modes);
  return report;
}

std::vector<ModeAggregate> aggregate(const std::vector<TrialRecord>& records, const std::vector<SpMode>& modes) {
  std::vector<ModeAggregate> out;
  for (SpMode mode : modes) {
    ModeAggregate agg;
    agg.mode = mode;
    std::vector<double> acc, nmi_v, ari_v;
    double sweeps = 0.0;
    for (const auto& r : records) {
      if (r.mode != mode) continue;
      ++agg.trials;
      if (r.failed) {
        ++agg.failed;
        continue;
      }
      acc.push_back(printed(r.acc));
      nmi_v.push_back(printed(r.nmi));
      ari_v.push_back(printed(r.ari));
      sweeps += static_cast<double>(r.sweeps);
    }
    mean_std(acc, agg.acc_mean, agg.acc_std);
    mean_std(nmi_v, agg.nmi_mean, agg.nmi_std);
    mean_std(ari_v, agg.ari_mean, agg.ari_std);
    if (!acc.empty()) agg.sweeps_mean = sweeps / static_cast<double>(acc.size());
    out.push_back(agg);
  }
  return out;
}

std::string trial_json(const TrialRecord& r) {
  std::ostringstream os;
  os << "{\"dataset\":" << nlohmann::json(r.dataset).dump() << ",\"mode\":\"" << to_string(r.mode)
     << "\",\"trial\":" << r.trial << ",\"seed\":" << r.seed;
  if (r.failed) {
    os << ",\"acc\":null,\"nmi\":null,\"ari\":null,\"sweeps\":null,\"converged\":false";
  } else {
    os << ",\"acc\":" << format_number(r.acc) << ",\"nmi\":" << format_number(r.nmi)
       << ",\"ari\":" << format_number(r.ari) << ",\"sweeps\":" << r.sweeps
       << ",\"converged\":" << (r.converged ? "true" : "false");
  }
  os << ",\"seconds\":" << format_number(r.seconds);
  if (r.failed) os << ",\"error\":" << nlohmann::json(r.error).dump();
  os << "}";
  return os.str();
}

std::string summary_csv(const std::vector<ModeAggregate>& aggregates) {
  std::ostringstream os;
  os << "mode,trials,failed,acc_mean,acc_std,nmi_mean,nmi_std,ari_mean,ari_std,sweeps_mean\n";
  for (const auto& a : aggregates) {
    os << to_string(a.mode) << ',' << a.trials << ',' << a.failed << ',' << format_number(a.acc_mean) << ','
       << format_number(a.acc_std) << ',' << format_number(a.nmi_mean) << ',' << format_number(a.nmi_std)
       << ',' << format_number(a.ari_mean) << ',' << format_number(a.ari_std) << ','
       << format_number(a.sweeps_mean) << '\n';
  }
  return os.str();
}

void emit_traces(const ClusteringResult& result, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "sweep,objective,active_samples,mean_weight\n";
  for (const auto& t : result.trace) {
    out << t.sweep << ',' << format_number(t.objective) << ',' << t.active_samples << ','
        << format_number(t.mean_weight) << '\n';
  }
  finish(out, path);
}

TrialReport run_experiment(const ExperimentSpec& spec) {
  const LabeledDataset data = load_csv_dataset(spec.dataset, spec.label_column);
  const SimilarityMatrix x = build_similarity(data.features, spec.graph);
  TrialReport report = run_trials(data, x, spec);

  if (!spec.output_dir.empty()) {
    std::filesystem::create_directories(spec.output_dir);
    {
      const auto path = spec.output_dir / "trials.jsonl";
      std::ofstream out = open_output(path);
      for (const auto& r : report.records) out << trial_json(r) << '\n';
      finish(out, path);
    }
    {
      const auto path = spec.output_dir / "summary.csv";
      std::ofstream out = open_output(path);
      out << summary_csv(report.aggregates);
      finish(out, path);
    }
    if (spec.write_traces) {
      const auto dir = spec.output_dir / "traces";
      std::filesystem::create_directories(dir);
      for (std::size_t i = 0; i < report.records.size(); ++i) {
        const auto& r = report.records[i];
        if (r.failed) continue;
        emit_traces(report.results[i],
                    dir / (std::string(to_string(r.mode)) + "_trial" + std::to_string(r.trial) + ".csv"));
      }
    }
  }
  return report;
}

std::vector<FractionPoint> run_fraction_sweep(const ExperimentSpec& spec) {
  const LabeledDataset data = load_csv_dataset(spec.dataset, spec.label_column);
  const SimilarityMatrix x = build_similarity(data.features, spec.graph);
  std::vector<FractionPoint> points;
  for (int tenth = 1; tenth <= 10; ++tenth) {
    ExperimentSpec sub = spec;
    sub.solver.init_fraction = tenth / 10.0;
    const TrialReport report = run_trials(data, x, sub);
    for (const auto& a : report.aggregates) points.push_back({a.mode, sub.solver.init_fraction, a.acc_mean});
  }
  std::stable_sort(points.begin(), points.end(), [&](const FractionPoint& a, const FractionPoint& b) {
    const auto rank = [&](SpMode m) { return std::find(spec.modes.begin(), spec.modes.end(), m) - spec.modes.begin(); };
    return rank(a.mode) < rank(b.mode);
  });

  if (!spec.output_dir.empty()) {
    std::filesystem::create_directories(spec.output_dir);
    const auto path = spec.output_dir / "fractions.csv";
    std::ofstream out = open_output(path);
    out << "mode,fraction,acc\n";
    for (const auto& p : points) {
      out << to_string(p.mode) << ',' << format_number(p.fraction) << ',' << format_number(p.acc) << '\n';
    }
    finish(out, path);
  }
  return points;
}

void write_similarity_csv(const SimilarityMatrix& x, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  for (std::size_t i = 0; i < x.n(); ++i) {
    for (std::size_t j = 0; j < x.n(); ++j) {
      if (j) out << ',';
      out << format_number(x(i, j));
    }
    out << '\n';
  }
  finish(out, path);
}

}  // namespace spsnmf
