#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "spsnmf/dataset.hpp"
#include "spsnmf/errors.hpp"
#include "spsnmf/linalg.hpp"
#include "spsnmf/metrics.hpp"
#include "spsnmf/pipeline.hpp"
#include "spsnmf/self_paced.hpp"
#include "spsnmf/similarity.hpp"
#include "spsnmf/symhals.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

spsnmf::DenseMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw spsnmf::ShapeMismatch("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  std::vector<double> entries(a.data(), a.data() + rows * cols);
  return spsnmf::DenseMatrix(rows, cols, std::move(entries));
}

Array to_array(const spsnmf::DenseMatrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw spsnmf::ShapeMismatch("expected a 1-D array");
  return {a.data(), a.data() + a.shape(0)};
}

Array vector_array(std::span<const double> v) {
  Array out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

spsnmf::SimilarityMatrix to_similarity(const Array& a) { return spsnmf::SimilarityMatrix(to_matrix(a)); }

spsnmf::SpMode mode_from(const std::string& text) {
  const auto m = spsnmf::parse_mode(text);
  if (!m) throw spsnmf::InvalidConfig("unknown mode '" + text + "' (expected hard, soft or baseline)");
  return *m;
}

py::dict run(const Array& x, std::size_t k, const std::string& mode, double init_fraction, double fraction_step,
             std::size_t sweeps_per_round, double conv_tol, std::size_t max_sweeps, std::uint64_t seed) {
  spsnmf::SpsConfig cfg;
  cfg.k = k;
  cfg.mode = mode_from(mode);
  cfg.init_fraction = init_fraction;
  cfg.fraction_step = fraction_step;
  cfg.sweeps_per_round = sweeps_per_round;
  cfg.conv_tol = conv_tol;
  cfg.max_sweeps = max_sweeps;
  cfg.seed = seed;
  const auto sim = to_similarity(x);
  spsnmf::ClusteringResult r;
  {
    py::gil_scoped_release release;
    r = spsnmf::run_spsnmf(sim, cfg);
  }
  py::list trace;
  for (const auto& t : r.trace) {
    py::dict rec;
    rec["sweep"] = t.sweep;
    rec["objective"] = t.objective;
    rec["active_samples"] = t.active_samples;
    rec["mean_weight"] = t.mean_weight;
    rec["regularizer"] = t.regularizer;
    trace.append(rec);
  }
  py::dict out;
  out["labels"] = r.labels;
  out["U"] = to_array(r.factors.u);
  out["V"] = to_array(r.factors.v);
  out["weights_initial"] = vector_array(r.weights_initial.values());
  out["weights"] = vector_array(r.weights_final.values());
  out["trace"] = trace;
  out["theta"] = r.theta.value();
  out["sweeps_used"] = r.sweeps_used;
  out["converged"] = r.converged;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Self-paced symmetric nonnegative matrix factorization";

  py::register_exception<spsnmf::Error>(m, "SpsnmfError", PyExc_ValueError);

  m.def("frobenius_norm", [](const Array& a) { return spsnmf::frobenius_norm(to_matrix(a)); });
  m.def(
      "spectral_norm",
      [](const Array& a, double tol, std::size_t max_iter) {
        const auto est = spsnmf::spectral_norm(to_matrix(a), tol, max_iter);
        return py::make_tuple(est.value, est.converged);
      },
      py::arg("m"), py::arg("tol") = 1e-10, py::arg("max_iter") = 10000);

  m.def("pairwise_sq_dists", [](const Array& f) { return to_array(spsnmf::pairwise_sq_dists(to_matrix(f))); });
  m.def("knn_sets", [](const Array& d, std::size_t k_nn) { return spsnmf::knn_sets(to_matrix(d), k_nn); });
  m.def(
      "build_similarity",
      [](const Array& f, std::size_t k_nn, double sigma_floor) {
        return to_array(spsnmf::build_similarity(to_matrix(f), {k_nn, sigma_floor}).data());
      },
      py::arg("features"), py::arg("k_nn") = 7, py::arg("sigma_floor") = 1e-12);

  m.def("theta_from_bound",
        [](const Array& x, const Array& u0) { return spsnmf::theta_from_bound(to_similarity(x), to_matrix(u0)).value(); });
  m.def("weighted_objective", [](const Array& x, const Array& u, const Array& v, const Array& w, double theta) {
    return spsnmf::weighted_objective(to_similarity(x), {to_matrix(u), to_matrix(v)},
                                      spsnmf::SampleWeights(to_vector(w)), spsnmf::PenaltyTheta(theta));
  });
  m.def("per_sample_loss", [](const Array& x, const Array& u, const Array& v) {
    return spsnmf::per_sample_loss(to_similarity(x), {to_matrix(u), to_matrix(v)});
  });

  m.def("init_lambda_median", [](const Array& l) { return spsnmf::init_lambda_median(to_vector(l)); });
  m.def("lambda_for_fraction", [](const Array& l, double p) { return spsnmf::lambda_for_fraction(to_vector(l), p); });
  m.def("hard_weights", [](const Array& l, double lambda) {
    return vector_array(spsnmf::hard_weights(to_vector(l), lambda).values());
  });
  m.def("soft_weights", [](const Array& l, double lambda, double lambda_prime) {
    return vector_array(spsnmf::soft_weights(to_vector(l), lambda, lambda_prime).values());
  });

  m.def("run_spsnmf", &run, py::arg("X"), py::arg("k"), py::arg("mode") = "hard", py::arg("init_fraction") = 0.5,
        py::arg("fraction_step") = 0.1, py::arg("sweeps_per_round") = 10, py::arg("conv_tol") = 1e-6,
        py::arg("max_sweeps") = 1000, py::arg("seed") = 0);
  m.def("extract_labels", [](const Array& u) { return spsnmf::extract_labels(to_matrix(u)); });

  m.def("accuracy", [](const std::vector<int>& p, const std::vector<int>& t) { return spsnmf::accuracy(p, t); });
  m.def("nmi", [](const std::vector<int>& p, const std::vector<int>& t) { return spsnmf::nmi(p, t); });
  m.def("ari", [](const std::vector<int>& p, const std::vector<int>& t) { return spsnmf::ari(p, t); });

  m.def(
      "load_csv_dataset",
      [](const std::string& path, const std::string& label_col) {
        auto ds = spsnmf::load_csv_dataset(path, spsnmf::LabelSelector::parse(label_col));
        return py::make_tuple(to_array(ds.features), ds.labels, ds.class_names);
      },
      py::arg("path"), py::arg("label_col") = "-1");
}
