#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "bcpred/artifact.hpp"
#include "bcpred/boruta.hpp"
#include "bcpred/dataset.hpp"
#include "bcpred/error.hpp"
#include "bcpred/logreg.hpp"
#include "bcpred/metrics.hpp"
#include "bcpred/pipeline.hpp"
#include "bcpred/smote.hpp"
#include "json_io.hpp"

namespace py = pybind11;
using namespace bcpred;

namespace {

using Rows = std::vector<std::vector<double>>;

Rows to_rows(const Matrix& m) {
  Rows out;
  out.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

py::object from_json(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict response_dict(const PredictResponse& r) {
  py::dict d;
  d["probability"] = r.probability;
  d["label"] = r.label;
  d["threshold"] = r.threshold;
  d["model_version"] = r.model_version;
  return d;
}

TrainConfig train_config(double learning_rate, int max_iters, double tolerance) {
  TrainConfig c;
  c.learning_rate = learning_rate;
  c.max_iters = max_iters;
  c.tolerance = tolerance;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Breast cancer malignancy prediction: logistic regression with Boruta and SMOTE";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const FileError& e) {
      PyErr_SetString(PyExc_FileNotFoundError, e.what());
    } catch (const ValidationError& e) {
      py::dict fields;
      for (const auto& [k, v] : e.fields()) fields[py::str(k)] = v;
      py::object exc = py::reinterpret_borrow<py::object>(validation.ptr())(e.what());
      exc.attr("fields") = fields;
      PyErr_SetObject(validation.ptr(), exc.ptr());
    } catch (const PreconditionError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      error(e.what());
    }
  });

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("feature_names", &Dataset::feature_names)
      .def_property_readonly("ids", [](const Dataset& d) {
        std::vector<std::string> ids;
        for (const auto& r : d.records()) ids.push_back(r.id);
        return ids;
      })
      .def_property_readonly("labels", &Dataset::labels)
      .def("features", [](const Dataset& d, const std::vector<std::size_t>& rows) {
        return to_rows(d.features(rows));
      }, py::arg("rows") = std::vector<std::size_t>{})
      .def("__len__", &Dataset::size);

  m.def("parse_wdbc_csv", &parse_wdbc_csv, py::arg("path"));
  m.def("parse_wdbc_csv_text", &parse_wdbc_csv_text, py::arg("text"));

  m.def("stratified_split", [](const std::vector<int>& labels, double test_fraction, std::uint64_t seed) {
    const auto s = stratified_split(labels, test_fraction, seed);
    return py::make_tuple(s.train, s.test);
  }, py::arg("labels"), py::arg("test_fraction") = 0.2, py::arg("seed") = 42);

  m.def("pearson_correlation", [](const std::vector<double>& x, const std::vector<double>& y) {
    return pearson_correlation(x, y);
  });

  m.def("sigmoid", &sigmoid);

  m.def("fit_logistic", [](const Rows& x, const std::vector<int>& y, double learning_rate,
                           int max_iters, double tolerance) {
    const auto fit = fit_gradient_descent(Matrix::from_rows(x), y,
                                          train_config(learning_rate, max_iters, tolerance));
    py::dict d;
    d["intercept"] = fit.coefficients.intercept;
    d["weights"] = fit.coefficients.weights;
    d["cost_history"] = fit.trace.cost_history;
    d["iterations"] = fit.trace.iterations_run;
    d["converged"] = fit.trace.converged;
    return d;
  }, py::arg("x"), py::arg("y"), py::arg("learning_rate") = 0.1, py::arg("max_iters") = 10000,
     py::arg("tolerance") = 1e-8);

  m.def("predict_proba", [](double intercept, const std::vector<double>& weights, const Rows& x) {
    return predict_proba(Coefficients{intercept, weights}, Matrix::from_rows(x));
  }, py::arg("intercept"), py::arg("weights"), py::arg("x"));

  m.def("smote_oversample", [](const Rows& x, const std::vector<int>& y, int k, double target_ratio,
                               std::uint64_t seed) {
    const auto r = smote_oversample(Matrix::from_rows(x), y, SmoteConfig{k, target_ratio, seed});
    py::list prov;
    for (const auto& p : r.provenance) prov.append(py::make_tuple(p.base, p.neighbor, p.gap));
    return py::make_tuple(to_rows(r.features), r.labels, prov);
  }, py::arg("x"), py::arg("y"), py::arg("k") = 5, py::arg("target_ratio") = 1.0,
     py::arg("seed") = 42);

  m.def("boruta_run", [](const Rows& x, const std::vector<int>& y,
                         const std::vector<std::string>& names, int n_iterations,
                         double significance, std::uint64_t seed) {
    BorutaConfig c;
    c.n_iterations = n_iterations;
    c.significance = significance;
    c.seed = seed;
    py::list out;
    for (const auto& d : boruta_run(Matrix::from_rows(x), y, names, c)) {
      py::dict f;
      f["feature"] = d.feature_name;
      f["status"] = to_string(d.status);
      f["hits"] = d.hits;
      f["mean_importance"] = d.mean_importance;
      out.append(f);
    }
    return out;
  }, py::arg("x"), py::arg("y"), py::arg("feature_names"), py::arg("n_iterations") = 50,
     py::arg("significance") = 0.05, py::arg("seed") = 42);

  m.def("binomial_two_sided_p", &binomial_two_sided_p, py::arg("hits"), py::arg("trials"));

  m.def("roc_curve", [](const std::vector<int>& y, const std::vector<double>& scores) {
    py::list out;
    for (const auto& p : roc_curve(y, scores)) out.append(py::make_tuple(p.fpr, p.tpr, p.threshold));
    return out;
  });
  m.def("auc", [](const std::vector<int>& y, const std::vector<double>& scores) {
    return auc_trapezoid(roc_curve(y, scores));
  });

  py::class_<ModelArtifact>(m, "Model")
      .def_static("load", &load_artifact, py::arg("path"))
      .def_static("from_json", &artifact_from_json, py::arg("text"))
      .def("save", [](const ModelArtifact& a, const std::filesystem::path& p) { save_artifact(a, p); })
      .def("to_json", &artifact_to_json)
      .def_property_readonly("feature_names", [](const ModelArtifact& a) { return a.feature_names; })
      .def_property_readonly("intercept", [](const ModelArtifact& a) { return a.coefficients.intercept; })
      .def_property_readonly("weights", [](const ModelArtifact& a) { return a.coefficients.weights; })
      .def_property_readonly("means", [](const ModelArtifact& a) { return a.standardization.means; })
      .def_property_readonly("threshold", [](const ModelArtifact& a) { return a.threshold; })
      .def_property_readonly("version", &ModelArtifact::version)
      .def_property_readonly("metrics", [](const ModelArtifact& a) { return from_json(report_to_json(a.metrics)); })
      .def("predict", [](const ModelArtifact& a, const std::map<std::string, double>& features) {
        return response_dict(Predictor(a).predict(features));
      }, py::arg("features"))
      .def("evaluate", [](const ModelArtifact& a, const Dataset& d) {
        return from_json(report_to_json(evaluate_artifact(a, d)));
      }, py::arg("data"));

  m.def("train", [](const Dataset& data, std::uint64_t seed, double test_fraction, double learning_rate,
                    int max_iters, double tolerance, int smote_k, double smote_ratio, bool boruta,
                    int boruta_iterations, double boruta_alpha, bool boruta_drop_tentative,
                    double threshold, const std::string& timestamp) {
    PipelineOptions o;
    o.seed = seed;
    o.test_fraction = test_fraction;
    o.train = train_config(learning_rate, max_iters, tolerance);
    o.smote_k = smote_k;
    o.smote_ratio = smote_ratio;
    o.boruta = boruta;
    o.boruta_iterations = boruta_iterations;
    o.boruta_alpha = boruta_alpha;
    o.boruta_drop_tentative = boruta_drop_tentative;
    o.threshold = threshold;
    py::gil_scoped_release release;
    return train_pipeline(data, o, timestamp.empty() ? utc_timestamp() : timestamp).artifact;
  }, py::arg("data"), py::kw_only(), py::arg("seed") = 42, py::arg("test_fraction") = 0.2,
     py::arg("learning_rate") = 0.1, py::arg("max_iters") = 10000, py::arg("tolerance") = 1e-8,
     py::arg("smote_k") = 5, py::arg("smote_ratio") = 1.0, py::arg("boruta") = true,
     py::arg("boruta_iterations") = 50, py::arg("boruta_alpha") = 0.05,
     py::arg("boruta_drop_tentative") = false, py::arg("threshold") = 0.5,
     py::arg("timestamp") = "");
}
