#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numeric>

#include "gal/acquisition.hpp"
#include "gal/classifiers.hpp"
#include "gal/config.hpp"
#include "gal/data.hpp"
#include "gal/gp.hpp"
#include "gal/harness.hpp"
#include "gal/selection.hpp"
#include "gal/verify.hpp"

namespace py = pybind11;
using namespace gal;

namespace {

Dataset make_dataset(const Mat& X) {
    Dataset d;
    d.X = X;
    d.truth.assign(X.rows(), 1);
    d.ids.resize(X.rows());
    std::iota(d.ids.begin(), d.ids.end(), 0);
    d.rebuild_index();
    return d;
}

LabeledSet make_labeled(const std::vector<int>& ids,
                        const std::vector<int>& labels) {
    if (ids.size() != labels.size()) {
        throw ConfigError("ids and labels differ in length");
    }
    LabeledSet ls;
    for (std::size_t i = 0; i < ids.size(); ++i) ls.add(ids[i], labels[i]);
    return ls;
}

py::dict curve_dict(const LearningCurve& c) {
    py::list recs;
    for (const auto& r : c.records) {
        py::dict d;
        d["cycle"] = r.cycle;
        d["n_labeled"] = r.n_labeled;
        d["map"] = r.map;
        d["batch_ids"] = r.batch_ids;
        d["pseudo_correct"] = r.pseudo_correct;
        d["wall_s"] = r.wall_s;
        recs.append(d);
    }
    py::dict out;
    out["normalized_auc"] = c.normalized_auc;
    out["records"] = recs;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "greedy batch-mode active learning core";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<NumericError>(m, "NumericError");

    m.def(
        "generate_toy",
        [](int n_pos, int n_neg, double stddev, std::uint64_t seed,
           int n_seed_pos, int n_seed_neg) {
            ToyConfig tc;
            tc.n_pos = n_pos;
            tc.n_neg = n_neg;
            tc.stddev = stddev;
            tc.seed = seed;
            tc.n_seed_pos = n_seed_pos;
            tc.n_seed_neg = n_seed_neg;
            const ToyResult r = generate_gaussian_toy(tc);
            return py::make_tuple(r.dataset.X, r.dataset.truth,
                                  r.seed_labels.ids(), r.seed_labels.labels());
        },
        py::arg("n_pos") = 30, py::arg("n_neg") = 220,
        py::arg("stddev") = 0.7, py::arg("seed") = 0,
        py::arg("n_seed_pos") = 1, py::arg("n_seed_neg") = 13,
        "Two-Gaussian toy corpus; returns (X, truth, seed_ids, seed_labels).");

    py::class_<SvmModel>(m, "SvmModel")
        .def_readonly("w", &SvmModel::w)
        .def_readonly("b", &SvmModel::b)
        .def_readonly("alpha", &SvmModel::alpha)
        .def_readonly("degenerate", &SvmModel::degenerate)
        .def_readonly("converged", &SvmModel::converged)
        .def("theta", &SvmModel::theta)
        .def("score", &SvmModel::score)
        .def("predict_proba", &SvmModel::predict_proba);

    m.def(
        "fit_svm",
        [](const Mat& X, const Vec& y, double c_reg, double tol) {
            SvmOptions o;
            o.c_reg = c_reg;
            o.tol = tol;
            return fit_svm(X, y, o);
        },
        py::arg("X"), py::arg("y"), py::arg("c_reg") = 1.0,
        py::arg("tol") = 1e-6);

    py::class_<MlpModel>(m, "MlpModel")
        .def("theta", &MlpModel::theta)
        .def("score", &MlpModel::score)
        .def("predict_proba", &MlpModel::predict_proba);

    m.def(
        "fit_mlp",
        [](const Mat& X, const Vec& y, int hidden, int epochs, double lr,
           std::uint64_t seed) {
            MlpOptions o;
            o.hidden = hidden;
            o.epochs = epochs;
            o.lr = lr;
            o.seed = seed;
            return fit_mlp(X, y, o);
        },
        py::arg("X"), py::arg("y"), py::arg("hidden") = 10,
        py::arg("epochs") = 50, py::arg("lr") = 0.05, py::arg("seed") = 0);

    py::class_<GpModel>(m, "GpModel")
        .def_readonly("gamma", &GpModel::gamma)
        .def_readonly("jitter_used", &GpModel::jitter_used)
        .def("score", &GpModel::score)
        .def("predict_proba", &GpModel::predict_proba)
        .def("variance", &GpModel::variance);

    m.def("fit_gp", &fit_gp, py::arg("X"), py::arg("y"), py::arg("gamma"),
          py::arg("jitter") = 1e-6);

    m.def(
        "gp_posterior",
        [](const Mat& X_train, const Vec& y_train, const Mat& X_test,
           double gamma, double jitter) {
            const GpPosterior p =
                gp_posterior(X_train, y_train, X_test, gamma, jitter);
            return py::make_tuple(p.mean, p.cov);
        },
        py::arg("X_train"), py::arg("y_train"), py::arg("X_test"),
        py::arg("gamma"), py::arg("jitter") = 1e-6);

    m.def("set_objective", &set_objective, py::arg("X_base"), py::arg("X_A"),
          py::arg("X_c"), py::arg("gamma"), py::arg("alpha") = 1.0,
          py::arg("jitter") = 1e-6);

    m.def(
        "svm_impact",
        [](const Vec& x, const Mat& X_l, const Vec& y_l, double c_reg,
           bool include_bias) {
            SvmOptions o;
            o.c_reg = c_reg;
            const SvmModel base = fit_svm(X_l, y_l, o);
            const ImpactResult r = svm_impact(x, X_l, y_l, base, o,
                                              include_bias);
            return py::make_tuple(r.impact, r.pseudo_label);
        },
        py::arg("x"), py::arg("X_labeled"), py::arg("y_labeled"),
        py::arg("c_reg") = 1.0, py::arg("include_bias") = true,
        "Weight-shift impact of labeling x; returns (impact, pseudo_label).");

    m.def(
        "greedy_svm_batch",
        [](const Mat& X, const std::vector<int>& labeled_ids,
           const std::vector<int>& labels, const std::vector<int>& candidates,
           int B, double c_reg, bool include_bias, bool topb) {
            const Dataset data = make_dataset(X);
            const LabeledSet ls = make_labeled(labeled_ids, labels);
            SvmOptions opts;
            opts.c_reg = c_reg;
            ImpactFn fn = [&](const LabeledSet& working,
                              const std::vector<int>& remaining) {
                const Mat X_l = working.features(data);
                const Vec y_l = working.labels();
                const SvmModel base = fit_svm(X_l, y_l, opts);
                std::vector<ImpactResult> out;
                out.reserve(remaining.size());
                for (int id : remaining) {
                    out.push_back(svm_impact(data.vector_of(id), X_l, y_l,
                                             base, opts, include_bias));
                }
                return out;
            };
            const BatchSelection sel = topb
                                           ? gal_batch_topB(candidates, B, fn, ls)
                                           : gal_greedy(candidates, B, fn, ls);
            return py::make_tuple(sel.ids, sel.pseudo_labels, sel.impacts);
        },
        py::arg("X"), py::arg("labeled_ids"), py::arg("labels"),
        py::arg("candidates"), py::arg("B"), py::arg("c_reg") = 1.0,
        py::arg("include_bias") = true, py::arg("topb") = false,
        "Greedy svm-impact batch over row indices of X; returns "
        "(ids, pseudo_labels, impacts).");

    m.def(
        "greedy_gp_batch",
        [](const Mat& X_labeled, const Mat& X_pool, double gamma, int B,
           double alpha, double jitter) {
            if (X_labeled.rows() > 0 && X_labeled.cols() != X_pool.cols()) {
                throw ConfigError("labeled/pool dimension mismatch");
            }
            Mat all(X_labeled.rows() + X_pool.rows(), X_pool.cols());
            if (X_labeled.rows() > 0) all.topRows(X_labeled.rows()) = X_labeled;
            all.bottomRows(X_pool.rows()) = X_pool;
            const Dataset data = make_dataset(all);
            LabeledSet ls;
            for (int i = 0; i < X_labeled.rows(); ++i) ls.add(i, 1);
            std::vector<int> candidates(X_pool.rows());
            std::iota(candidates.begin(), candidates.end(),
                      static_cast<int>(X_labeled.rows()));
            const Mat empty(0, X_pool.cols());
            ImpactFn fn = [&](const LabeledSet& working,
                              const std::vector<int>& remaining) {
                const Mat X_b = working.features(data);
                std::vector<ImpactResult> out;
                out.reserve(remaining.size());
                for (int id : remaining) {
                    ImpactResult r;
                    r.impact = gp_impact(data.vector_of(id), X_b, empty,
                                         X_pool, gamma, alpha, jitter);
                    r.f_minus = r.f_plus = r.impact;
                    out.push_back(r);
                }
                return out;
            };
            BatchSelection sel = gal_greedy(candidates, B, fn, ls);
            for (int& id : sel.ids) {
                id -= static_cast<int>(X_labeled.rows());
            }
            return py::make_tuple(sel.ids, sel.impacts);
        },
        py::arg("X_labeled"), py::arg("X_pool"), py::arg("gamma"),
        py::arg("B"), py::arg("alpha") = 1.0, py::arg("jitter") = 1e-6,
        "Variance-reduction greedy batch; returns (pool_indices, gains).");

    m.def("average_precision", &average_precision, py::arg("ranked_relevance"),
          "AP of a ranked list of +/-1 relevance flags.");
    m.def("normalized_pseudo_prob", &normalized_pseudo_prob, py::arg("p"),
          py::arg("B"));
    m.def("median_pairwise_distance", &median_pairwise_distance, py::arg("X"));

    m.def(
        "run_experiment",
        [](const std::string& config_text, std::uint64_t seed) {
            RunSpec spec = parse_config_text(config_text);
            spec.base.strategy = spec.strategies.front();
            return curve_dict(run_al_experiment(spec.base, seed));
        },
        py::arg("config_text"), py::arg("seed") = 0,
        "Run one experiment from flat key=value config text (first strategy "
        "listed); returns the learning curve as a dict.");

    m.def(
        "verify",
        [](const std::string& scope) {
            py::list out;
            for (const auto& c : run_verify_scope(scope)) {
                out.append(py::make_tuple(c.name, c.pass, c.detail));
            }
            return out;
        },
        py::arg("scope") = "all",
        "Property suites; returns a list of (name, passed, detail).");
}
