#include <sstream>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <json.hpp>

#include "attitude/classifier.hpp"
#include "attitude/config.hpp"
#include "attitude/corpus.hpp"
#include "attitude/error.hpp"
#include "attitude/evaluation.hpp"
#include "attitude/features.hpp"
#include "attitude/metrics.hpp"
#include "attitude/service.hpp"
#include "attitude/synthetic.hpp"
#include "attitude/tokenize.hpp"

namespace py = pybind11;
using namespace attitude;

namespace {

// Dimension-keyed dicts are the Python-side representation of PerDimension.
template <typename T>
py::dict per_dimension(const PerDimension<T>& values) {
    py::dict d;
    for (Dimension dim : kAllDimensions) d[py::str(std::string(to_string(dim)))] = values[index_of(dim)];
    return d;
}

EngineConfig config_from(const py::object& obj) {
    if (obj.is_none()) return EngineConfig{};
    if (py::isinstance<EngineConfig>(obj)) return obj.cast<EngineConfig>();
    std::string text = py::isinstance<py::str>(obj) ? obj.cast<std::string>()
                                                    : py::module_::import("json").attr("dumps")(obj).cast<std::string>();
    EngineConfig c = nlohmann::json::parse(text).get<EngineConfig>();
    c.validate();
    return c;
}

FeatureVector feature_vector_from(const std::map<std::string, double>& values) {
    FeatureVector v;
    for (const auto& [k, x] : values) v.set(k, x);
    return v;
}

py::dict report_dict(const MetricsReport& r) {
    py::dict dims;
    for (Dimension d : kAllDimensions) {
        const auto& m = r.dimensions[index_of(d)];
        if (!m.evaluated) continue;
        py::dict row;
        row["n"] = m.n;
        row["positives"] = m.positives;
        row["precision"] = m.precision;
        row["recall"] = m.recall;
        row["f1"] = m.f1;
        row["auc"] = m.auc;
        dims[py::str(std::string(to_string(d)))] = row;
    }
    py::list preds;
    for (const auto& p : r.predictions) preds.append(per_dimension(p));
    py::dict out;
    out["mode"] = std::string(to_string(r.mode));
    out["folds"] = r.k;
    out["seed"] = r.seed;
    out["users"] = r.users;
    out["dimensions"] = dims;
    out["predictions"] = preds;
    out["table"] = format_report_table(r);
    return out;
}

EvalMode mode_from(const std::string& s) {
    auto m = parse_eval_mode(s);
    if (!m) throw std::invalid_argument("mode must be 'independent' or 'ica'");
    return *m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Attitude and action-intention prediction engine";

    // Translators run newest first, so the base class goes in first.
    py::register_exception<Error>(m, "EngineError", PyExc_RuntimeError);
    py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_KeyError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.attr("DIMENSIONS") = [] {
        py::list l;
        for (Dimension d : kAllDimensions) l.append(std::string(to_string(d)));
        return l;
    }();

    m.def("tokenize", &tokenize, py::arg("text"), "Lowercased tokens with URLs removed.");

    // corpus
    py::class_<Tweet>(m, "Tweet")
        .def(py::init([](std::string user_id, std::int64_t ts, std::string text) {
                 return Tweet{std::move(user_id), ts, std::move(text)};
             }),
             py::arg("user_id"), py::arg("timestamp"), py::arg("text"))
        .def_readwrite("user_id", &Tweet::user_id)
        .def_readwrite("timestamp", &Tweet::timestamp)
        .def_readwrite("text", &Tweet::text)
        .def("__repr__", [](const Tweet& t) { return "<Tweet " + t.user_id + " @" + std::to_string(t.timestamp) + ">"; });

    py::class_<UserRecord>(m, "UserRecord")
        .def(py::init<>())
        .def_readwrite("user_id", &UserRecord::user_id)
        .def_readwrite("tweets", &UserRecord::tweets)
        .def_readwrite("profile", &UserRecord::profile)
        .def("__repr__", [](const UserRecord& u) {
            return "<UserRecord " + u.user_id + " tweets=" + std::to_string(u.tweets.size()) + ">";
        });

    m.def("load_users", py::overload_cast<const std::filesystem::path&>(&load_users), py::arg("path"));
    m.def(
        "save_users",
        [](const std::filesystem::path& p, const std::vector<UserRecord>& users) { save_users(p, users); },
        py::arg("path"), py::arg("users"));
    m.def(
        "filter_brand_mentions",
        [](const std::vector<UserRecord>& users, const std::vector<std::string>& keywords) {
            return filter_brand_mentions(users, keywords);
        },
        py::arg("users"), py::arg("keywords"));

    py::class_<LabeledUser>(m, "LabeledUser")
        .def_readonly("record", &LabeledUser::record)
        .def_property_readonly("labels", [](const LabeledUser& u) {
            PerDimension<int> l{};
            for (Dimension d : kAllDimensions) l[index_of(d)] = to_int(u.labels[index_of(d)]);
            return per_dimension(l);
        });

    m.def(
        "label_users",
        [](const std::vector<UserRecord>& users, const std::filesystem::path& survey, const std::string& policy) {
            const auto responses = load_survey(survey);
            if (policy != "midpoint" && policy != "sample_mean")
                throw std::invalid_argument("policy must be 'midpoint' or 'sample_mean'");
            return label_users(users, responses,
                               policy == "midpoint" ? ThresholdPolicy::ScaleMidpoint : ThresholdPolicy::SampleMean);
        },
        py::arg("users"), py::arg("survey_path"), py::arg("policy") = "midpoint");

    // lexicon
    py::class_<Lexicon>(m, "Lexicon")
        .def(py::init<const std::vector<std::string>&, const std::vector<std::string>&>(), py::arg("positive"),
             py::arg("negative"))
        .def_static("load", &load_lexicon, py::arg("positive_path"), py::arg("negative_path"))
        .def("polarity",
             [](const Lexicon& l, const std::string& w) -> py::object {
                 auto p = l.polarity(w);
                 if (!p) return py::none();
                 return py::str(std::string(to_string(*p)));
             })
        .def("__len__", &Lexicon::size)
        .def("__contains__", &Lexicon::contains);

    m.def(
        "induce_domain_lexicon",
        [](const std::vector<UserRecord>& users, const std::vector<std::string>& keywords, const Lexicon& general,
           int window, int threshold) {
            InductionParams p;
            p.window = window;
            p.threshold = threshold;
            const DomainLexicon lex = induce_domain_lexicon(users, keywords, general, p);
            std::map<std::string, std::pair<std::string, long>> out;
            for (const auto& [w, e] : lex.entries) out[w] = {std::string(to_string(e.polarity)), e.score};
            return out;
        },
        py::arg("users"), py::arg("keywords"), py::arg("general"), py::arg("window") = 3, py::arg("threshold") = 3,
        "Maps each induced word to (polarity, score).");

    // config
    py::class_<EngineConfig>(m, "EngineConfig")
        .def(py::init(&config_from), py::arg("settings") = py::none(),
             "From a dict or JSON string; absent keys keep their defaults.")
        .def_static("load", &load_config, py::arg("path"))
        .def("save", [](const EngineConfig& c, const std::filesystem::path& p) { save_config(p, c); })
        .def("to_json", [](const EngineConfig& c) { return nlohmann::json(c).dump(2); });

    // classifier
    py::class_<ClassifierModel>(m, "ClassifierModel")
        .def("predict_proba",
             [](const ClassifierModel& model, const std::map<std::string, double>& x) {
                 return model.predict_proba(feature_vector_from(x));
             })
        .def_property_readonly("bias", &ClassifierModel::bias)
        .def_property_readonly("weights",
                               [](const ClassifierModel& model) {
                                   std::map<std::string, double> w;
                                   for (const auto& f : model.features()) w[f.id] = f.weight;
                                   return w;
                               })
        .def("serialize", [](const ClassifierModel& model) { return serialize(model); })
        .def_static("deserialize",
                    [](const std::string& text) {
                        std::istringstream in(text);
                        return load_model(in);
                    })
        .def(py::self == py::self);

    m.def(
        "train_classifier",
        [](const std::vector<std::map<std::string, double>>& rows, const std::vector<int>& labels, double l2_lambda,
           int epochs, int batch_size, std::uint64_t seed, bool class_weighting) {
            if (rows.size() != labels.size()) throw std::invalid_argument("rows and labels differ in length");
            std::vector<FeatureVector> x;
            std::vector<Label> y;
            for (const auto& r : rows) x.push_back(feature_vector_from(r));
            for (int l : labels) {
                if (l != 0 && l != 1) throw std::invalid_argument("labels must be 0 or 1");
                y.push_back(label_from_bool(l == 1));
            }
            Hyperparams hp;
            hp.l2_lambda = l2_lambda;
            hp.epochs = epochs;
            hp.batch_size = batch_size;
            hp.seed = seed;
            hp.class_weighting = class_weighting;
            py::gil_scoped_release release;
            return train(TrainingSet{Dimension::Favorability, x, y}, hp);
        },
        py::arg("rows"), py::arg("labels"), py::arg("l2_lambda") = 1e-3, py::arg("epochs") = 50,
        py::arg("batch_size") = 32, py::arg("seed") = 42, py::arg("class_weighting") = true);

    // metrics
    m.def(
        "roc_auc",
        [](const std::vector<double>& scores, const std::vector<int>& labels) {
            std::vector<Label> y;
            for (int l : labels) y.push_back(label_from_bool(l != 0));
            return roc_auc(scores, y);
        },
        py::arg("scores"), py::arg("labels"));
    m.def("f1_score", &f1_score, py::arg("precision"), py::arg("recall"));
    m.def(
        "pearson_correlation",
        [](const std::vector<double>& x, const std::vector<double>& y) { return pearson_correlation(x, y); },
        py::arg("x"), py::arg("y"));

    // synthetic data
    py::class_<SyntheticCorpus>(m, "SyntheticCorpus")
        .def_readonly("users", &SyntheticCorpus::users)
        .def_readonly("positive_words", &SyntheticCorpus::positive_words)
        .def_readonly("negative_words", &SyntheticCorpus::negative_words)
        .def("lexicon", &SyntheticCorpus::lexicon)
        .def("labeled", &SyntheticCorpus::labeled);
    m.def(
        "generate_synthetic",
        [](std::size_t users, std::uint64_t seed, const std::string& keyword) {
            SyntheticSpec spec;
            spec.users = users;
            spec.seed = seed;
            spec.brand_keyword = keyword;
            return generate_synthetic(spec);
        },
        py::arg("users") = 1000, py::arg("seed") = 7, py::arg("keyword") = "@delta");

    // evaluation
    m.def(
        "evaluate",
        [](const std::vector<LabeledUser>& users, const Lexicon& general, const EngineConfig& config,
           const std::string& mode) {
            const EvalMode em = mode_from(mode);
            MetricsReport r;
            {
                py::gil_scoped_release release;
                r = evaluate(users, general, config, em);
            }
            return report_dict(r);
        },
        py::arg("users"), py::arg("general"), py::arg("config") = EngineConfig{}, py::arg("mode") = "ica");

    // scoring service
    py::class_<ModelBundle>(m, "ModelBundle")
        .def_static("load", &load_bundle, py::arg("path"))
        .def("save", [](const ModelBundle& b, const std::filesystem::path& p) { save_bundle(p, b); })
        .def_property_readonly("brand", [](const ModelBundle& b) { return b.config.brand; })
        .def_property_readonly("dimensions", [](const ModelBundle& b) {
            std::vector<std::string> out;
            for (const auto& [d, node] : b.artifacts.models) out.emplace_back(to_string(d));
            return out;
        });
    m.def(
        "train_bundle",
        [](const std::vector<LabeledUser>& users, const Lexicon& general, const EngineConfig& config) {
            py::gil_scoped_release release;
            return train_bundle(users, general, config);
        },
        py::arg("users"), py::arg("general"), py::arg("config") = EngineConfig{});

    py::class_<ScoredUser>(m, "ScoredUser")
        .def_readonly("user_id", &ScoredUser::user_id)
        .def_readonly("brand", &ScoredUser::brand)
        .def_property_readonly("scores", [](const ScoredUser& u) { return per_dimension(u.scores); })
        .def_property_readonly("independent_scores", [](const ScoredUser& u) { return per_dimension(u.independent); })
        .def_readonly("profile", &ScoredUser::profile)
        .def_readonly("relevant_tweets", &ScoredUser::relevant_tweets)
        .def("__repr__", [](const ScoredUser& u) { return "<ScoredUser " + u.user_id + ">"; });

    m.def(
        "score_cohort",
        [](const std::vector<UserRecord>& users, const std::string& brand, const ModelBundle& bundle) {
            py::gil_scoped_release release;
            return score_cohort(users, brand, bundle);
        },
        py::arg("users"), py::arg("brand"), py::arg("bundle"));
    m.def(
        "distribution",
        [](const std::vector<ScoredUser>& cohort, const std::string& dimension, const std::string& mode, int bins) {
            auto d = parse_dimension(dimension);
            if (!d) throw std::invalid_argument("unknown dimension '" + dimension + "'");
            const Histogram h = distribution(cohort, *d, mode_from(mode), bins);
            return std::make_pair(h.bin_edges, h.counts);
        },
        py::arg("cohort"), py::arg("dimension"), py::arg("mode") = "ica", py::arg("bins") = kDefaultHistogramBins,
        "Returns (bin_edges, counts).");
    m.def(
        "filter_users",
        [](const std::vector<ScoredUser>& cohort, const std::string& filters, const std::string& mode) {
            return filter_users(cohort, parse_filter_spec(filters), mode_from(mode));
        },
        py::arg("cohort"), py::arg("filters"), py::arg("mode") = "ica",
        "filters uses the query syntax 'dimension:lo:hi,...'.");
    m.def(
        "user_detail",
        [](const std::vector<ScoredUser>& cohort, const std::string& id) { return user_detail(cohort, id); },
        py::arg("cohort"), py::arg("user_id"));
    m.def(
        "save_snapshot",
        [](const std::filesystem::path& p, const std::vector<ScoredUser>& c) { save_snapshot(p, c); },
        py::arg("path"), py::arg("cohort"));
    m.def(
        "load_snapshot", [](const std::filesystem::path& p) { return load_snapshot(p); }, py::arg("path"));
    m.def(
        "handle_request",
        [](const std::vector<ScoredUser>& cohort, const std::string& brand, const std::string& path,
           const std::map<std::string, std::string>& query) {
            Snapshot snap{brand, cohort, kDefaultHistogramBins};
            const ApiResponse r = handle_request(snap, path, query);
            return std::make_pair(r.status, r.body);
        },
        py::arg("cohort"), py::arg("brand"), py::arg("path"), py::arg("query") = std::map<std::string, std::string>{},
        "Answers an API GET without a server; returns (status, json_body).");
}
