#include "attitude/evaluation.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "attitude/detail/numeric_text.hpp"
#include "attitude/diagnostics.hpp"
#include "attitude/error.hpp"

namespace attitude {

std::string_view to_string(EvalMode m) noexcept { return m == EvalMode::Ica ? "ica" : "independent"; }

std::optional<EvalMode> parse_eval_mode(std::string_view s) noexcept {
    if (s == "independent") return EvalMode::Independent;
    if (s == "ica") return EvalMode::Ica;
    return std::nullopt;
}

FoldArtifacts train_fold(std::span<const LabeledUser> training, const Lexicon& general, const EngineConfig& config,
                         EvalMode mode, const PerDimension<bool>& active) {
    std::vector<UserRecord> records;
    records.reserve(training.size());
    for (const auto& u : training) records.push_back(u.record);

    FoldArtifacts a;
    a.features.brand_keywords = config.brand_keywords;
    a.features.window = config.context_window;
    a.features.min_doc_freq = config.min_doc_freq;
    a.features.occurrence_level_frequency = config.occurrence_level_frequency;
    a.features.vocabulary = build_vocabulary(records, config.min_doc_freq);
    a.domain = induce_domain_lexicon(records, config.brand_keywords, general, config.induction, config.brand);

    std::vector<FeatureVector> features;
    std::vector<PerDimension<Label>> labels;
    features.reserve(training.size());
    labels.reserve(training.size());
    for (const auto& u : training) {
        features.push_back(build_feature_vector(u.record, a.features, general, a.domain));
        labels.push_back(u.labels);
    }

    a.graph = build_dependency_graph(labels, config.edge_threshold).restricted_to(active);
    if (config.force_edgeless) a.graph = a.graph.without_edges();

    std::vector<Dimension> dims;
    for (Dimension d : kAllDimensions)
        if (active[index_of(d)]) dims.push_back(d);
    NodeTrainingOptions options;
    options.dimensions = dims;
    options.train_full = mode == EvalMode::Ica;
    a.models = train_node_models(features, labels, a.graph, config.classifier, options);
    return a;
}

PerDimension<double> predict_user(const UserRecord& user, const FoldArtifacts& artifacts, const Lexicon& general,
                                  const EngineConfig& config, EvalMode mode) {
    const FeatureVector x = build_feature_vector(user, artifacts.features, general, artifacts.domain);
    if (mode == EvalMode::Independent) return static_predictions(x, artifacts.models);
    return ica_infer(x, artifacts.models, artifacts.graph, config.ica).assignment.probs;
}

MetricsReport evaluate(std::span<const LabeledUser> users, const Lexicon& general, const EngineConfig& config,
                       EvalMode mode) {
    config.validate();
    const int k = config.folds;
    std::vector<std::string> ids;
    ids.reserve(users.size());
    for (const auto& u : users) ids.push_back(u.record.user_id);
    const FoldPlan plan = kfold_split(ids, k, config.seed);

    std::vector<int> fold_of(users.size());
    for (std::size_t i = 0; i < users.size(); ++i) fold_of[i] = plan.assignments.at(ids[i]);

    // A dimension is evaluated only if every training split sees both classes.
    PerDimension<bool> active;
    active.fill(true);
    for (Dimension d : kAllDimensions) {
        for (int f = 0; f < k && active[index_of(d)]; ++f) {
            bool pos = false, neg = false;
            for (std::size_t i = 0; i < users.size(); ++i) {
                if (fold_of[i] == f) continue;
                (users[i].labels[index_of(d)] == Label::Positive ? pos : neg) = true;
            }
            if (!(pos && neg)) {
                active[index_of(d)] = false;
                warn("dimension " + std::string(to_string(d)) + " skipped: fold " + std::to_string(f) +
                     " training split has a single class");
            }
        }
    }

    MetricsReport report;
    report.mode = mode;
    report.k = k;
    report.seed = config.seed;
    report.users = users.size();
    report.predictions.assign(users.size(), PerDimension<double>{});

    for (int f = 0; f < k; ++f) {
        std::vector<LabeledUser> training;
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < users.size(); ++i) {
            if (fold_of[i] == f)
                test.push_back(i);
            else
                training.push_back(users[i]);
        }
        const FoldArtifacts artifacts = train_fold(training, general, config, mode, active);
        for (std::size_t i : test) report.predictions[i] = predict_user(users[i].record, artifacts, general, config, mode);
    }

    for (Dimension d : kAllDimensions) {
        auto& m = report.dimensions[index_of(d)];
        if (!active[index_of(d)]) continue;
        std::vector<double> scores;
        std::vector<Label> predicted, actual;
        for (std::size_t i = 0; i < users.size(); ++i) {
            const double p = report.predictions[i][index_of(d)];
            scores.push_back(p);
            predicted.push_back(label_from_bool(p >= 0.5));
            actual.push_back(users[i].labels[index_of(d)]);
            m.positives += actual.back() == Label::Positive;
        }
        m.n = users.size();
        const auto prf = precision_recall_f1(predicted, actual);
        m.precision = prf.precision;
        m.recall = prf.recall;
        m.f1 = prf.f1;
        m.auc = roc_auc(scores, actual);
        m.evaluated = true;
    }
    return report;
}

std::string format_report_table(const MetricsReport& report) {
    std::ostringstream out;
    out << "# mode=" << to_string(report.mode) << " folds=" << report.k << " seed=" << report.seed
        << " users=" << report.users << " (metrics over pooled test-fold predictions)\n";
    out << std::left << std::setw(16) << "" << std::right << std::setw(11) << "precision" << std::setw(9) << "recall"
        << std::setw(7) << "F1" << std::setw(17) << "ROC Area (AUC)" << '\n';
    out << std::fixed << std::setprecision(4);
    for (Dimension d : kAllDimensions) {
        const auto& m = report.dimensions[index_of(d)];
        std::string name(to_string(d));
        name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
        out << std::left << std::setw(16) << name << std::right;
        if (!m.evaluated) {
            out << std::setw(44) << "skipped" << '\n';
            continue;
        }
        out << std::setw(11) << m.precision << std::setw(9) << m.recall << std::setw(7) << m.f1 << std::setw(17)
            << m.auc << '\n';
    }
    return out.str();
}

std::string format_report_jsonl(const MetricsReport& report) {
    std::ostringstream out;
    for (Dimension d : kAllDimensions) {
        const auto& m = report.dimensions[index_of(d)];
        nlohmann::ordered_json j;
        j["dimension"] = to_string(d);
        j["mode"] = to_string(report.mode);
        j["folds"] = report.k;
        j["seed"] = report.seed;
        j["evaluated"] = m.evaluated;
        if (m.evaluated) {
            j["n"] = m.n;
            j["positives"] = m.positives;
            j["precision"] = m.precision;
            j["recall"] = m.recall;
            j["f1"] = m.f1;
            j["auc"] = m.auc;
        }
        out << j.dump() << '\n';
    }
    return out.str();
}

std::string format_comparison(const MetricsReport& independent, const MetricsReport& ica) {
    std::ostringstream out;
    out << std::left << std::setw(16) << "dimension" << std::right << std::setw(13) << "independent" << std::setw(9)
        << "ica" << std::setw(9) << "delta" << '\n';
    out << std::fixed << std::setprecision(4);
    for (Dimension d : kAllDimensions) {
        const auto& a = independent.dimensions[index_of(d)];
        const auto& b = ica.dimensions[index_of(d)];
        out << std::left << std::setw(16) << to_string(d) << std::right;
        if (!a.evaluated || !b.evaluated) {
            out << std::setw(31) << "skipped" << '\n';
            continue;
        }
        out << std::setw(13) << a.auc << std::setw(9) << b.auc << std::showpos << std::setw(9) << (b.auc - a.auc)
            << std::noshowpos << '\n';
    }
    return out.str();
}

}  // namespace attitude
