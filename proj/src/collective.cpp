#include "attitude/collective.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "attitude/detail/numeric_text.hpp"
#include "attitude/diagnostics.hpp"
#include "attitude/error.hpp"
#include "attitude/metrics.hpp"

namespace attitude {

// Graph --------------------------------------------------------------------

DependencyGraph::DependencyGraph() {
    for (auto& row : correlation_) row.fill(std::nan(""));
    for (Dimension d : kAllDimensions) correlation_[index_of(d)][index_of(d)] = 1.0;
}

DependencyGraph::DependencyGraph(const PerDimension<PerDimension<double>>& correlation, double threshold)
    : correlation_(correlation), threshold_(threshold) {
    if (!(threshold > 0 && threshold <= 1)) throw std::invalid_argument("edge threshold must be in (0, 1]");
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        for (std::size_t j = i + 1; j < kDimensionCount; ++j) {
            const double r = correlation_[i][j];
            if (!std::isnan(r) && std::abs(r) >= threshold)
                edges_.push_back({kAllDimensions[i], kAllDimensions[j], r});
        }
    }
}

bool DependencyGraph::has_edge(Dimension a, Dimension b) const {
    if (a > b) std::swap(a, b);
    return std::any_of(edges_.begin(), edges_.end(), [&](const Edge& e) { return e.a == a && e.b == b; });
}

std::vector<Dimension> DependencyGraph::neighbors(Dimension d) const {
    std::vector<Dimension> out;
    for (Dimension other : kAllDimensions)
        if (other != d && has_edge(d, other)) out.push_back(other);
    return out;
}

DependencyGraph DependencyGraph::without_edges() const {
    DependencyGraph g = *this;
    g.edges_.clear();
    return g;
}

DependencyGraph DependencyGraph::restricted_to(const PerDimension<bool>& active) const {
    DependencyGraph g = *this;
    std::erase_if(g.edges_, [&](const Edge& e) { return !active[index_of(e.a)] || !active[index_of(e.b)]; });
    return g;
}

DependencyGraph build_dependency_graph(std::span<const PerDimension<Label>> labels, double threshold) {
    if (labels.size() < 3) throw Error("build_dependency_graph: need at least 3 users");
    PerDimension<std::vector<double>> columns;
    PerDimension<bool> varies{};
    for (Dimension d : kAllDimensions) {
        auto& col = columns[index_of(d)];
        for (const auto& row : labels) col.push_back(to_int(row[index_of(d)]));
        varies[index_of(d)] = std::any_of(col.begin(), col.end(), [&](double v) { return v != col.front(); });
        if (!varies[index_of(d)])
            warn("dimension " + std::string(to_string(d)) + " has a single label value; it gets no graph edges");
    }

    PerDimension<PerDimension<double>> corr;
    for (auto& row : corr) row.fill(std::nan(""));
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        corr[i][i] = 1.0;
        for (std::size_t j = i + 1; j < kDimensionCount; ++j) {
            if (!varies[i] || !varies[j]) continue;
            corr[i][j] = corr[j][i] = pearson_correlation(columns[i], columns[j]);
        }
    }
    return DependencyGraph(corr, threshold);
}

void save_graph(std::ostream& out, const DependencyGraph& graph) {
    out << ";threshold\t" << detail::format_double(graph.threshold()) << '\n';
    out << ";edges\t" << graph.edges().size() << '\n';
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        for (std::size_t j = i + 1; j < kDimensionCount; ++j) {
            const Dimension a = kAllDimensions[i], b = kAllDimensions[j];
            out << to_string(a) << '\t' << to_string(b) << '\t' << detail::format_double(graph.correlation(a, b))
                << '\n';
        }
    }
}

DependencyGraph load_graph(std::istream& in) {
    PerDimension<PerDimension<double>> corr;
    for (auto& row : corr) row.fill(std::nan(""));
    for (std::size_t i = 0; i < kDimensionCount; ++i) corr[i][i] = 1.0;
    double threshold = kDefaultEdgeThreshold;
    std::optional<std::size_t> expected_edges;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        if (t1 == std::string::npos) throw ParseError("expected tab-separated fields", line_no);
        std::string_view first(line.data(), t1);
        std::string_view rest(line.data() + t1 + 1, line.size() - t1 - 1);
        if (first == ";threshold") {
            auto v = detail::parse_double(rest);
            if (!v) throw ParseError("bad threshold", line_no);
            threshold = *v;
            continue;
        }
        if (first == ";edges") {
            expected_edges = detail::parse_int<std::size_t>(rest);
            if (!expected_edges) throw ParseError("bad edge count", line_no);
            continue;
        }
        if (first.starts_with(';')) continue;
        auto t2 = rest.find('\t');
        if (t2 == std::string_view::npos) throw ParseError("expected dimA<TAB>dimB<TAB>r", line_no);
        auto a = parse_dimension(first);
        auto b = parse_dimension(rest.substr(0, t2));
        auto r = detail::parse_double(rest.substr(t2 + 1));
        if (!a || !b || *a == *b) throw ParseError("bad dimension pair", line_no);
        if (!r || (!std::isnan(*r) && (*r < -1 || *r > 1))) throw ParseError("correlation must be in [-1, 1]", line_no);
        corr[index_of(*a)][index_of(*b)] = corr[index_of(*b)][index_of(*a)] = *r;
    }
    DependencyGraph g(corr, threshold);
    if (expected_edges && *expected_edges == 0 && !g.edges().empty()) return g.without_edges();
    if (expected_edges && *expected_edges != g.edges().size())
        throw ParseError("edge count does not match correlations and threshold");
    return g;
}

// Node models --------------------------------------------------------------

std::string dynamic_feature_id(Dimension neighbor) { return "dyn:" + std::string(to_string(neighbor)); }

PerDimension<Label> Assignment::hard_labels() const {
    PerDimension<Label> out{};
    for (Dimension d : kAllDimensions) out[index_of(d)] = hard_label(d);
    return out;
}

FeatureVector with_dynamic_features(const FeatureVector& static_features, std::span<const Dimension> neighbor_order,
                                    const PerDimension<double>& neighbor_values) {
    FeatureVector v = static_features;
    for (Dimension n : neighbor_order) v.set(dynamic_feature_id(n), neighbor_values[index_of(n)]);
    return v;
}

NodeModels train_node_models(std::span<const FeatureVector> features, std::span<const PerDimension<Label>> labels,
                             const DependencyGraph& graph, const Hyperparams& hyperparams,
                             const NodeTrainingOptions& options) {
    if (features.size() != labels.size()) throw Error("train_node_models: features and labels differ in length");
    const std::vector<Dimension> dims = options.dimensions
                                            ? *options.dimensions
                                            : std::vector<Dimension>(kAllDimensions.begin(), kAllDimensions.end());

    // Values of the dynamic features while fitting f^{s+d}.
    std::vector<PerDimension<double>> dynamic(features.size());
    if (options.train_full)
        for (std::size_t i = 0; i < labels.size(); ++i)
            for (Dimension n : kAllDimensions) dynamic[i][index_of(n)] = to_int(labels[i][index_of(n)]);

    NodeModels models;
    std::vector<Label> column(labels.size());
    std::vector<FeatureVector> augmented(features.size());
    for (Dimension d : dims) {
        for (std::size_t i = 0; i < labels.size(); ++i) column[i] = labels[i][index_of(d)];

        NodeModel node;
        node.dimension = d;
        node.static_model = train(TrainingSet{d, features, column}, hyperparams);
        if (options.train_full) {
            node.neighbor_order = graph.neighbors(d);
            for (std::size_t i = 0; i < features.size(); ++i)
                augmented[i] = with_dynamic_features(features[i], node.neighbor_order, dynamic[i]);
            node.full_model = train(TrainingSet{d, augmented, column}, hyperparams);
        }
        models.emplace(d, std::move(node));
    }
    return models;
}

void save_node_model(std::ostream& out, const NodeModel& node) {
    out << "attitude-node v1\n";
    out << "dimension\t" << to_string(node.dimension) << '\n';
    out << "neighbors\t";
    for (std::size_t i = 0; i < node.neighbor_order.size(); ++i)
        out << (i ? "," : "") << to_string(node.neighbor_order[i]);
    out << "\n[static]\n";
    save_model(out, node.static_model);
    out << "[full]\n";
    save_model(out, node.full_model);
}

NodeModel load_node_model(std::istream& in) {
    std::string line;
    auto next = [&](std::string_view what) -> std::string& {
        if (!std::getline(in, line)) throw ParseError("node model truncated before " + std::string(what));
        return line;
    };
    if (next("header") != "attitude-node v1") throw ParseError("not a node model (bad header)");

    NodeModel node;
    next("dimension");
    if (!line.starts_with("dimension\t")) throw ParseError("expected 'dimension'");
    auto dim = parse_dimension(std::string_view(line).substr(10));
    if (!dim) throw ParseError("unknown dimension '" + line.substr(10) + "'");
    node.dimension = *dim;

    next("neighbors");
    if (!line.starts_with("neighbors\t")) throw ParseError("expected 'neighbors'");
    std::string_view list = std::string_view(line).substr(10);
    while (!list.empty()) {
        auto comma = list.find(',');
        auto n = parse_dimension(list.substr(0, comma));
        if (!n) throw ParseError("unknown neighbor in '" + std::string(list) + "'");
        node.neighbor_order.push_back(*n);
        if (comma == std::string_view::npos) break;
        list = list.substr(comma + 1);
    }

    if (next("[static]") != "[static]") throw ParseError("expected [static]");
    node.static_model = load_model(in);
    if (next("[full]") != "[full]") throw ParseError("expected [full]");
    node.full_model = load_model(in);
    return node;
}

// Inference ----------------------------------------------------------------

Assignment bootstrap_init(const PerDimension<double>& static_probs, const DependencyGraph& graph, double conf_hi,
                          double conf_lo) {
    if (!(0 <= conf_lo && conf_lo < conf_hi && conf_hi <= 1))
        throw std::invalid_argument("bootstrap thresholds must satisfy 0 <= lo < hi <= 1");
    for (double p : static_probs)
        if (!(p >= 0 && p <= 1)) throw std::invalid_argument("static probabilities must lie in [0, 1]");

    const double p_fav = static_probs[index_of(Dimension::Favorability)];
    Assignment a;
    for (Dimension d : kAllDimensions) {
        const double p = static_probs[index_of(d)];
        double init = p;
        if (!(p >= conf_hi || p <= conf_lo) && d != Dimension::Favorability) {
            const double r = graph.correlation(Dimension::Favorability, d);
            if (!std::isnan(r)) init = r >= 0 ? p_fav : 1.0 - p_fav;
        }
        a.probs[index_of(d)] = init;
    }
    return a;
}

PerDimension<double> static_predictions(const FeatureVector& user_static, const NodeModels& models) {
    PerDimension<double> probs;
    probs.fill(0.5);
    for (const auto& [d, node] : models) probs[index_of(d)] = node.static_model.predict_proba(user_static);
    return probs;
}

bool ica_sweep(const FeatureVector& user_static, const NodeModels& models, Assignment& assignment) {
    bool changed = false;
    for (Dimension d : kAllDimensions) {
        auto it = models.find(d);
        if (it == models.end()) continue;
        const NodeModel& node = it->second;
        const Label before = assignment.hard_label(d);
        const double p = node.neighbor_order.empty()
                             ? node.full_model.predict_proba(user_static)
                             : node.full_model.predict_proba(
                                   with_dynamic_features(user_static, node.neighbor_order, assignment.probs));
        assignment.probs[index_of(d)] = p;
        changed = changed || assignment.hard_label(d) != before;
    }
    return changed;
}

IcaResult ica_infer(const FeatureVector& user_static, const NodeModels& models, const DependencyGraph& graph,
                    const IcaOptions& options) {
    if (options.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    for (const auto& [d, node] : models) {
        if (node.neighbor_order != graph.neighbors(d))
            throw std::invalid_argument("node model for " + std::string(to_string(d)) +
                                        " was trained on a different dependency graph");
    }

    IcaResult result;
    result.static_probs = static_predictions(user_static, models);
    if (options.heuristic_bootstrap) {
        result.assignment = bootstrap_init(result.static_probs, graph, options.conf_hi, options.conf_lo);
        // Dimensions without a model stay at the neutral 0.5.
        for (Dimension d : kAllDimensions)
            if (!models.count(d)) result.assignment.probs[index_of(d)] = 0.5;
    } else {
        result.assignment.probs = result.static_probs;
    }

    ica_sweep(user_static, models, result.assignment);
    result.sweeps = 1;
    while (result.sweeps < options.max_iters) {
        Assignment trial = result.assignment;
        ++result.sweeps;
        if (!ica_sweep(user_static, models, trial)) {
            result.converged = true;
            break;
        }
        result.assignment = trial;
    }
    return result;
}

}  // namespace attitude
