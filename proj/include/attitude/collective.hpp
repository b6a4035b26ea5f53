#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attitude/classifier.hpp"
#include "attitude/dimension.hpp"
#include "attitude/features.hpp"

namespace attitude {

struct Edge {
    Dimension a;  // a < b
    Dimension b;
    double r;

    int sign() const noexcept { return r < 0 ? -1 : 1; }
};

// Dimensions as nodes; an edge joins two dimensions whose training-label
// correlation reaches the threshold in absolute value. All pairwise
// correlations are kept (NaN where a column is constant) because the
// bootstrap needs the sign of every dimension's correlation with favorability.
class DependencyGraph {
public:
    DependencyGraph();
    DependencyGraph(const PerDimension<PerDimension<double>>& correlation, double threshold);

    double threshold() const noexcept { return threshold_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    double correlation(Dimension a, Dimension b) const { return correlation_[index_of(a)][index_of(b)]; }
    bool has_edge(Dimension a, Dimension b) const;
    // Neighbors in declaration order.
    std::vector<Dimension> neighbors(Dimension d) const;

    // Same correlations, no edges.
    DependencyGraph without_edges() const;
    // Drops every edge touching an inactive dimension.
    DependencyGraph restricted_to(const PerDimension<bool>& active) const;

private:
    PerDimension<PerDimension<double>> correlation_{};
    double threshold_ = 1.0;
    std::vector<Edge> edges_;
};

inline constexpr double kDefaultEdgeThreshold = 0.3;

// Pearson correlation of the 0/1-coded labels for all 28 pairs. A dimension
// with a single label value gets no edges and a warning.
DependencyGraph build_dependency_graph(std::span<const PerDimension<Label>> labels,
                                       double threshold = kDefaultEdgeThreshold);

// `dimA<TAB>dimB<TAB>r` for every pair plus ';' header lines.
void save_graph(std::ostream& out, const DependencyGraph& graph);
DependencyGraph load_graph(std::istream& in);

// Id of the dynamic feature carrying a neighbor's current estimate.
std::string dynamic_feature_id(Dimension neighbor);

struct NodeModel {
    Dimension dimension = Dimension::Favorability;
    ClassifierModel static_model;  // static features only
    ClassifierModel full_model;    // static features plus one dynamic feature per neighbor
    std::vector<Dimension> neighbor_order;
};

using NodeModels = std::map<Dimension, NodeModel>;

void save_node_model(std::ostream& out, const NodeModel& node);
NodeModel load_node_model(std::istream& in);

// Current per-dimension estimates, stored as positive-class probabilities.
struct Assignment {
    PerDimension<double> probs{};

    Label hard_label(Dimension d) const { return label_from_bool(probs[index_of(d)] >= 0.5); }
    PerDimension<Label> hard_labels() const;
};

// Static features plus `dyn:<neighbor>` entries holding the given values.
FeatureVector with_dynamic_features(const FeatureVector& static_features, std::span<const Dimension> neighbor_order,
                                    const PerDimension<double>& neighbor_values);

struct NodeTrainingOptions {
    // Dimensions to model; all eight when unset.
    std::optional<std::vector<Dimension>> dimensions;
    // When false only the static classifier is trained; full_model is left
    // empty and neighbor_order cleared.
    bool train_full = true;
};

// Trains f^s and f^{s+d} for each requested dimension. Dynamic features are
// fitted on the neighbors' true labels coded 0/1.
NodeModels train_node_models(std::span<const FeatureVector> features, std::span<const PerDimension<Label>> labels,
                             const DependencyGraph& graph, const Hyperparams& hyperparams = {},
                             const NodeTrainingOptions& options = {});

inline constexpr double kConfidentHigh = 0.8;
inline constexpr double kConfidentLow = 0.2;

// Keeps confident static predictions (>= conf_hi or <= conf_lo) and
// favorability. Every other dimension starts from favorability's static
// probability, flipped to 1 - p when its correlation with favorability is
// negative. If that correlation is undefined the static probability is kept.
Assignment bootstrap_init(const PerDimension<double>& static_probs, const DependencyGraph& graph,
                          double conf_hi = kConfidentHigh, double conf_lo = kConfidentLow);

struct IcaOptions {
    int max_iters = 10;
    bool heuristic_bootstrap = true;  // false: start from the plain static predictions
    double conf_hi = kConfidentHigh;
    double conf_lo = kConfidentLow;
};

struct IcaResult {
    Assignment assignment;
    PerDimension<double> static_probs{};  // f^s output, i.e. the independent prediction
    int sweeps = 0;          // including the confirming sweep
    bool converged = false;  // one more sweep from `assignment` changes no hard label
};

// Dimensions without a model predict 0.5 and are never updated.
PerDimension<double> static_predictions(const FeatureVector& user_static, const NodeModels& models);

// One in-place pass over the dimensions in declaration order; later
// dimensions see updates made earlier in the same pass. Returns whether any
// hard label changed.
bool ica_sweep(const FeatureVector& user_static, const NodeModels& models, Assignment& assignment);

// Bootstrap, then at least one sweep. After that each sweep is tried on a
// copy; when it changes no hard label the iteration stops and the state it
// started from is returned, so the result is an exact fixed point of the hard
// labels even though the dynamic features are soft.
IcaResult ica_infer(const FeatureVector& user_static, const NodeModels& models, const DependencyGraph& graph,
                    const IcaOptions& options = {});

}  // namespace attitude
