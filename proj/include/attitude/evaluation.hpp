#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "attitude/collective.hpp"
#include "attitude/config.hpp"
#include "attitude/corpus.hpp"
#include "attitude/lexicon.hpp"
#include "attitude/metrics.hpp"

namespace attitude {

enum class EvalMode { Independent, Ica };

std::string_view to_string(EvalMode m) noexcept;
std::optional<EvalMode> parse_eval_mode(std::string_view s) noexcept;

// Everything learned from one training split. Nothing in here may depend on
// users outside that split.
struct FoldArtifacts {
    FeatureConfig features;  // vocabulary frozen
    DomainLexicon domain;
    DependencyGraph graph;
    NodeModels models;
};

// Vocabulary, domain lexicon, dependency graph and node models from
// `training` only. In independent mode only the static classifiers are
// trained. Dimensions marked inactive get no model and no edges.
FoldArtifacts train_fold(std::span<const LabeledUser> training, const Lexicon& general, const EngineConfig& config,
                         EvalMode mode, const PerDimension<bool>& active);

// Independent mode returns the static predictions, ICA mode the refined ones.
PerDimension<double> predict_user(const UserRecord& user, const FoldArtifacts& artifacts, const Lexicon& general,
                                  const EngineConfig& config, EvalMode mode);

struct DimensionMetrics {
    bool evaluated = false;
    std::size_t n = 0;
    std::size_t positives = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    double auc = 0;
};

struct MetricsReport {
    EvalMode mode = EvalMode::Independent;
    int k = 5;
    std::uint64_t seed = 0;
    std::size_t users = 0;
    PerDimension<DimensionMetrics> dimensions{};
    // Pooled out-of-fold probabilities, in input user order.
    std::vector<PerDimension<double>> predictions;
};

// k-fold cross-validation. Each fold trains on its complement only; metrics
// are computed once over the pooled test-fold predictions. A dimension whose
// training split is single-class in any fold is skipped with a warning.
MetricsReport evaluate(std::span<const LabeledUser> users, const Lexicon& general, const EngineConfig& config,
                       EvalMode mode);

// Human-readable table: precision, recall, F1, ROC area per dimension.
std::string format_report_table(const MetricsReport& report);
// One JSON object per dimension.
std::string format_report_jsonl(const MetricsReport& report);
// Per-dimension AUC pairs, independent vs ICA.
std::string format_comparison(const MetricsReport& independent, const MetricsReport& ica);

}  // namespace attitude
