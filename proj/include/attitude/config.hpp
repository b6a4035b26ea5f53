#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "attitude/classifier.hpp"
#include "attitude/collective.hpp"
#include "attitude/corpus.hpp"
#include "attitude/lexicon.hpp"

namespace attitude {

// Every tunable of the pipeline in one place. Loaded from JSON; keys that are
// absent keep their defaults.
struct EngineConfig {
    std::string brand = "delta";
    std::vector<std::string> brand_keywords = {"@delta"};

    // features
    int context_window = 3;
    int min_doc_freq = 2;
    bool occurrence_level_frequency = false;

    // domain lexicon
    InductionParams induction;

    // classifier
    Hyperparams classifier;

    // collective inference
    double edge_threshold = kDefaultEdgeThreshold;
    bool force_edgeless = false;
    IcaOptions ica;

    // labels and evaluation
    ThresholdPolicy threshold_policy = ThresholdPolicy::ScaleMidpoint;
    int folds = 5;
    std::uint64_t seed = 42;

    // service
    int histogram_bins = 5;

    void validate() const;
};

void to_json(nlohmann::json& j, const EngineConfig& c);
void from_json(const nlohmann::json& j, EngineConfig& c);

EngineConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const EngineConfig& config);

}  // namespace attitude
