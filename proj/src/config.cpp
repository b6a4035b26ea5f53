#include "attitude/config.hpp"

#include <algorithm>
#include <fstream>

#include "attitude/error.hpp"

namespace attitude {

using nlohmann::json;

void EngineConfig::validate() const {
    if (brand_keywords.empty()) throw Error("config: brand_keywords must not be empty");
    if (context_window < 1) throw Error("config: context_window must be >= 1");
    if (min_doc_freq < 1) throw Error("config: min_doc_freq must be >= 1");
    if (induction.window < 1) throw Error("config: induction.window must be >= 1");
    if (!(induction.threshold > 0)) throw Error("config: induction.threshold must be > 0");
    classifier.validate();
    if (!(edge_threshold > 0 && edge_threshold <= 1)) throw Error("config: edge_threshold must be in (0, 1]");
    if (ica.max_iters < 1) throw Error("config: ica.max_iters must be >= 1");
    if (!(0 <= ica.conf_lo && ica.conf_lo < ica.conf_hi && ica.conf_hi <= 1))
        throw Error("config: ica.conf_lo < ica.conf_hi must both lie in [0, 1]");
    if (folds < 2) throw Error("config: folds must be >= 2");
    if (histogram_bins < 1) throw Error("config: histogram_bins must be >= 1");
}

void to_json(json& j, const EngineConfig& c) {
    j = json{
        {"brand", c.brand},
        {"brand_keywords", c.brand_keywords},
        {"context_window", c.context_window},
        {"min_doc_freq", c.min_doc_freq},
        {"occurrence_level_frequency", c.occurrence_level_frequency},
        {"induction", {{"window", c.induction.window}, {"threshold", c.induction.threshold}}},
        {"classifier",
         {{"l2_lambda", c.classifier.l2_lambda},
          {"learning_rate", c.classifier.learning_rate},
          {"epochs", c.classifier.epochs},
          {"batch_size", c.classifier.batch_size},
          {"seed", c.classifier.seed},
          {"class_weighting", c.classifier.class_weighting}}},
        {"edge_threshold", c.edge_threshold},
        {"force_edgeless", c.force_edgeless},
        {"ica",
         {{"max_iters", c.ica.max_iters},
          {"heuristic_bootstrap", c.ica.heuristic_bootstrap},
          {"conf_hi", c.ica.conf_hi},
          {"conf_lo", c.ica.conf_lo}}},
        {"threshold_policy", c.threshold_policy == ThresholdPolicy::ScaleMidpoint ? "midpoint" : "sample_mean"},
        {"folds", c.folds},
        {"seed", c.seed},
        {"histogram_bins", c.histogram_bins},
    };
}

namespace {

void check_keys(const json& j, const std::string& where, const std::vector<std::string>& known) {
    if (!j.is_object()) throw Error("config: " + (where.empty() ? std::string("document") : where) + " must be an object");
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw Error("config: unknown key '" + where + key + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

void from_json(const json& j, EngineConfig& c) {
    static const std::vector<std::string> known = {
        "brand",          "brand_keywords", "context_window", "min_doc_freq", "occurrence_level_frequency",
        "induction",      "classifier",     "edge_threshold", "force_edgeless", "ica",
        "threshold_policy", "folds",        "seed",           "histogram_bins"};
    check_keys(j, "", known);

    read(j, "brand", c.brand);
    read(j, "brand_keywords", c.brand_keywords);
    read(j, "context_window", c.context_window);
    read(j, "min_doc_freq", c.min_doc_freq);
    read(j, "occurrence_level_frequency", c.occurrence_level_frequency);
    if (auto it = j.find("induction"); it != j.end()) {
        check_keys(*it, "induction.", {"window", "threshold"});
        read(*it, "window", c.induction.window);
        read(*it, "threshold", c.induction.threshold);
    }
    if (auto it = j.find("classifier"); it != j.end()) {
        check_keys(*it, "classifier.",
                   {"l2_lambda", "learning_rate", "epochs", "batch_size", "seed", "class_weighting"});
        read(*it, "l2_lambda", c.classifier.l2_lambda);
        read(*it, "learning_rate", c.classifier.learning_rate);
        read(*it, "epochs", c.classifier.epochs);
        read(*it, "batch_size", c.classifier.batch_size);
        read(*it, "seed", c.classifier.seed);
        read(*it, "class_weighting", c.classifier.class_weighting);
    }
    read(j, "edge_threshold", c.edge_threshold);
    read(j, "force_edgeless", c.force_edgeless);
    if (auto it = j.find("ica"); it != j.end()) {
        check_keys(*it, "ica.", {"max_iters", "heuristic_bootstrap", "conf_hi", "conf_lo"});
        read(*it, "max_iters", c.ica.max_iters);
        read(*it, "heuristic_bootstrap", c.ica.heuristic_bootstrap);
        read(*it, "conf_hi", c.ica.conf_hi);
        read(*it, "conf_lo", c.ica.conf_lo);
    }
    if (auto it = j.find("threshold_policy"); it != j.end()) {
        const auto s = it->get<std::string>();
        if (s == "midpoint")
            c.threshold_policy = ThresholdPolicy::ScaleMidpoint;
        else if (s == "sample_mean")
            c.threshold_policy = ThresholdPolicy::SampleMean;
        else
            throw Error("config: threshold_policy must be 'midpoint' or 'sample_mean'");
    }
    read(j, "folds", c.folds);
    read(j, "seed", c.seed);
    read(j, "histogram_bins", c.histogram_bins);
}

EngineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    EngineConfig c;
    try {
        from_json(json::parse(in), c);
    } catch (const json::exception& e) {
        throw Error("config " + path.string() + ": " + e.what());
    }
    c.validate();
    return c;
}

void save_config(const std::filesystem::path& path, const EngineConfig& config) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << json(config).dump(2) << '\n';
}

}  // namespace attitude
