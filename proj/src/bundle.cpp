#include <algorithm>
#include <fstream>

#include "attitude/diagnostics.hpp"
#include "attitude/error.hpp"
#include "attitude/service.hpp"

namespace attitude {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return in;
}

FeatureConfig feature_config(const EngineConfig& config) {
    FeatureConfig f;
    f.brand_keywords = config.brand_keywords;
    f.window = config.context_window;
    f.min_doc_freq = config.min_doc_freq;
    f.occurrence_level_frequency = config.occurrence_level_frequency;
    return f;
}

}  // namespace

ModelBundle train_bundle(std::span<const LabeledUser> users, const Lexicon& general, const EngineConfig& config) {
    config.validate();
    if (users.empty()) throw Error("train_bundle: no labeled users");

    PerDimension<bool> active;
    for (Dimension d : kAllDimensions) {
        bool pos = false, neg = false;
        for (const auto& u : users) (u.labels[index_of(d)] == Label::Positive ? pos : neg) = true;
        active[index_of(d)] = pos && neg;
        if (!active[index_of(d)])
            warn("dimension " + std::string(to_string(d)) + " has a single class; it will score 0.5");
    }

    ModelBundle b;
    b.config = config;
    b.general = general;
    b.artifacts = train_fold(users, general, config, EvalMode::Ica, active);
    return b;
}

void save_bundle(const fs::path& dir, const ModelBundle& bundle) {
    fs::create_directories(dir / "nodes");
    save_config(dir / "config.json", bundle.config);
    {
        auto out = open_out(dir / "general.tsv");
        save_lexicon(out, bundle.general);
    }
    {
        auto out = open_out(dir / "vocabulary.txt");
        for (const auto& w : *bundle.artifacts.features.vocabulary) out << w << '\n';
    }
    save_domain_lexicon(dir / "domain.tsv", bundle.artifacts.domain);
    {
        auto out = open_out(dir / "graph.tsv");
        save_graph(out, bundle.artifacts.graph);
    }
    // Stale node files from an earlier bundle would resurrect dropped dimensions.
    for (Dimension d : kAllDimensions) fs::remove(dir / "nodes" / (std::string(to_string(d)) + ".node"));
    for (const auto& [d, node] : bundle.artifacts.models) {
        auto out = open_out(dir / "nodes" / (std::string(to_string(d)) + ".node"));
        save_node_model(out, node);
    }
}

ModelBundle load_bundle(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error("model bundle not found: " + dir.string());
    ModelBundle b;
    b.config = load_config(dir / "config.json");
    {
        auto in = open_in(dir / "general.tsv");
        b.general = load_lexicon_table(in);
    }
    b.artifacts.features = feature_config(b.config);
    {
        auto in = open_in(dir / "vocabulary.txt");
        std::vector<std::string> vocab;
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) vocab.push_back(line);
        if (!std::is_sorted(vocab.begin(), vocab.end()))
            throw Error(dir.string() + "/vocabulary.txt: words are not sorted");
        b.artifacts.features.vocabulary = std::move(vocab);
    }
    b.artifacts.domain = load_domain_lexicon(dir / "domain.tsv");
    {
        auto in = open_in(dir / "graph.tsv");
        b.artifacts.graph = load_graph(in);
    }
    for (Dimension d : kAllDimensions) {
        const fs::path p = dir / "nodes" / (std::string(to_string(d)) + ".node");
        if (!fs::exists(p)) continue;
        auto in = open_in(p);
        NodeModel node = load_node_model(in);
        if (node.dimension != d) throw Error(p.string() + ": holds the model for another dimension");
        b.artifacts.models.emplace(d, std::move(node));
    }
    return b;
}

}  // namespace attitude
