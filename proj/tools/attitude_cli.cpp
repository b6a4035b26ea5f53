// Command-line front end: corpus preparation, training, evaluation, scoring
// and the query server.

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "attitude/config.hpp"
#include "attitude/corpus.hpp"
#include "attitude/error.hpp"
#include "attitude/evaluation.hpp"
#include "attitude/features.hpp"
#include "attitude/lexicon.hpp"
#include "attitude/metrics.hpp"
#include "attitude/service.hpp"
#include "attitude/synthetic.hpp"

namespace fs = std::filesystem;
using namespace attitude;

namespace {

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;

    EngineConfig config() const {
        EngineConfig c = config_path.empty() ? EngineConfig{} : load_config(config_path);
        if (seed) {
            c.seed = *seed;
            c.classifier.seed = *seed;
        }
        c.validate();
        return c;
    }
};

struct LexiconPaths {
    std::string positive;
    std::string negative;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--positive", positive, "Positive word list, one word per line")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--negative", negative, "Negative word list, one word per line")
            ->required()
            ->check(CLI::ExistingFile);
    }
    Lexicon load() const { return load_lexicon(positive, negative); }
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

std::vector<LabeledUser> load_labeled(const std::string& users_path, const std::string& survey_path,
                                      const EngineConfig& config) {
    const auto users = load_users(fs::path(users_path));
    const auto survey = load_survey(fs::path(survey_path));
    auto labeled = label_users(users, survey, config.threshold_policy);
    if (labeled.empty()) throw Error("no user in " + users_path + " has a survey response");
    return labeled;
}

ApiServer* g_server = nullptr;

extern "C" void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Attitude and action-intention prediction for brand-mention corpora"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "JSON config; absent keys keep their defaults")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "Overrides the fold and classifier seeds");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Validate a raw corpus and keep users who mention the brand");
    std::string ingest_in, ingest_out;
    bool keep_all = false;
    ingest->add_option("--input", ingest_in, "Raw corpus, one tweet per JSON line")->required()->check(CLI::ExistingFile);
    ingest->add_option("--output", ingest_out, "Normalized corpus")->required();
    ingest->add_flag("--keep-all", keep_all, "Keep users without brand mentions");

    // features
    auto* features = app.add_subcommand("features", "Write per-user feature vectors");
    std::string feat_users, feat_out;
    LexiconPaths feat_lex;
    features->add_option("--users", feat_users, "Corpus")->required()->check(CLI::ExistingFile);
    feat_lex.add_to(features);
    features->add_option("--output", feat_out, "Feature file (default stdout)");

    // induce-lexicon
    auto* induce = app.add_subcommand("induce-lexicon", "Induce the brand's domain sentiment lexicon");
    std::string induce_users, induce_out;
    LexiconPaths induce_lex;
    induce->add_option("--users", induce_users, "Corpus")->required()->check(CLI::ExistingFile);
    induce_lex.add_to(induce);
    induce->add_option("--output", induce_out, "Domain lexicon file (default stdout)");

    // stats
    auto* stats = app.add_subcommand("stats", "Descriptive statistics and correlations of survey responses");
    std::string stats_survey;
    stats->add_option("--survey", stats_survey, "Survey CSV")->required()->check(CLI::ExistingFile);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a model bundle on all labeled users");
    std::string train_users, train_survey, train_out;
    LexiconPaths train_lex;
    train_cmd->add_option("--users", train_users, "Corpus")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--survey", train_survey, "Survey CSV")->required()->check(CLI::ExistingFile);
    train_lex.add_to(train_cmd);
    train_cmd->add_option("--output", train_out, "Bundle directory")->required();

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "k-fold cross-validation");
    std::string eval_users, eval_survey, eval_mode = "ica", eval_format = "table", eval_out;
    LexiconPaths eval_lex;
    eval->add_option("--users", eval_users, "Corpus")->required()->check(CLI::ExistingFile);
    eval->add_option("--survey", eval_survey, "Survey CSV")->required()->check(CLI::ExistingFile);
    eval_lex.add_to(eval);
    eval->add_option("--mode", eval_mode, "independent, ica, or both")
        ->check(CLI::IsMember({"independent", "ica", "both"}));
    eval->add_option("--format", eval_format, "table or jsonl")->check(CLI::IsMember({"table", "jsonl"}));
    eval->add_option("--output", eval_out, "Report file (default stdout)");

    // score
    auto* score = app.add_subcommand("score", "Score a cohort and write a snapshot");
    std::string score_users, score_model, score_brand, score_out;
    score->add_option("--users", score_users, "Corpus")->required()->check(CLI::ExistingFile);
    score->add_option("--model", score_model, "Bundle directory")->required()->check(CLI::ExistingDirectory);
    score->add_option("--brand", score_brand, "Brand name (default: the bundle's)");
    score->add_option("--output", score_out, "Snapshot file")->required();

    // serve
    auto* serve = app.add_subcommand("serve", "Serve a scored snapshot over HTTP");
    std::string serve_snapshot, serve_host = "127.0.0.1", serve_brand;
    int serve_port = 8080;
    serve->add_option("--snapshot", serve_snapshot, "Snapshot from `score`")->required()->check(CLI::ExistingFile);
    serve->add_option("--host", serve_host, "Bind address");
    serve->add_option("--port", serve_port, "Port")->check(CLI::Range(1, 65535));
    serve->add_option("--brand", serve_brand, "Brand name (default: taken from the snapshot)");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic demo corpus with planted signal");
    std::string synth_dir;
    std::size_t synth_users = 1000;
    synth->add_option("--output-dir", synth_dir, "Directory for users.jsonl, survey.csv and word lists")->required();
    synth->add_option("--users", synth_users, "Number of users")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        const EngineConfig config = g.config();

        if (*ingest) {
            auto users = load_users(fs::path(ingest_in));
            const std::size_t total = users.size();
            if (!keep_all) users = filter_brand_mentions(users, config.brand_keywords);
            save_users(fs::path(ingest_out), users);
            std::cerr << "ingest: " << total << " users read, " << users.size() << " written\n";
        } else if (*features) {
            const auto users = load_users(fs::path(feat_users));
            const Lexicon general = feat_lex.load();
            FeatureConfig fc;
            fc.brand_keywords = config.brand_keywords;
            fc.window = config.context_window;
            fc.min_doc_freq = config.min_doc_freq;
            fc.occurrence_level_frequency = config.occurrence_level_frequency;
            fc.vocabulary = build_vocabulary(users, config.min_doc_freq);
            const DomainLexicon domain =
                induce_domain_lexicon(users, config.brand_keywords, general, config.induction, config.brand);
            std::ostringstream out;
            for (const auto& u : users) write_feature_line(out, u.user_id, build_feature_vector(u, fc, general, domain));
            write_text(feat_out, out.str());
        } else if (*induce) {
            const auto users = load_users(fs::path(induce_users));
            const DomainLexicon domain =
                induce_domain_lexicon(users, config.brand_keywords, induce_lex.load(), config.induction, config.brand);
            std::ostringstream out;
            save_domain_lexicon(out, domain);
            write_text(induce_out, out.str());
        } else if (*stats) {
            const auto survey = load_survey(fs::path(stats_survey));
            std::vector<PerDimension<double>> rows;
            for (const auto& r : survey) rows.push_back(r.values);
            std::cout << format_descriptive_table(describe(rows));
        } else if (*train_cmd) {
            const auto labeled = load_labeled(train_users, train_survey, config);
            const ModelBundle bundle = train_bundle(labeled, train_lex.load(), config);
            save_bundle(train_out, bundle);
            std::cerr << "train: " << labeled.size() << " users, " << bundle.artifacts.models.size()
                      << " dimensions, " << bundle.artifacts.graph.edges().size() << " dependency edges\n";
        } else if (*eval) {
            const auto labeled = load_labeled(eval_users, eval_survey, config);
            const Lexicon general = eval_lex.load();
            std::string text;
            auto render = [&](const MetricsReport& r) {
                return eval_format == "jsonl" ? format_report_jsonl(r) : format_report_table(r);
            };
            if (eval_mode == "both") {
                const auto ind = evaluate(labeled, general, config, EvalMode::Independent);
                const auto ica = evaluate(labeled, general, config, EvalMode::Ica);
                text = render(ind) + (eval_format == "table" ? "\n" : "") + render(ica);
                if (eval_format == "table") text += "\n" + format_comparison(ind, ica);
            } else {
                text = render(evaluate(labeled, general, config, *parse_eval_mode(eval_mode)));
            }
            write_text(eval_out, text);
        } else if (*score) {
            const ModelBundle bundle = load_bundle(score_model);
            const auto users = load_users(fs::path(score_users));
            const auto scored = score_cohort(users, score_brand.empty() ? bundle.config.brand : score_brand, bundle);
            save_snapshot(fs::path(score_out), scored);
            std::cerr << "score: " << scored.size() << " of " << users.size() << " users mention the brand\n";
        } else if (*serve) {
            Snapshot snap;
            snap.users = load_snapshot(fs::path(serve_snapshot));
            snap.histogram_bins = config.histogram_bins;
            if (!serve_brand.empty())
                snap.brand = serve_brand;
            else if (!snap.users.empty())
                snap.brand = snap.users.front().brand;
            else
                snap.brand = config.brand;
            SnapshotStore store(std::move(snap));
            ApiServer server(store);
            const int port = server.bind(serve_host, serve_port);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "serving " << store.current()->users.size() << " users for brand '"
                      << store.current()->brand << "' on http://" << serve_host << ':' << port << "/api/v1\n";
            server.listen();
            g_server = nullptr;
        } else if (*synth) {
            SyntheticSpec spec;
            spec.users = synth_users;
            if (g.seed) spec.seed = *g.seed;
            spec.brand_keyword = config.brand_keywords.front();
            // Correlated intentions so the dependency graph has something to find.
            spec.links = {{Dimension::Favorability, Dimension::Buy, 0.7, false},
                          {Dimension::Favorability, Dimension::Recommend, 0.7, false},
                          {Dimension::Favorability, Dimension::Prohibit, 0.6, true}};
            const SyntheticCorpus corpus = generate_synthetic(spec);
            fs::create_directories(synth_dir);
            const fs::path dir(synth_dir);
            save_users(dir / "users.jsonl", corpus.users);
            {
                std::ofstream out(dir / "survey.csv", std::ios::binary | std::ios::trunc);
                save_survey(out, corpus.survey);
            }
            for (const auto& [name, words] :
                 {std::pair{"positive.txt", &corpus.positive_words}, std::pair{"negative.txt", &corpus.negative_words}}) {
                std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
                for (const auto& w : *words) out << w << '\n';
            }
            std::cerr << "synth: " << corpus.users.size() << " users written to " << synth_dir << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
