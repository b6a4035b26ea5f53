#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attitude/config.hpp"
#include "attitude/corpus.hpp"
#include "attitude/evaluation.hpp"
#include "attitude/lexicon.hpp"

namespace attitude {

// A model trained on the full labeled sample, ready for scoring.
struct ModelBundle {
    EngineConfig config;
    Lexicon general;
    FoldArtifacts artifacts;
};

// Dimensions whose labels are single-class get no model and score 0.5.
ModelBundle train_bundle(std::span<const LabeledUser> users, const Lexicon& general, const EngineConfig& config);

// Directory layout: config.json, general.tsv, vocabulary.txt, domain.tsv,
// graph.tsv and nodes/<dimension>.node for every trained dimension.
void save_bundle(const std::filesystem::path& dir, const ModelBundle& bundle);
ModelBundle load_bundle(const std::filesystem::path& dir);

struct ScoredUser {
    std::string user_id;
    std::string brand;
    PerDimension<double> scores{};       // ICA-refined
    PerDimension<double> independent{};  // f^s only
    Profile profile;
    std::vector<Tweet> relevant_tweets;  // brand mentions, newest first

    const PerDimension<double>& scores_for(EvalMode mode) const {
        return mode == EvalMode::Independent ? independent : scores;
    }
    friend bool operator==(const ScoredUser&, const ScoredUser&) = default;
};

// Keeps users who mention the brand and scores each of them.
std::vector<ScoredUser> score_cohort(std::span<const UserRecord> users, const std::string& brand,
                                     const ModelBundle& bundle);

inline constexpr int kDefaultHistogramBins = 5;

struct Histogram {
    Dimension dimension = Dimension::Favorability;
    std::vector<double> bin_edges;
    std::vector<std::size_t> counts;
};

// Equal-width bins over [0, 1]; every bin is left-closed, the last one also
// right-closed.
std::size_t bin_index(double score, int bins = kDefaultHistogramBins);
Histogram distribution(std::span<const ScoredUser> cohort, Dimension dimension, EvalMode mode = EvalMode::Ica,
                       int bins = kDefaultHistogramBins);

struct RangePredicate {
    Dimension dimension = Dimension::Favorability;
    double lo = 0;
    double hi = 1;
};

struct FilterSpec {
    std::vector<RangePredicate> predicates;

    // Throws std::invalid_argument unless 0 <= lo <= hi <= 1 and each
    // dimension appears at most once.
    void validate() const;
    bool matches(const PerDimension<double>& scores) const;
};

// "favorability:0.6:1,buy:0.6:1"; the empty string is the empty spec.
FilterSpec parse_filter_spec(std::string_view text);
std::string format_filter_spec(const FilterSpec& spec);

// Inclusive range tests, all of them; cohort order is kept.
std::vector<ScoredUser> filter_users(std::span<const ScoredUser> cohort, const FilterSpec& spec,
                                     EvalMode mode = EvalMode::Ica);

// Throws NotFoundError for an unknown id.
const ScoredUser& user_detail(std::span<const ScoredUser> cohort, std::string_view user_id);

// Scored-user snapshot: one JSON object per line.
void save_snapshot(std::ostream& out, std::span<const ScoredUser> cohort);
void save_snapshot(const std::filesystem::path& path, std::span<const ScoredUser> cohort);
std::vector<ScoredUser> load_snapshot(std::istream& in);
std::vector<ScoredUser> load_snapshot(const std::filesystem::path& path);

// The cohort a server answers from. Immutable once published.
struct Snapshot {
    std::string brand;
    std::vector<ScoredUser> users;
    int histogram_bins = kDefaultHistogramBins;
};

// Readers get a shared pointer to the current snapshot and keep it alive for
// as long as they need it; replace() swaps in a new one atomically.
class SnapshotStore {
public:
    SnapshotStore() = default;
    explicit SnapshotStore(Snapshot initial);

    std::shared_ptr<const Snapshot> current() const;
    void replace(Snapshot next);

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const Snapshot> snapshot_;
};

struct ApiResponse {
    int status = 200;
    std::string body;  // JSON
};

// Routes a GET request. `query` holds decoded parameters (filters, mode).
// Unknown paths, brands and users are 404; malformed parameters are 400.
ApiResponse handle_request(const Snapshot& snapshot, std::string_view path,
                           const std::map<std::string, std::string>& query);

// HTTP front end over handle_request.
class ApiServer {
public:
    explicit ApiServer(SnapshotStore& store);
    ~ApiServer();
    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    // Binds host:port (port 0 picks a free one) and returns the bound port.
    int bind(const std::string& host, int port);
    // Serves until stop(); call bind() first.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace attitude
