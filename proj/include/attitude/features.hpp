#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "attitude/corpus.hpp"
#include "attitude/lexicon.hpp"
#include "attitude/tokenize.hpp"

namespace attitude {

// Feature ids. Unigrams live under "unigram:<token>".
namespace feature_id {
inline constexpr std::string_view kUnigramPrefix = "unigram:";
inline constexpr std::string_view kSentPos = "sent_pos";
inline constexpr std::string_view kSentNeg = "sent_neg";
inline constexpr std::string_view kCtxPos = "ctx_pos";
inline constexpr std::string_view kCtxNeg = "ctx_neg";
inline constexpr std::string_view kDomPos = "dom_pos";
inline constexpr std::string_view kDomNeg = "dom_neg";
inline constexpr std::string_view kLengthOfUse = "length_of_use";
inline constexpr std::string_view kMentionFreq = "mention_freq";

inline std::string unigram(std::string_view token) { return std::string(kUnigramPrefix) + std::string(token); }
}  // namespace feature_id

// Sparse id -> value map with no explicit zeros. Iteration is in id order.
class FeatureVector {
public:
    using Map = std::map<std::string, double, std::less<>>;

    FeatureVector() = default;

    // Setting 0 erases the entry. Non-finite values are rejected.
    void set(std::string_view id, double value);
    void add(std::string_view id, double delta);
    double get(std::string_view id) const;
    bool contains(std::string_view id) const { return values_.find(id) != values_.end(); }

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    const Map& values() const noexcept { return values_; }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

private:
    Map values_;
};

struct TokenizedTweet {
    Tokens tokens;
    std::int64_t timestamp = 0;
};

std::vector<TokenizedTweet> tokenize_user(const UserRecord& user);

struct FeatureConfig {
    std::vector<std::string> brand_keywords;
    int window = 3;
    int min_doc_freq = 2;
    std::optional<std::vector<std::string>> vocabulary;  // frozen unigram tokens, sorted
    bool occurrence_level_frequency = false;              // count keyword occurrences instead of tweets
};

// Tokens used by at least `min_doc_freq` of the given (training) users, sorted.
// A user's whole tweet history is one document.
std::vector<std::string> build_vocabulary(std::span<const UserRecord> training_users, int min_doc_freq);

// Per-family extractors. Each has a tokenized overload used by
// build_feature_vector so a user's tweets are tokenized once.
// Keys are feature ids ("unigram:<token>").
std::map<std::string, long> unigram_features(const UserRecord& user, std::span<const std::string> vocabulary);

struct PolarityCounts {
    long positive = 0;
    long negative = 0;
    friend bool operator==(const PolarityCounts&, const PolarityCounts&) = default;
};

PolarityCounts lexicon_counts(const UserRecord& user, const Lexicon& lex);

// Polarity words within `window` tokens of a brand keyword. Each word
// occurrence counts at most once even when near several mentions.
PolarityCounts context_lexicon_counts(const UserRecord& user, const Lexicon& lex,
                                      const std::vector<std::string>& brand_keywords, int window);
PolarityCounts context_lexicon_counts(const UserRecord& user, const DomainLexicon& lex,
                                      const std::vector<std::string>& brand_keywords, int window);

// Seconds between the newest and oldest brand-mentioning tweet; 0 with fewer
// than two mentions.
double length_of_use(const UserRecord& user, const std::vector<std::string>& brand_keywords);

// Number of tweets mentioning the brand (or keyword occurrences when
// occurrence_level is set).
long mention_frequency(const UserRecord& user, const std::vector<std::string>& brand_keywords,
                       bool occurrence_level = false);

inline constexpr double kSecondsPerDay = 86400.0;

// All six families under their namespaces. length_of_use is in days.
FeatureVector build_feature_vector(const UserRecord& user, const FeatureConfig& config, const Lexicon& general,
                                   const DomainLexicon& domain);

// `user_id<TAB>feature_id:value,...` with ids in sorted order.
void write_feature_line(std::ostream& out, std::string_view user_id, const FeatureVector& v);
std::pair<std::string, FeatureVector> parse_feature_line(std::string_view line);

}  // namespace attitude
