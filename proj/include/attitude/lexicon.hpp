#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "attitude/corpus.hpp"

namespace attitude {

enum class Polarity { Positive, Negative };

std::string_view to_string(Polarity p) noexcept;

// General-purpose polarity word list.
class Lexicon {
public:
    Lexicon() = default;
    // Words are lowercased and trimmed. A word given both polarities is
    // dropped with a warning.
    Lexicon(const std::vector<std::string>& positive, const std::vector<std::string>& negative);

    std::optional<Polarity> polarity(std::string_view word) const;
    bool contains(std::string_view word) const { return entries_.find(word) != entries_.end(); }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::map<std::string, Polarity, std::less<>>& entries() const noexcept { return entries_; }

private:
    std::map<std::string, Polarity, std::less<>> entries_;
};

// One word per line; ';' starts a comment line (the public opinion-lexicon layout).
std::vector<std::string> read_word_list(std::istream& in);
Lexicon load_lexicon(const std::filesystem::path& positive_path, const std::filesystem::path& negative_path);

struct DomainEntry {
    Polarity polarity = Polarity::Positive;
    double score = 0;  // |pos_score - neg_score|, always > 0

    friend bool operator==(const DomainEntry&, const DomainEntry&) = default;
};

// Brand-specific polarity words, disjoint from the general lexicon they were
// induced against.
struct DomainLexicon {
    std::map<std::string, DomainEntry, std::less<>> entries;
    std::string source_brand;
    double threshold_used = 0;
    int window_used = 0;

    std::optional<Polarity> polarity(std::string_view word) const;
    friend bool operator==(const DomainLexicon&, const DomainLexicon&) = default;
};

struct InductionParams {
    int window = 3;          // tokens on either side of a brand mention
    double threshold = 3.0;  // minimum |pos_score - neg_score|
};

// Raw co-occurrence counts behind induce_domain_lexicon, exposed for audits.
struct CooccurrenceCounts {
    std::map<std::string, std::pair<long, long>, std::less<>> counts;  // word -> (pos_score, neg_score)
};

// For every brand-mentioning tweet, the general lexicon decides the tweet's
// context (more positive than negative words: positive; the reverse:
// negative; otherwise ignored). Each occurrence of a word within `window`
// tokens of a brand keyword adds one to that context's score. Words in the
// general lexicon and the keywords themselves are never counted.
CooccurrenceCounts count_brand_cooccurrences(std::span<const UserRecord> users,
                                             const std::vector<std::string>& brand_keywords, const Lexicon& general,
                                             int window);

DomainLexicon induce_domain_lexicon(std::span<const UserRecord> training_users,
                                    const std::vector<std::string>& brand_keywords, const Lexicon& general,
                                    const InductionParams& params = {}, std::string source_brand = {});

// `word<TAB>polarity<TAB>score` lines; ';' lines carry brand/threshold/window.
void save_domain_lexicon(std::ostream& out, const DomainLexicon& lex);
void save_domain_lexicon(const std::filesystem::path& path, const DomainLexicon& lex);
DomainLexicon load_domain_lexicon(std::istream& in);
DomainLexicon load_domain_lexicon(const std::filesystem::path& path);

// Word-list form of a lexicon for bundling: `word<TAB>positive|negative`.
void save_lexicon(std::ostream& out, const Lexicon& lex);
Lexicon load_lexicon_table(std::istream& in);

}  // namespace attitude
