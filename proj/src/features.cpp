#include "attitude/features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "attitude/detail/numeric_text.hpp"
#include "attitude/error.hpp"

namespace attitude {

void FeatureVector::set(std::string_view id, double value) {
    if (!std::isfinite(value)) throw Error("non-finite value for feature '" + std::string(id) + "'");
    if (value == 0.0) {
        if (auto it = values_.find(id); it != values_.end()) values_.erase(it);
        return;
    }
    if (auto it = values_.find(id); it != values_.end())
        it->second = value;
    else
        values_.emplace(std::string(id), value);
}

void FeatureVector::add(std::string_view id, double delta) { set(id, get(id) + delta); }

double FeatureVector::get(std::string_view id) const {
    auto it = values_.find(id);
    return it == values_.end() ? 0.0 : it->second;
}

std::vector<TokenizedTweet> tokenize_user(const UserRecord& user) {
    std::vector<TokenizedTweet> out;
    out.reserve(user.tweets.size());
    for (const auto& t : user.tweets) out.push_back({tokenize(t.text), t.timestamp});
    return out;
}

namespace {

template <typename Lex>
PolarityCounts count_all(std::span<const TokenizedTweet> tweets, const Lex& lex) {
    PolarityCounts c;
    for (const auto& tw : tweets) {
        for (const auto& tok : tw.tokens) {
            if (auto p = lex.polarity(tok)) (*p == Polarity::Positive ? c.positive : c.negative) += 1;
        }
    }
    return c;
}

template <typename Lex>
PolarityCounts count_near_brand(std::span<const TokenizedTweet> tweets, const Lex& lex, const KeywordSet& keywords,
                                int window) {
    if (window < 1) throw std::invalid_argument("context window must be >= 1");
    const auto w = static_cast<std::size_t>(window);
    PolarityCounts c;
    for (const auto& tw : tweets) {
        auto anchors = keywords.positions(tw.tokens);
        if (anchors.empty()) continue;
        for (std::size_t i = 0; i < tw.tokens.size(); ++i) {
            if (keywords.contains(tw.tokens[i])) continue;
            auto p = lex.polarity(tw.tokens[i]);
            if (!p) continue;
            bool near = std::any_of(anchors.begin(), anchors.end(),
                                    [&](std::size_t a) { return (i > a ? i - a : a - i) <= w; });
            if (near) (*p == Polarity::Positive ? c.positive : c.negative) += 1;
        }
    }
    return c;
}

double span_of_mentions(std::span<const TokenizedTweet> tweets, const KeywordSet& keywords) {
    std::int64_t lo = 0, hi = 0;
    std::size_t n = 0;
    for (const auto& tw : tweets) {
        if (!keywords.mentioned_in(tw.tokens)) continue;
        if (n++ == 0) {
            lo = hi = tw.timestamp;
        } else {
            lo = std::min(lo, tw.timestamp);
            hi = std::max(hi, tw.timestamp);
        }
    }
    return n < 2 ? 0.0 : static_cast<double>(hi - lo);
}

long count_mentions(std::span<const TokenizedTweet> tweets, const KeywordSet& keywords, bool occurrence_level) {
    long n = 0;
    for (const auto& tw : tweets) {
        if (occurrence_level)
            n += static_cast<long>(keywords.positions(tw.tokens).size());
        else
            n += keywords.mentioned_in(tw.tokens) ? 1 : 0;
    }
    return n;
}

std::map<std::string, long> count_unigrams(std::span<const TokenizedTweet> tweets,
                                           std::span<const std::string> vocabulary) {
    std::map<std::string, long> out;
    for (const auto& tw : tweets) {
        for (const auto& tok : tw.tokens) {
            if (std::binary_search(vocabulary.begin(), vocabulary.end(), tok)) out[tok] += 1;
        }
    }
    return out;
}

void require_sorted(std::span<const std::string> vocabulary) {
    if (!std::is_sorted(vocabulary.begin(), vocabulary.end()))
        throw std::invalid_argument("vocabulary must be sorted");
}

}  // namespace

std::vector<std::string> build_vocabulary(std::span<const UserRecord> training_users, int min_doc_freq) {
    if (min_doc_freq < 1) throw std::invalid_argument("min_doc_freq must be >= 1");
    std::map<std::string, int> doc_freq;
    for (const auto& user : training_users) {
        std::set<std::string> seen;
        for (const auto& t : user.tweets)
            for (auto& tok : tokenize(t.text)) seen.insert(std::move(tok));
        for (const auto& tok : seen) doc_freq[tok] += 1;
    }
    std::vector<std::string> vocab;
    for (const auto& [tok, df] : doc_freq)
        if (df >= min_doc_freq) vocab.push_back(tok);
    return vocab;
}

std::map<std::string, long> unigram_features(const UserRecord& user, std::span<const std::string> vocabulary) {
    require_sorted(vocabulary);
    std::map<std::string, long> out;
    for (const auto& [tok, n] : count_unigrams(tokenize_user(user), vocabulary)) out.emplace(feature_id::unigram(tok), n);
    return out;
}

PolarityCounts lexicon_counts(const UserRecord& user, const Lexicon& lex) { return count_all(tokenize_user(user), lex); }

PolarityCounts context_lexicon_counts(const UserRecord& user, const Lexicon& lex,
                                      const std::vector<std::string>& brand_keywords, int window) {
    return count_near_brand(tokenize_user(user), lex, KeywordSet(brand_keywords), window);
}

PolarityCounts context_lexicon_counts(const UserRecord& user, const DomainLexicon& lex,
                                      const std::vector<std::string>& brand_keywords, int window) {
    return count_near_brand(tokenize_user(user), lex, KeywordSet(brand_keywords), window);
}

double length_of_use(const UserRecord& user, const std::vector<std::string>& brand_keywords) {
    return span_of_mentions(tokenize_user(user), KeywordSet(brand_keywords));
}

long mention_frequency(const UserRecord& user, const std::vector<std::string>& brand_keywords, bool occurrence_level) {
    return count_mentions(tokenize_user(user), KeywordSet(brand_keywords), occurrence_level);
}

FeatureVector build_feature_vector(const UserRecord& user, const FeatureConfig& config, const Lexicon& general,
                                   const DomainLexicon& domain) {
    if (!config.vocabulary) throw std::invalid_argument("build_feature_vector: vocabulary is not frozen");
    require_sorted(*config.vocabulary);
    const KeywordSet keywords(config.brand_keywords);
    const auto tweets = tokenize_user(user);

    FeatureVector v;
    for (const auto& [tok, n] : count_unigrams(tweets, *config.vocabulary))
        v.set(feature_id::unigram(tok), static_cast<double>(n));

    auto sent = count_all(tweets, general);
    v.set(feature_id::kSentPos, static_cast<double>(sent.positive));
    v.set(feature_id::kSentNeg, static_cast<double>(sent.negative));

    if (!keywords.empty()) {
        auto ctx = count_near_brand(tweets, general, keywords, config.window);
        v.set(feature_id::kCtxPos, static_cast<double>(ctx.positive));
        v.set(feature_id::kCtxNeg, static_cast<double>(ctx.negative));

        auto dom = count_near_brand(tweets, domain, keywords, config.window);
        v.set(feature_id::kDomPos, static_cast<double>(dom.positive));
        v.set(feature_id::kDomNeg, static_cast<double>(dom.negative));

        v.set(feature_id::kLengthOfUse, span_of_mentions(tweets, keywords) / kSecondsPerDay);
        v.set(feature_id::kMentionFreq,
              static_cast<double>(count_mentions(tweets, keywords, config.occurrence_level_frequency)));
    }
    return v;
}

void write_feature_line(std::ostream& out, std::string_view user_id, const FeatureVector& v) {
    out << user_id << '\t';
    bool first = true;
    for (const auto& [id, value] : v.values()) {
        if (!first) out << ',';
        first = false;
        out << id << ':' << detail::format_double(value);
    }
    out << '\n';
}

std::pair<std::string, FeatureVector> parse_feature_line(std::string_view line) {
    if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError("feature line has no tab");
    std::pair<std::string, FeatureVector> out{std::string(line.substr(0, tab)), {}};
    auto rest = line.substr(tab + 1);
    while (!rest.empty()) {
        auto comma = rest.find(',');
        auto item = rest.substr(0, comma);
        auto colon = item.rfind(':');
        if (colon == std::string_view::npos) throw ParseError("feature item '" + std::string(item) + "' has no value");
        auto value = detail::parse_double(item.substr(colon + 1));
        if (!value) throw ParseError("bad feature value in '" + std::string(item) + "'");
        out.second.set(item.substr(0, colon), *value);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

}  // namespace attitude
