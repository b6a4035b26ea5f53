#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attitude/corpus.hpp"
#include "attitude/lexicon.hpp"

namespace attitude {

// Planted-signal corpus generator for recovery tests and demos.
//
// Each dimension owns a pair of cue vocabularies ("favpos0".., "favneg0"..).
// A user receives Poisson(signal[d]) cue tokens for dimension d, drawn from
// the list matching the user's label with probability fidelity[d] and from the
// opposite list otherwise. Favorability cues additionally carry a general
// lexicon word next to the brand keyword, so the sentiment, context and
// domain features see the same signal. Persistence also shapes the span of
// brand mentions.
struct LabelLink {
    Dimension source;
    Dimension target;
    double agreement = 0.9;  // P(target copies source); the rest keeps its own draw
    bool inverted = false;   // copy the negated source label
};

struct SyntheticSpec {
    std::size_t users = 1000;
    std::uint64_t seed = 7;
    std::string brand_keyword = "@delta";
    int background_tweets = 12;
    int brand_tweets = 3;
    int words_per_tweet = 8;
    int noise_vocabulary = 600;
    int cue_words = 8;  // per polarity per dimension
    PerDimension<double> signal = {6.0, 2.5, 2.5, 2.0, 2.5, 2.5, 2.5, 2.5};
    PerDimension<double> fidelity = {0.9, 0.8, 0.8, 0.78, 0.8, 0.8, 0.8, 0.8};
    PerDimension<double> positive_rate = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
    std::vector<LabelLink> links;
};

struct SyntheticCorpus {
    std::vector<UserRecord> users;
    std::vector<SurveyResponse> survey;
    std::vector<std::string> positive_words;
    std::vector<std::string> negative_words;

    Lexicon lexicon() const { return Lexicon(positive_words, negative_words); }
    std::vector<LabeledUser> labeled() const { return label_users(users, survey); }
};

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

// Cue token i for a dimension and polarity, e.g. cue_word(Buy, true, 3) == "buypos3".
std::string cue_word(Dimension d, bool positive, int i);

}  // namespace attitude
