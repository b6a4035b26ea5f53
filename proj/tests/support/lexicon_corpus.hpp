// A 50-tweet corpus for domain-lexicon induction with hand-counted expected
// output (general lexicon {good, great, love | bad, awful, hate}, keyword
// @delta, window 3).
//
// Per-group tallies, tweet count in brackets:
//   A [5] "great wifi on @delta"            +   wifi 5, on 5
//   B [4] "@delta legroom is awful"         -   legroom 4, is 4
//   C [3] "love love @delta snacks but bad" +   snacks 3, but 3
//   D [2] "good @delta snacks bad"          balanced, ignored
//   E [6] "bad @delta delays delays hate"   -   delays 12
//   F [3] "wifi is slow on @delta today awful"
//                                           -   is 3, slow 3, on 3, today 3 (wifi is 4 away)
//   G [5] "great wifi great"                no mention, ignored
//   H [4] "@delta wifi"                     no lexicon words, ignored
//   I [3] "@delta crew great @delta"        +   crew 3 (once per occurrence)
//   J [2] "great @delta seats"              +   seats 2
//   K [5] "on time @delta good good"        +   on 5, time 5
//   L [4] "x1 x2 x3 x4 @delta bad"          -   x2 4, x3 4, x4 4 (x1 is 4 away)
//   M [4] "@DELTA Legroom!! awful awful"    -   legroom 4
//
// Net (pos - neg): wifi +5, on +10-3=+7, legroom -8, is -7, snacks +3, but +3,
// delays -12, slow -3, today -3, crew +3, seats +2, time +5, x2/x3/x4 -4.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "attitude/corpus.hpp"
#include "attitude/lexicon.hpp"

namespace oracle {

inline std::vector<attitude::UserRecord> lexicon_corpus() {
    const std::vector<std::pair<int, std::string>> groups = {
        {5, "great wifi on @delta"},
        {4, "@delta legroom is awful"},
        {3, "love love @delta snacks but bad"},
        {2, "good @delta snacks bad"},
        {6, "bad @delta delays delays hate"},
        {3, "wifi is slow on @delta today awful"},
        {5, "great wifi great"},
        {4, "@delta wifi"},
        {3, "@delta crew great @delta"},
        {2, "great @delta seats"},
        {5, "on time @delta good good"},
        {4, "x1 x2 x3 x4 @delta bad"},
        {4, "@DELTA Legroom!! awful awful"},
    };
    // Spread the tweets over ten users round-robin.
    std::vector<attitude::UserRecord> users(10);
    for (int i = 0; i < 10; ++i) users[i].user_id = "L" + std::to_string(i);
    int n = 0;
    for (const auto& [count, text] : groups) {
        for (int c = 0; c < count; ++c, ++n) {
            auto& u = users[n % 10];
            u.tweets.push_back({u.user_id, static_cast<std::int64_t>(1000 + n), text});
        }
    }
    return users;
}

inline attitude::Lexicon lexicon_corpus_general() { return attitude::Lexicon({"good", "great", "love"}, {"bad", "awful", "hate"}); }

inline constexpr int kLexiconCorpusTweets = 50;

// Expected entries at a threshold: word -> (polarity, score).
inline std::map<std::string, std::pair<attitude::Polarity, double>> lexicon_corpus_expected(double threshold) {
    using attitude::Polarity;
    const std::map<std::string, double> net = {
        {"wifi", 5},    {"on", 7},      {"legroom", -8}, {"is", -7},   {"snacks", 3},
        {"but", 3},     {"delays", -12}, {"slow", -3},   {"today", -3}, {"crew", 3},
        {"seats", 2},   {"time", 5},    {"x2", -4},      {"x3", -4},    {"x4", -4},
    };
    std::map<std::string, std::pair<Polarity, double>> out;
    for (const auto& [w, d] : net) {
        if (d >= threshold) out[w] = {Polarity::Positive, d};
        if (-d >= threshold) out[w] = {Polarity::Negative, -d};
    }
    return out;
}

}  // namespace oracle
