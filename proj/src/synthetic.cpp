#include "attitude/synthetic.hpp"

#include <algorithm>
#include <random>

#include "attitude/error.hpp"

namespace attitude {
namespace {

constexpr std::array<const char*, kDimensionCount> kCuePrefix = {"fav", "per", "con", "acc", "res", "buy", "rec", "pro"};

const std::vector<std::string> kPositiveWords = {"love", "great", "awesome", "amazing", "excellent",
                                                 "happy", "best", "wonderful", "nice", "perfect"};
const std::vector<std::string> kNegativeWords = {"hate", "awful", "terrible", "worst", "bad",
                                                 "horrible", "angry", "poor", "disappointing", "rude"};

constexpr std::int64_t kStart = 1388534400;  // 2014-01-01
constexpr std::int64_t kDay = 86400;

// Likert grid on either side of the midpoint.
constexpr std::array<double, 4> kPositiveValues = {3.5, 4.0, 4.5, 5.0};
constexpr std::array<double, 5> kNegativeValues = {1.0, 1.5, 2.0, 2.5, 3.0};

}  // namespace

std::string cue_word(Dimension d, bool positive, int i) {
    return std::string(kCuePrefix[index_of(d)]) + (positive ? "pos" : "neg") + std::to_string(i);
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
    if (spec.users == 0) throw std::invalid_argument("synthetic corpus needs at least one user");
    if (spec.noise_vocabulary < 1 || spec.cue_words < 1 || spec.words_per_tweet < 1 || spec.brand_tweets < 1)
        throw std::invalid_argument("synthetic corpus sizes must be positive");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto coin = [&](double p) { return unit(rng) < p; };
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    // Zipf-like background vocabulary.
    std::vector<double> zipf(static_cast<std::size_t>(spec.noise_vocabulary));
    for (std::size_t i = 0; i < zipf.size(); ++i) zipf[i] = 1.0 / static_cast<double>(i + 1);
    std::discrete_distribution<std::size_t> noise_word(zipf.begin(), zipf.end());

    SyntheticCorpus corpus;
    corpus.positive_words = kPositiveWords;
    corpus.negative_words = kNegativeWords;

    for (std::size_t u = 0; u < spec.users; ++u) {
        const std::string id = "u" + std::to_string(u);

        PerDimension<bool> label{};
        for (Dimension d : kAllDimensions) label[index_of(d)] = coin(spec.positive_rate[index_of(d)]);
        for (const auto& link : spec.links) {
            if (coin(link.agreement)) {
                const bool src = label[index_of(link.source)];
                label[index_of(link.target)] = link.inverted ? !src : src;
            }
        }

        auto noise_sentence = [&](int words) {
            std::string s;
            for (int w = 0; w < words; ++w) {
                if (!s.empty()) s += ' ';
                s += 'w' + std::to_string(noise_word(rng));
            }
            return s;
        };

        // Cue tokens for every dimension.
        std::vector<std::string> cues;
        std::vector<std::string> fav_sentiment;
        for (Dimension d : kAllDimensions) {
            std::poisson_distribution<int> count(spec.signal[index_of(d)]);
            const int n = spec.signal[index_of(d)] > 0 ? count(rng) : 0;
            for (int c = 0; c < n; ++c) {
                const bool agrees = coin(spec.fidelity[index_of(d)]);
                const bool polarity = agrees ? label[index_of(d)] : !label[index_of(d)];
                cues.push_back(cue_word(d, polarity, static_cast<int>(pick(static_cast<std::size_t>(spec.cue_words)))));
                if (d == Dimension::Favorability)
                    fav_sentiment.push_back(polarity ? kPositiveWords[pick(kPositiveWords.size())]
                                                     : kNegativeWords[pick(kNegativeWords.size())]);
                else
                    fav_sentiment.emplace_back();
            }
        }
        std::vector<std::size_t> cue_order(cues.size());
        for (std::size_t i = 0; i < cue_order.size(); ++i) cue_order[i] = i;
        std::shuffle(cue_order.begin(), cue_order.end(), rng);

        // Persistent users mention the brand over a long period.
        const bool persistent = coin(spec.fidelity[index_of(Dimension::Persistence)])
                                    ? label[index_of(Dimension::Persistence)]
                                    : !label[index_of(Dimension::Persistence)];
        const std::int64_t span_days = persistent ? 300 + static_cast<std::int64_t>(pick(400))
                                                  : 5 + static_cast<std::int64_t>(pick(60));
        const std::int64_t first = kStart + static_cast<std::int64_t>(pick(200)) * kDay;

        UserRecord user;
        user.user_id = id;
        user.profile = {{"handle", "@" + id}, {"location", u % 3 == 0 ? "Atlanta, GA" : "Minneapolis, MN"}};

        const int brand_tweets = spec.brand_tweets + static_cast<int>(pick(3));
        std::size_t next_cue = 0;
        for (int b = 0; b < brand_tweets; ++b) {
            const std::int64_t ts =
                brand_tweets == 1 ? first : first + span_days * kDay * b / (brand_tweets - 1) + static_cast<std::int64_t>(pick(3600));
            std::string text = noise_sentence(2);
            // Spread cues over the brand tweets; the last brand tweet takes the remainder.
            const std::size_t take = b + 1 == brand_tweets ? cue_order.size() - next_cue
                                                           : std::min(cue_order.size() - next_cue,
                                                                      (cue_order.size() + brand_tweets - 1) / brand_tweets);
            for (std::size_t c = 0; c < take; ++c, ++next_cue) {
                const std::size_t idx = cue_order[next_cue];
                text += ' ';
                if (!fav_sentiment[idx].empty()) text += fav_sentiment[idx] + ' ';
                text += cues[idx];
            }
            text += ' ' + spec.brand_keyword + ' ' + noise_sentence(2);
            user.tweets.push_back({id, ts, text});
        }
        for (int t = 0; t < spec.background_tweets; ++t) {
            const std::int64_t ts = kStart + static_cast<std::int64_t>(pick(800)) * kDay + static_cast<std::int64_t>(pick(kDay));
            std::string text = noise_sentence(spec.words_per_tweet);
            // Unrelated sentiment in background chatter.
            if (coin(0.3)) text += ' ' + (coin(0.5) ? kPositiveWords[pick(kPositiveWords.size())]
                                                   : kNegativeWords[pick(kNegativeWords.size())]);
            user.tweets.push_back({id, ts, text});
        }
        std::stable_sort(user.tweets.begin(), user.tweets.end(),
                         [](const Tweet& a, const Tweet& b) { return a.timestamp < b.timestamp; });

        SurveyResponse response;
        response.user_id = id;
        response.brand = spec.brand_keyword;
        for (Dimension d : kAllDimensions) {
            response.values[index_of(d)] = label[index_of(d)] ? kPositiveValues[pick(kPositiveValues.size())]
                                                              : kNegativeValues[pick(kNegativeValues.size())];
        }
        corpus.users.push_back(std::move(user));
        corpus.survey.push_back(std::move(response));
    }
    return corpus;
}

}  // namespace attitude
