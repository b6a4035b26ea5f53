#include <doctest.h>

#include <sstream>

#include "attitude/corpus.hpp"
#include "attitude/diagnostics.hpp"
#include "attitude/error.hpp"
#include "attitude/tokenize.hpp"
#include "support/oracles.hpp"

using namespace attitude;
using oracle::make_user;

namespace {

std::vector<UserRecord> parse(const std::string& text) {
    std::istringstream in(text);
    return load_users(in);
}

std::string tweet_line(const std::string& user, std::int64_t ts, const std::string& text) {
    return R"({"user_id":")" + user + R"(","timestamp":)" + std::to_string(ts) + R"(,"text":")" + text + "\"}\n";
}

}  // namespace

TEST_SUITE("corpus") {
    TEST_CASE("empty file yields no users") { CHECK(parse("").empty()); }

    TEST_CASE("tweets are sorted ascending") {
        const auto users = parse(tweet_line("a", 5, "later") + tweet_line("a", 3, "earlier"));
        REQUIRE(users.size() == 1);
        REQUIRE(users[0].tweets.size() == 2);
        CHECK(users[0].tweets[0].timestamp == 3);
        CHECK(users[0].tweets[1].timestamp == 5);
    }

    TEST_CASE("at most 3200 tweets kept, oldest dropped") {
        std::string text;
        for (int t = 0; t <= 3200; ++t) text += tweet_line("a", t, "x");
        const auto users = parse(text);
        REQUIRE(users.size() == 1);
        CHECK(users[0].tweets.size() == kMaxTweetsPerUser);
        CHECK(users[0].tweets.front().timestamp == 1);
        CHECK(users[0].tweets.back().timestamp == 3200);
    }

    TEST_CASE("duplicate triples are removed silently") {
        ScopedWarningCapture warnings;
        const auto users = parse(tweet_line("a", 1, "hi") + tweet_line("a", 1, "hi") + tweet_line("a", 1, "ho"));
        REQUIRE(users.size() == 1);
        CHECK(users[0].tweets.size() == 2);
        CHECK(warnings.messages().empty());
    }

    TEST_CASE("users come back in first-appearance order") {
        const auto users = parse(tweet_line("b", 1, "x") + tweet_line("a", 1, "y") + tweet_line("b", 2, "z"));
        REQUIRE(users.size() == 2);
        CHECK(users[0].user_id == "b");
        CHECK(users[1].user_id == "a");
    }

    TEST_CASE("malformed lines name the line number") {
        const std::string good = tweet_line("a", 1, "x");
        auto expect_line = [](const std::string& text, std::size_t line) {
            try {
                parse(text);
                FAIL("expected a parse error");
            } catch (const ParseError& e) {
                CHECK(e.line() == line);
            }
        };
        expect_line(good + "{not json}\n", 2);
        expect_line(good + good + R"({"user_id":"a","text":"no timestamp"})" "\n", 3);
        expect_line(R"({"user_id":"a","timestamp":-1,"text":"x"})" "\n", 1);
        expect_line(R"({"user_id":"a","timestamp":1.5,"text":"x"})" "\n", 1);
        expect_line(R"({"user_id":"","timestamp":1,"text":"x"})" "\n", 1);
        expect_line(R"({"user_id":"a","timestamp":1,"text":null})" "\n", 1);
        expect_line("[1,2]\n", 1);
    }

    TEST_CASE("byte-order mark is rejected") {
        CHECK_THROWS_AS(parse("\xEF\xBB\xBF" + tweet_line("a", 1, "x")), ParseError);
    }

    TEST_CASE("blank lines are skipped") { CHECK(parse("\n" + tweet_line("a", 1, "x") + "\n\n").size() == 1); }

    TEST_CASE("profile fields from object or top level") {
        const auto users = parse(R"({"user_id":"a","timestamp":1,"text":"x","profile":{"handle":"@a","bio":"hi"}})"
                                 "\n"
                                 R"({"user_id":"b","timestamp":1,"text":"x","location":"Atlanta"})"
                                 "\n");
        REQUIRE(users.size() == 2);
        CHECK(users[0].profile.at("handle") == "@a");
        CHECK(users[0].profile.at("bio") == "hi");
        CHECK(users[1].profile.at("location") == "Atlanta");
    }

    TEST_CASE("load of save output is identical") {
        const std::vector<UserRecord> users = {
            make_user("a", {{1, "hello \"quoted\" @delta"}, {7, "tab\there\nnewline"}}, {{"handle", "@a"}}),
            make_user("b", {{0, ""}, {2, "ünïcödé ✈"}}),
        };
        std::ostringstream out;
        save_users(out, users);
        CHECK(parse(out.str()) == users);
        // and a second round is byte-stable
        std::ostringstream again;
        save_users(again, parse(out.str()));
        CHECK(again.str() == out.str());
    }

    TEST_CASE("brand filter examples") {
        const std::vector<std::string> kw = {"@delta"};
        CHECK(filter_brand_mentions({}, kw).empty());
        const auto yes = make_user("y", {{1, "I love @Delta so much"}});
        const auto no = make_user("n", {{1, "deltoid workout"}});
        const auto substring = make_user("s", {{1, "delta is a letter"}});
        const std::vector<UserRecord> users = {no, yes, substring};
        const auto kept = filter_brand_mentions(users, kw);
        REQUIRE(kept.size() == 1);
        CHECK(kept[0].user_id == "y");
        CHECK_THROWS_AS(filter_brand_mentions(users, {}), std::invalid_argument);
    }

    TEST_CASE("brand filter is a subset and idempotent") {
        std::vector<UserRecord> users;
        for (int i = 0; i < 30; ++i)
            users.push_back(make_user("u" + std::to_string(i), {{1, i % 3 ? "nothing here" : "flying @DELTA today"},
                                                                   {2, i % 5 ? "meh" : "@delta!"}}));
        const std::vector<std::string> kw = {"@delta", "#deltaair"};
        const auto once = filter_brand_mentions(users, kw);
        const auto twice = filter_brand_mentions(once, kw);
        CHECK(once == twice);
        std::size_t j = 0;
        for (const auto& u : users)
            if (j < once.size() && once[j] == u) ++j;
        CHECK(j == once.size());  // an order-preserving subsequence
    }

    TEST_CASE("aggregate_dimension examples") {
        CHECK(aggregate_dimension(std::vector<double>{4.0}) == 4.0);
        CHECK(aggregate_dimension(std::vector<double>{4.0, 2.0}) == 3.0);
        CHECK(aggregate_dimension(std::vector<double>{5.0, 4.0, 3.0}) == 4.0);
        CHECK_THROWS_AS(aggregate_dimension(std::vector<double>{}), Error);
    }

    TEST_CASE("aggregate of n copies is exact") {
        for (double v : {1.0, 1.1, 2.3, 3.7, 4.9, 0.1 + 0.2 + 3.0}) {
            for (std::size_t n : {1u, 3u, 7u, 10u, 101u}) {
                const std::vector<double> values(n, v);
                CHECK(aggregate_dimension(values) == v);
            }
        }
    }

    TEST_CASE("binarize examples and range") {
        CHECK(binarize(4.2) == Label::Positive);
        CHECK(binarize(3.0) == Label::Negative);
        CHECK(binarize(1.0) == Label::Negative);
        CHECK(binarize(5.0) == Label::Positive);
        CHECK_THROWS_AS(binarize(0.99), Error);
        CHECK_THROWS_AS(binarize(5.01), Error);
        CHECK(binarize(3.15, 3.15) == Label::Negative);
    }

    TEST_CASE("binarize is monotone") {
        Label prev = Label::Negative;
        for (int i = 0; i <= 400; ++i) {
            const Label l = binarize(1.0 + i * 0.01);
            CHECK(to_int(l) >= to_int(prev));
            prev = l;
        }
    }

    TEST_CASE("survey round trip and validation") {
        const std::string header =
            "user_id,brand,favorability,persistence,confidence,accessibility,resistance,buy,recommend,prohibit\n";
        std::istringstream in(header + "a,delta,4,3,2.5,1,5,4.5,3.01,2\nb,delta,1,1,1,1,1,1,1,1\n");
        const auto rs = load_survey(in);
        REQUIRE(rs.size() == 2);
        CHECK(rs[0].values[index_of(Dimension::Confidence)] == 2.5);
        std::ostringstream out;
        save_survey(out, rs);
        std::istringstream back(out.str());
        const auto again = load_survey(back);
        CHECK(again[0].values == rs[0].values);
        CHECK(again[1].user_id == "b");

        std::istringstream bad_value(header + "a,delta,6,3,3,3,3,3,3,3\n");
        CHECK_THROWS_AS(load_survey(bad_value), ParseError);
        std::istringstream bad_header("user,brand\n");
        CHECK_THROWS_AS(load_survey(bad_header), ParseError);
        std::istringstream dup(header + "a,delta,4,3,3,3,3,3,3,3\na,delta,4,3,3,3,3,3,3,3\n");
        CHECK_THROWS_AS(load_survey(dup), ParseError);
        std::istringstream short_row(header + "a,delta,4,3\n");
        CHECK_THROWS_AS(load_survey(short_row), ParseError);
    }

    TEST_CASE("label_users joins by id and warns about unmatched users") {
        const std::vector<UserRecord> users = {make_user("a", {{1, "x"}}), make_user("b", {{1, "y"}})};
        SurveyResponse r;
        r.user_id = "a";
        r.brand = "delta";
        r.values = {4, 3, 2, 5, 1, 3.5, 3.0, 2.9};
        ScopedWarningCapture warnings;
        const auto labeled = label_users(users, std::vector<SurveyResponse>{r});
        REQUIRE(labeled.size() == 1);
        CHECK(labeled[0].record.user_id == "a");
        const PerDimension<Label> expect = {Label::Positive, Label::Negative, Label::Negative, Label::Positive,
                                            Label::Negative, Label::Positive, Label::Negative, Label::Negative};
        CHECK(labeled[0].labels == expect);
        CHECK(warnings.messages().size() == 1);
    }

    TEST_CASE("sample-mean thresholds") {
        std::vector<SurveyResponse> rs(3);
        const double fav[] = {2.0, 3.0, 4.5};
        for (int i = 0; i < 3; ++i) {
            rs[i].user_id = "u" + std::to_string(i);
            rs[i].values.fill(3.0);
            rs[i].values[0] = fav[i];
        }
        const auto t = label_thresholds(rs, ThresholdPolicy::SampleMean);
        CHECK(t[0] == doctest::Approx(9.5 / 3.0));
        CHECK(t[1] == 3.0);
        CHECK(label_thresholds(rs, ThresholdPolicy::ScaleMidpoint)[0] == 3.0);
    }
}

TEST_SUITE("tokenize") {
    TEST_CASE("spec examples") {
        CHECK(tokenize("").empty());
        CHECK(tokenize("Awesome @Delta!") == Tokens{"awesome", "@delta"});
        CHECK(tokenize("see https://t.co/x now") == Tokens{"see", "now"});
    }

    TEST_CASE("prefixes, apostrophes and separators") {
        CHECK(tokenize("#Travel, don't @DELTA's http://x.y/z?q=1 fly") ==
              Tokens{"#travel", "don't", "@delta's", "fly"});
        CHECK(tokenize("a\tb\nc---d") == Tokens{"a", "b", "c", "d"});
        CHECK(tokenize("HTTPS://Example.com/x ok") == Tokens{"ok"});
        CHECK(tokenize("caf\xC3\xA9") == Tokens{"caf"});  // non-ASCII bytes split
    }

    TEST_CASE("keyword set matches whole tokens case-insensitively") {
        const KeywordSet kw({"@Delta", " #DeltaAir "});
        CHECK(kw.contains("@delta"));
        CHECK(kw.contains("#deltaair"));
        CHECK_FALSE(kw.contains("delta"));
        const Tokens t = tokenize("fly @delta and #deltaair with @delta");
        CHECK(kw.mentioned_in(t));
        CHECK(kw.positions(t) == std::vector<std::size_t>{1, 3, 5});
        CHECK_THROWS(KeywordSet({""}));
    }
}
