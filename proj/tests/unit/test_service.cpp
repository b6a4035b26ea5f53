#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "attitude/error.hpp"
#include "attitude/service.hpp"
#include "attitude/synthetic.hpp"
#include "support/oracles.hpp"

using namespace attitude;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ScoredUser scored(const std::string& id, std::initializer_list<std::pair<Dimension, double>> scores) {
    ScoredUser u;
    u.user_id = id;
    u.brand = "delta";
    u.scores.fill(0.5);
    u.independent.fill(0.5);
    for (const auto& [d, s] : scores) u.scores[index_of(d)] = s;
    return u;
}

std::vector<std::tuple<Dimension, double, double>> as_tuples(const FilterSpec& spec) {
    std::vector<std::tuple<Dimension, double, double>> out;
    for (const auto& p : spec.predicates) out.emplace_back(p.dimension, p.lo, p.hi);
    return out;
}

std::vector<std::string> ids_of(const std::vector<ScoredUser>& users) {
    std::vector<std::string> out;
    for (const auto& u : users) out.push_back(u.user_id);
    return out;
}

FilterSpec random_spec(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    std::bernoulli_distribution use(0.35), grid(0.3);
    std::uniform_int_distribution<int> g(0, 10);
    FilterSpec spec;
    for (Dimension d : kAllDimensions) {
        if (!use(rng)) continue;
        double a = grid(rng) ? g(rng) / 10.0 : u(rng);
        double b = grid(rng) ? g(rng) / 10.0 : u(rng);
        if (a > b) std::swap(a, b);
        spec.predicates.push_back({d, a, b});
    }
    return spec;
}

// A small trained bundle shared by the scoring tests.
const ModelBundle& test_bundle() {
    static const ModelBundle bundle = [] {
        SyntheticSpec spec;
        spec.users = 120;
        const auto corpus = generate_synthetic(spec);
        EngineConfig config;
        config.classifier.epochs = 15;
        return train_bundle(corpus.labeled(), corpus.lexicon(), config);
    }();
    return bundle;
}

Snapshot figure_snapshot() {
    Snapshot s;
    s.brand = "delta";
    s.users = {
        scored("a", {{Dimension::Favorability, 0.9}, {Dimension::Persistence, 0.7}, {Dimension::Buy, 0.8}}),
        scored("b", {{Dimension::Favorability, 0.3}, {Dimension::Persistence, 0.9}, {Dimension::Buy, 0.9}}),
        scored("c", {{Dimension::Favorability, 0.6}, {Dimension::Persistence, 0.5}, {Dimension::Buy, 0.6}}),
    };
    s.users[0].relevant_tweets = {{"a", 30, "late again @delta"}, {"a", 10, "@delta thanks"}};
    s.users[0].profile["location"] = "Atlanta";
    return s;
}

}  // namespace

TEST_SUITE("service") {
    TEST_CASE("histogram examples") {
        CHECK(distribution({}, Dimension::Buy).counts == std::vector<std::size_t>{0, 0, 0, 0, 0});
        const std::vector<ScoredUser> cohort = {scored("a", {{Dimension::Buy, 0.1}}), scored("b", {{Dimension::Buy, 0.5}}),
                                                scored("c", {{Dimension::Buy, 0.95}})};
        const auto h = distribution(cohort, Dimension::Buy);
        CHECK(h.counts == std::vector<std::size_t>{1, 0, 1, 0, 1});
        CHECK(h.bin_edges == std::vector<double>{0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
        CHECK(bin_index(1.0) == 4);
        CHECK(bin_index(0.0) == 0);
        CHECK(bin_index(0.2) == 1);  // left-closed
        CHECK(bin_index(0.19999999) == 0);
        CHECK(bin_index(0.5, 2) == 1);
        CHECK_THROWS(bin_index(1.0000001));
        CHECK_THROWS(bin_index(-0.1));
    }

    TEST_CASE("histogram counts sum to the cohort and full-bin filters agree") {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0, 1);
        for (int trial = 0; trial < 50; ++trial) {
            // continuous scores: an exact interior edge would sit in two inclusive ranges
            std::vector<ScoredUser> cohort(200);
            for (std::size_t i = 0; i < cohort.size(); ++i) {
                cohort[i].user_id = "u" + std::to_string(i);
                for (auto& s : cohort[i].scores) s = u(rng);
            }
            for (Dimension d : kAllDimensions) {
                const auto h = distribution(cohort, d);
                std::size_t total = 0;
                for (std::size_t c : h.counts) total += c;
                CHECK(total == cohort.size());
                for (std::size_t b = 0; b < h.counts.size(); ++b) {
                    FilterSpec spec{{{d, h.bin_edges[b], h.bin_edges[b + 1]}}};
                    CHECK(filter_users(cohort, spec).size() == h.counts[b]);
                }
            }
        }
    }

    TEST_CASE("filter examples") {
        const auto snap = figure_snapshot();
        CHECK(filter_users(snap.users, {}).size() == 3);
        const FilterSpec figure{{{Dimension::Favorability, 0.6, 1.0},
                                 {Dimension::Persistence, 0.5, 1.0},
                                 {Dimension::Buy, 0.6, 1.0}}};
        CHECK(ids_of(filter_users(snap.users, figure)) == std::vector<std::string>{"a", "c"});
        const FilterSpec point{{{Dimension::Buy, 0.8, 0.8}}};
        CHECK(ids_of(filter_users(snap.users, point)) == std::vector<std::string>{"a"});
        // independent scores are all 0.5
        CHECK(filter_users(snap.users, figure, EvalMode::Independent).empty());
    }

    TEST_CASE("filters match the per-user oracle, shrink and keep order") {
        std::mt19937_64 rng(2);
        for (int trial = 0; trial < 300; ++trial) {
            const auto cohort = oracle::random_cohort(rng, 60);
            const FilterSpec spec = random_spec(rng);
            const auto got = filter_users(cohort, spec);
            std::vector<std::string> expect;
            for (const auto& u : cohort)
                if (oracle::passes(u, as_tuples(spec))) expect.push_back(u.user_id);
            CHECK(ids_of(got) == expect);

            FilterSpec more = spec;
            for (Dimension d : kAllDimensions) {
                bool used = false;
                for (const auto& p : spec.predicates) used = used || p.dimension == d;
                if (!used) {
                    more.predicates.push_back({d, 0.3, 0.7});
                    break;
                }
            }
            const auto narrower = filter_users(cohort, more);
            CHECK(narrower.size() <= got.size());
            for (const auto& u : narrower) CHECK(std::find(got.begin(), got.end(), u) != got.end());
        }
    }

    TEST_CASE("filter spec validation and text form") {
        CHECK_THROWS_AS((FilterSpec{{{Dimension::Buy, 0.7, 0.6}}}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((FilterSpec{{{Dimension::Buy, -0.1, 0.6}}}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((FilterSpec{{{Dimension::Buy, 0.1, 1.1}}}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((FilterSpec{{{Dimension::Buy, 0.1, 0.2}, {Dimension::Buy, 0.3, 0.4}}}.validate()),
                        std::invalid_argument);
        const auto spec = parse_filter_spec("Favorability:0.6:1,persistence:0.5:1,buy:0.6:1");
        REQUIRE(spec.predicates.size() == 3);
        CHECK(spec.predicates[1].dimension == Dimension::Persistence);
        CHECK(spec.predicates[1].lo == 0.5);
        CHECK(parse_filter_spec(format_filter_spec(spec)).predicates.size() == 3);
        CHECK(format_filter_spec(parse_filter_spec(format_filter_spec(spec))) == format_filter_spec(spec));
        CHECK(parse_filter_spec("").predicates.empty());
        CHECK_THROWS_AS(parse_filter_spec("nosuch:0:1"), std::invalid_argument);
        CHECK_THROWS_AS(parse_filter_spec("buy:0.5"), std::invalid_argument);
        CHECK_THROWS_AS(parse_filter_spec("buy:x:1"), std::invalid_argument);
        CHECK_THROWS_AS(parse_filter_spec("buy:0.9:0.1"), std::invalid_argument);
    }

    TEST_CASE("user detail") {
        const auto snap = figure_snapshot();
        const auto& a = user_detail(snap.users, "a");
        CHECK(a.relevant_tweets.size() == 2);
        CHECK_THROWS_AS(user_detail(snap.users, "zzz"), NotFoundError);
    }

    TEST_CASE("scoring a cohort") {
        const auto& bundle = test_bundle();
        const std::vector<UserRecord> users = {
            oracle::make_user("quiet", {{1, "nothing about airlines"}}),
            oracle::make_user("fan", {{5, "love @delta favpos1"}, {9, "@delta again favpos2"}, {7, "other"}, {1, "@delta first"}}),
        };
        CHECK(score_cohort(std::vector<UserRecord>{users[0]}, "delta", bundle).empty());
        const auto cohort = score_cohort(users, "delta", bundle);
        REQUIRE(cohort.size() == 1);
        const auto& fan = cohort[0];
        CHECK(fan.user_id == "fan");
        for (std::size_t d = 0; d < kDimensionCount; ++d) {
            CHECK((fan.scores[d] >= 0 && fan.scores[d] <= 1));
            CHECK((fan.independent[d] >= 0 && fan.independent[d] <= 1));
        }
        REQUIRE(fan.relevant_tweets.size() == 3);
        CHECK(fan.relevant_tweets[0].timestamp == 9);
        CHECK(fan.relevant_tweets[1].timestamp == 5);
        CHECK(fan.relevant_tweets[2].timestamp == 1);
        CHECK(score_cohort(users, "DELTA", bundle) == cohort);
        CHECK_THROWS_AS(score_cohort(users, "fitbit", bundle), std::invalid_argument);
    }

    TEST_CASE("bundle directory round trip scores identically") {
        const auto& bundle = test_bundle();
        const fs::path dir = fs::temp_directory_path() / ("attitude-bundle-" + std::to_string(::getpid()));
        fs::remove_all(dir);
        save_bundle(dir, bundle);
        const auto back = load_bundle(dir);
        fs::remove_all(dir);
        SyntheticSpec spec;
        spec.users = 30;
        spec.seed = 99;
        const auto fresh = generate_synthetic(spec);
        CHECK(score_cohort(fresh.users, "delta", back) == score_cohort(fresh.users, "delta", bundle));
    }

    TEST_CASE("snapshot round trip") {
        std::mt19937_64 rng(3);
        auto cohort = oracle::random_cohort(rng, 25);
        cohort[3].profile["bio"] = "tab\there \"quoted\"";
        cohort[3].relevant_tweets = {{cohort[3].user_id, 20, "@delta ✈"}, {cohort[3].user_id, 10, "@delta"}};
        std::ostringstream out;
        save_snapshot(out, cohort);
        std::istringstream in(out.str());
        CHECK(load_snapshot(in) == cohort);
        std::istringstream bad("{\"user_id\":1}\n");
        CHECK_THROWS_AS(load_snapshot(bad), ParseError);
    }

    TEST_CASE("request routing") {
        const auto snap = figure_snapshot();
        const std::map<std::string, std::string> none;

        const auto dists = handle_request(snap, "/api/v1/brands/delta/distributions", none);
        CHECK(dists.status == 200);
        const auto dj = json::parse(dists.body);
        CHECK(dj["distributions"].size() == 8);
        CHECK(dj["distributions"][0]["dimension"] == "favorability");
        CHECK(dj["cohort_size"] == 3);
        CHECK(handle_request(snap, "/api/v1/brands/delta/distributions", none).body == dists.body);

        const auto users = handle_request(snap, "/api/v1/brands/Delta/users",
                                          {{"filters", "favorability:0.6:1,persistence:0.5:1,buy:0.6:1"}});
        CHECK(users.status == 200);
        const auto uj = json::parse(users.body);
        CHECK(uj["count"] == 2);
        CHECK(uj["users"][0]["user_id"] == "a");
        CHECK(uj["users"][1]["user_id"] == "c");

        const auto detail = handle_request(snap, "/api/v1/brands/delta/users/a", {{"mode", "independent"}});
        CHECK(detail.status == 200);
        const auto aj = json::parse(detail.body);
        CHECK(aj["scores"]["buy"] == 0.5);
        CHECK(aj["relevant_tweets"][0]["timestamp"] == 30);
        CHECK(aj["profile"]["location"] == "Atlanta");

        auto status = [&](std::string_view path, std::map<std::string, std::string> q = {}) {
            const auto r = handle_request(snap, path, q);
            CHECK(json::parse(r.body).contains("error") == (r.status != 200));
            return r.status;
        };
        CHECK(status("/api/v1/brands/fitbit/distributions") == 404);
        CHECK(status("/api/v1/brands/delta/users/nobody") == 404);
        CHECK(status("/api/v2/brands/delta/users") == 404);
        CHECK(status("/api/v1/brands/delta/other") == 404);
        CHECK(status("/api/v1/brands/delta/users", {{"filters", "buy:2:3"}}) == 400);
        CHECK(status("/api/v1/brands/delta/users", {{"mode", "both"}}) == 400);
    }

    TEST_CASE("snapshot replacement is atomic for readers") {
        auto make = [](int n) {
            Snapshot s;
            s.brand = "delta";
            for (int i = 0; i < n; ++i) s.users.push_back(scored("u" + std::to_string(i), {}));
            return s;
        };
        SnapshotStore store(make(10));
        std::atomic<bool> stop{false};
        std::atomic<int> bad{0};
        std::vector<std::thread> readers;
        for (int t = 0; t < 4; ++t)
            readers.emplace_back([&] {
                while (!stop) {
                    const auto snap = store.current();
                    const auto r = handle_request(*snap, "/api/v1/brands/delta/users", {});
                    const auto count = json::parse(r.body)["count"].get<std::size_t>();
                    if (count != snap->users.size() || (count != 10 && count != 20)) ++bad;
                }
            });
        for (int i = 0; i < 200; ++i) store.replace(make(i % 2 ? 10 : 20));
        stop = true;
        for (auto& t : readers) t.join();
        CHECK(bad == 0);
    }

    TEST_CASE("HTTP server on an ephemeral port") {
        SnapshotStore store(figure_snapshot());
        ApiServer server(store);
        const int port = server.bind("127.0.0.1", 0);
        REQUIRE(port > 0);
        std::thread t([&] { server.listen(); });
        httplib::Client client("127.0.0.1", port);
        auto ok = client.Get("/api/v1/brands/delta/users?filters=buy%3A0.6%3A1&mode=ica");
        REQUIRE(ok);
        CHECK(ok->status == 200);
        CHECK(json::parse(ok->body)["count"] == 3);
        CHECK(ok->get_header_value("Content-Type").find("application/json") != std::string::npos);
        CHECK(ok->body == handle_request(figure_snapshot(), "/api/v1/brands/delta/users",
                                         {{"filters", "buy:0.6:1"}, {"mode", "ica"}})
                              .body);
        auto missing = client.Get("/api/v1/brands/delta/users/nobody");
        REQUIRE(missing);
        CHECK(missing->status == 404);
        auto bad = client.Get("/api/v1/brands/delta/users?filters=buy:1:0");
        REQUIRE(bad);
        CHECK(bad->status == 400);
        server.stop();
        t.join();
    }
}
