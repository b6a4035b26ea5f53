#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "attitude/metrics.hpp"
#include "support/oracles.hpp"

using namespace attitude;

namespace {

std::vector<Label> labels_of(std::initializer_list<int> bits) {
    std::vector<Label> out;
    for (int b : bits) out.push_back(label_from_bool(b != 0));
    return out;
}

std::vector<std::string> ids(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("u" + std::to_string(i));
    return out;
}

}  // namespace

TEST_SUITE("metrics") {
    TEST_CASE("kfold examples") {
        const auto ten = ids(10);
        CHECK(kfold_split(ten, 5, 1).fold_sizes() == std::vector<std::size_t>{2, 2, 2, 2, 2});
        auto sizes = kfold_split(ids(11), 5, 1).fold_sizes();
        std::sort(sizes.rbegin(), sizes.rend());
        CHECK(sizes == std::vector<std::size_t>{3, 2, 2, 2, 2});
        CHECK(kfold_split(ten, 5, 9).assignments == kfold_split(ten, 5, 9).assignments);
        CHECK(kfold_split(ids(100), 5, 1).assignments != kfold_split(ids(100), 5, 2).assignments);
        CHECK_THROWS(kfold_split(ids(4), 5, 1));
        CHECK_THROWS(kfold_split(ten, 1, 1));
    }

    TEST_CASE("every user lands in exactly one fold") {
        for (int n : {5, 17, 64, 101}) {
            const auto plan = kfold_split(ids(n), 5, static_cast<std::uint64_t>(n));
            CHECK(plan.assignments.size() == static_cast<std::size_t>(n));
            const auto sizes = plan.fold_sizes();
            CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
            for (const auto& [id, f] : plan.assignments) CHECK((f >= 0 && f < 5));
        }
    }

    TEST_CASE("precision, recall and F1 examples") {
        // 69 true positives, 26 false positives, 31 false negatives
        std::vector<Label> predicted, actual;
        auto add = [&](int count, bool p, bool a) {
            for (int i = 0; i < count; ++i) {
                predicted.push_back(label_from_bool(p));
                actual.push_back(label_from_bool(a));
            }
        };
        add(69, true, true);
        add(26, true, false);
        add(31, false, true);
        add(50, false, false);
        const auto prf = precision_recall_f1(predicted, actual);
        CHECK(prf.precision == doctest::Approx(69.0 / 95.0));
        CHECK(prf.recall == doctest::Approx(0.69));
        CHECK(std::abs(f1_score(0.73, 0.69) - 0.71) <= 0.005);

        const auto same = labels_of({1, 0, 1, 0});
        const auto perfect = precision_recall_f1(same, same);
        CHECK(perfect.precision == 1.0);
        CHECK(perfect.recall == 1.0);
        CHECK(perfect.f1 == 1.0);

        const auto none = precision_recall_f1(labels_of({0, 0, 0}), labels_of({1, 0, 1}));
        CHECK(none.precision == 0.0);
        CHECK(none.recall == 0.0);
        CHECK(none.f1 == 0.0);

        CHECK_THROWS(precision_recall_f1(labels_of({1}), labels_of({1, 0})));
        CHECK_THROWS(precision_recall_f1(std::vector<Label>{}, std::vector<Label>{}));
        CHECK(f1_score(0, 0) == 0.0);
    }

    TEST_CASE("AUC examples") {
        const std::vector<double> ranked = {0.9, 0.8, 0.2, 0.1};
        CHECK(roc_auc(ranked, labels_of({1, 1, 0, 0})) == 1.0);
        const std::vector<double> flat(6, 0.3);
        CHECK(roc_auc(flat, labels_of({1, 0, 1, 0, 0, 1})) == 0.5);
        const std::vector<double> s = {0.9, 0.4, 0.6, 0.1};
        CHECK(roc_auc(s, labels_of({1, 1, 0, 0})) == 0.75);
        CHECK_THROWS(roc_auc(s, labels_of({1, 1, 1, 1})));
        CHECK_THROWS(roc_auc(s, labels_of({1, 0})));
    }

    TEST_CASE("AUC equals the pairwise count, its complement and monotone transforms") {
        std::mt19937_64 rng(31);
        std::uniform_int_distribution<int> size(2, 200), grid(0, 9);
        std::uniform_real_distribution<double> u(0, 1);
        std::bernoulli_distribution coin(0.5), tie(0.5);
        for (int trial = 0; trial < 100; ++trial) {
            const int n = size(rng);
            std::vector<double> scores(n);
            std::vector<Label> labels(n);
            for (int i = 0; i < n; ++i) {
                scores[i] = tie(rng) ? grid(rng) / 10.0 : u(rng);
                labels[i] = label_from_bool(coin(rng));
            }
            labels[0] = Label::Positive;
            labels[1] = Label::Negative;
            const double auc = roc_auc(scores, labels);
            CHECK(auc == oracle::brute_force_auc(scores, labels));

            std::vector<Label> flipped(n);
            for (int i = 0; i < n; ++i) flipped[i] = label_from_bool(labels[i] == Label::Negative);
            CHECK(auc + roc_auc(scores, flipped) == 1.0);

            std::vector<double> transformed(n);
            for (int i = 0; i < n; ++i) transformed[i] = std::exp(3 * scores[i]) - 7;
            CHECK(roc_auc(transformed, labels) == auc);
        }
    }

    TEST_CASE("pearson examples") {
        const std::vector<double> x = {1, 2, 3};
        CHECK(pearson_correlation(x, x) == doctest::Approx(1.0));
        CHECK(pearson_correlation(x, std::vector<double>{-1, -2, -3}) == doctest::Approx(-1.0));
        CHECK(std::abs(pearson_correlation(x, std::vector<double>{1, 2, 4}) - 0.9820) <= 1e-4);
        CHECK_THROWS(pearson_correlation(x, std::vector<double>{2, 2, 2}));
        CHECK_THROWS(pearson_correlation(std::vector<double>{1, 2}, std::vector<double>{1, 3}));
        CHECK_THROWS(pearson_correlation(x, std::vector<double>{1, 2}));
    }

    TEST_CASE("pearson symmetry, affine invariance and negation") {
        std::mt19937_64 rng(41);
        std::normal_distribution<double> g(0, 1);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> x(30), y(30), ax(30), ny(30);
            for (int i = 0; i < 30; ++i) {
                x[i] = g(rng);
                y[i] = 0.5 * x[i] + g(rng);
                ax[i] = 4.5 * x[i] - 12;
                ny[i] = -y[i];
            }
            const double r = pearson_correlation(x, y);
            CHECK(std::abs(r - oracle::direct_pearson(x, y)) <= 1e-9);
            CHECK(std::abs(pearson_correlation(y, x) - r) <= 1e-12);
            CHECK(std::abs(pearson_correlation(ax, y) - r) <= 1e-9);
            CHECK(std::abs(pearson_correlation(x, ny) + r) <= 1e-12);
        }
    }

    TEST_CASE("descriptive statistics") {
        std::vector<PerDimension<double>> rows(4);
        const double fav[] = {1, 2, 3, 4};
        for (int i = 0; i < 4; ++i) {
            rows[i].fill(3.0);
            rows[i][index_of(Dimension::Favorability)] = fav[i];
            rows[i][index_of(Dimension::Buy)] = 2 * fav[i];
            rows[i][index_of(Dimension::Prohibit)] = -fav[i];
        }
        const auto s = describe(rows);
        CHECK(s.n == 4);
        CHECK(s.mean[0] == 2.5);
        CHECK(s.stddev[0] == doctest::Approx(std::sqrt(5.0 / 3.0)));
        CHECK(s.correlation[0][index_of(Dimension::Buy)] == doctest::Approx(1.0));
        CHECK(s.correlation[0][index_of(Dimension::Prohibit)] == doctest::Approx(-1.0));
        CHECK(std::isnan(s.correlation[0][index_of(Dimension::Persistence)]));
        CHECK_FALSE(format_descriptive_table(s).empty());
    }
}
