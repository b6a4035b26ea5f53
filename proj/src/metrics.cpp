#include "attitude/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "attitude/error.hpp"

namespace attitude {

std::vector<std::size_t> FoldPlan::fold_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(k, 0)), 0);
    for (const auto& [id, fold] : assignments) ++sizes.at(static_cast<std::size_t>(fold));
    return sizes;
}

FoldPlan kfold_split(std::span<const std::string> user_ids, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("kfold_split: k must be >= 2");
    if (user_ids.size() < static_cast<std::size_t>(k))
        throw Error("kfold_split: " + std::to_string(user_ids.size()) + " users cannot fill " + std::to_string(k) +
                    " folds");
    std::vector<std::string> ids(user_ids.begin(), user_ids.end());
    if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size())
        throw Error("kfold_split: duplicate user ids");

    std::mt19937_64 rng(seed);
    std::shuffle(ids.begin(), ids.end(), rng);
    FoldPlan plan{k, {}};
    for (std::size_t i = 0; i < ids.size(); ++i) plan.assignments.emplace(ids[i], static_cast<int>(i % k));
    return plan;
}

double f1_score(double precision, double recall) noexcept {
    const double s = precision + recall;
    return s > 0 ? 2.0 * precision * recall / s : 0.0;
}

PrecisionRecallF1 precision_recall_f1(std::span<const Label> predicted, std::span<const Label> actual) {
    if (predicted.size() != actual.size())
        throw Error("precision_recall_f1: " + std::to_string(predicted.size()) + " predictions vs " +
                    std::to_string(actual.size()) + " labels");
    if (predicted.empty()) throw Error("precision_recall_f1: empty input");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool p = predicted[i] == Label::Positive, a = actual[i] == Label::Positive;
        tp += p && a;
        fp += p && !a;
        fn += !p && a;
    }
    PrecisionRecallF1 r;
    r.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    r.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    r.f1 = f1_score(r.precision, r.recall);
    return r;
}

double roc_auc(std::span<const double> scores, std::span<const Label> actual) {
    if (scores.size() != actual.size()) throw Error("roc_auc: scores and labels differ in length");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (double s : scores)
        if (std::isnan(s)) throw Error("roc_auc: NaN score");
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Walk tie groups in ascending score order; each positive beats every
    // negative in earlier groups and ties with negatives in its own group.
    double wins = 0, ties = 0, negatives_below = 0;
    double positives = 0, negatives = 0;
    for (std::size_t g = 0; g < order.size();) {
        std::size_t end = g;
        double pos = 0, neg = 0;
        while (end < order.size() && scores[order[end]] == scores[order[g]]) {
            (actual[order[end]] == Label::Positive ? pos : neg) += 1;
            ++end;
        }
        wins += pos * negatives_below;
        ties += pos * neg;
        negatives_below += neg;
        positives += pos;
        negatives += neg;
        g = end;
    }
    if (positives == 0 || negatives == 0) throw Error("roc_auc: both classes must be present");
    return (wins + 0.5 * ties) / (positives * negatives);
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("pearson_correlation: length mismatch");
    if (x.size() < 3) throw Error("pearson_correlation: need at least 3 observations");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    const bool x_const = std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
    const bool y_const = std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); });
    if (x_const || y_const || sxx == 0 || syy == 0) throw Error("pearson_correlation: constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

DescriptiveStats describe(std::span<const PerDimension<double>> rows) {
    DescriptiveStats s;
    s.n = rows.size();
    if (rows.size() < 3) throw Error("describe: need at least 3 rows");
    PerDimension<std::vector<double>> columns;
    for (Dimension d : kAllDimensions) {
        auto& col = columns[index_of(d)];
        col.reserve(rows.size());
        for (const auto& r : rows) col.push_back(r[index_of(d)]);
        const double n = static_cast<double>(col.size());
        const double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
        double ss = 0;
        for (double v : col) ss += (v - mean) * (v - mean);
        s.mean[index_of(d)] = mean;
        s.stddev[index_of(d)] = std::sqrt(ss / (n - 1));
    }
    for (Dimension a : kAllDimensions) {
        for (Dimension b : kAllDimensions) {
            double r = std::nan("");
            if (a == b) {
                r = 1.0;
            } else {
                try {
                    r = pearson_correlation(columns[index_of(a)], columns[index_of(b)]);
                } catch (const Error&) {
                }
            }
            s.correlation[index_of(a)][index_of(b)] = r;
        }
    }
    return s;
}

std::string format_descriptive_table(const DescriptiveStats& stats) {
    std::ostringstream out;
    out << std::fixed;
    out << std::left << std::setw(18) << "variable" << std::right << std::setw(7) << "mean" << std::setw(9) << "stddev";
    for (std::size_t j = 1; j < kDimensionCount; ++j) out << std::setw(7) << j;
    out << '\n';
    for (Dimension a : kAllDimensions) {
        const auto i = index_of(a);
        out << std::left << std::setw(18) << (std::to_string(i + 1) + ". " + std::string(to_string(a))) << std::right
            << std::setprecision(2) << std::setw(7) << stats.mean[i] << std::setw(9) << stats.stddev[i];
        for (std::size_t j = 0; j < i; ++j) {
            const double r = stats.correlation[i][j];
            out << std::setw(7);
            if (std::isnan(r))
                out << "-";
            else
                out << std::setprecision(2) << r;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace attitude
