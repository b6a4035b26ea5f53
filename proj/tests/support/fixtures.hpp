// Constructed inputs for the collective-inference tests.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "attitude/collective.hpp"

namespace oracle {

// Phi coefficient of a 2x2 table, written out from the definition.
inline double phi(int n11, int n10, int n01, int n00) {
    const double r1 = n11 + n10, r0 = n01 + n00, c1 = n11 + n01, c0 = n10 + n00;
    return (static_cast<double>(n11) * n00 - static_cast<double>(n10) * n01) / std::sqrt(r1 * r0 * c1 * c0);
}

struct Table2x2 {
    int n11 = 0, n10 = 0, n01 = 0, n00 = 0;
};

// The 2x2 table over n rows with `base` positives in the reference column
// whose phi is closest to `target`.
inline Table2x2 closest_table(int n, int base, double target) {
    Table2x2 best;
    double best_err = 2;
    for (int n11 = 0; n11 <= base; ++n11)
        for (int n01 = 0; n01 <= n - base; ++n01) {
            const int n10 = base - n11, n00 = n - base - n01;
            if (n11 + n01 == 0 || n10 + n00 == 0) continue;
            const double err = std::abs(phi(n11, n10, n01, n00) - target);
            if (err < best_err) {
                best_err = err;
                best = {n11, n10, n01, n00};
            }
        }
    return best;
}

// A column whose phi with `reference` follows `t`: the first t.n11 positive
// rows and the first t.n01 negative rows of `reference` are set.
inline std::vector<int> column_against(const std::vector<int>& reference, const Table2x2& t) {
    std::vector<int> out(reference.size(), 0);
    int pos = 0, neg = 0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        if (reference[i])
            out[i] = pos++ < t.n11;
        else
            out[i] = neg++ < t.n01;
    }
    return out;
}

// Label columns shaped like a typical airline survey: favorability strongly tied to
// buy (0.77), accessibility nearly independent of buy (0.042). The remaining
// dimensions are seeded coin flips.
struct EngineeredLabels {
    std::vector<attitude::PerDimension<attitude::Label>> rows;
    double r_fav_buy = 0;
    double r_acc_buy = 0;
};

inline EngineeredLabels survey_like_pattern(int n = 200, std::uint64_t seed = 1) {
    using attitude::Dimension;
    std::vector<int> buy(n);
    for (int i = 0; i < n; ++i) buy[i] = i % 2;
    const auto fav = column_against(buy, closest_table(n, n / 2, 0.77));
    // Interleave accessibility differently so it is not a function of fav.
    std::vector<int> acc(n, 0);
    {
        const Table2x2 t = closest_table(n, n / 2, 0.042);
        int pos = 0, neg = 0;
        for (int i = n - 1; i >= 0; --i) {
            if (buy[i])
                acc[i] = pos++ < t.n11;
            else
                acc[i] = neg++ < t.n01;
        }
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    EngineeredLabels out;
    out.rows.resize(n);
    for (int i = 0; i < n; ++i) {
        for (Dimension d : attitude::kAllDimensions) out.rows[i][attitude::index_of(d)] = attitude::label_from_bool(coin(rng));
        out.rows[i][attitude::index_of(Dimension::Favorability)] = attitude::label_from_bool(fav[i]);
        out.rows[i][attitude::index_of(Dimension::Accessibility)] = attitude::label_from_bool(acc[i]);
        out.rows[i][attitude::index_of(Dimension::Buy)] = attitude::label_from_bool(buy[i]);
    }
    std::vector<double> b(buy.begin(), buy.end()), f(fav.begin(), fav.end()), a(acc.begin(), acc.end());
    auto pearson = [](const std::vector<double>& x, const std::vector<double>& y) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
        mx /= x.size();
        my /= y.size();
        double sxy = 0, sxx = 0, syy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sxy += (x[i] - mx) * (y[i] - my);
            sxx += (x[i] - mx) * (x[i] - mx);
            syy += (y[i] - my) * (y[i] - my);
        }
        return sxy / std::sqrt(sxx * syy);
    };
    out.r_fav_buy = pearson(f, b);
    out.r_acc_buy = pearson(a, b);
    return out;
}

// Random node models over features s0..s3 and a random graph. Weights on the
// dynamic features are large enough that neighbors can flip each other.
struct IcaInstance {
    attitude::DependencyGraph graph;
    attitude::NodeModels models;
    attitude::FeatureVector user;
};

inline IcaInstance random_ica_instance(std::mt19937_64& rng) {
    using namespace attitude;
    std::uniform_real_distribution<double> r(-1.0, 1.0), w(-4.0, 4.0), x(-2.0, 2.0);
    PerDimension<PerDimension<double>> corr{};
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        corr[i][i] = 1.0;
        for (std::size_t j = i + 1; j < kDimensionCount; ++j) corr[i][j] = corr[j][i] = r(rng);
    }
    IcaInstance inst;
    inst.graph = DependencyGraph(corr, 0.3);
    auto random_model = [&](const std::vector<std::string>& ids) {
        std::vector<ModelFeature> fs;
        for (const auto& id : ids) fs.push_back({id, 0.0, 1.0, w(rng)});
        std::sort(fs.begin(), fs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        return ClassifierModel(fs, r(rng), {});
    };
    const std::vector<std::string> statics = {"s0", "s1", "s2", "s3"};
    for (Dimension d : kAllDimensions) {
        NodeModel node;
        node.dimension = d;
        node.neighbor_order = inst.graph.neighbors(d);
        node.static_model = random_model(statics);
        auto ids = statics;
        for (Dimension nb : node.neighbor_order) ids.push_back(dynamic_feature_id(nb));
        node.full_model = random_model(ids);
        inst.models[d] = node;
    }
    for (const auto& id : statics) inst.user.set(id, x(rng));
    return inst;
}

}  // namespace oracle
