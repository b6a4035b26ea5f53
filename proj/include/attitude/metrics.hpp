#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "attitude/corpus.hpp"
#include "attitude/dimension.hpp"

namespace attitude {

struct FoldPlan {
    int k = 0;
    std::map<std::string, int> assignments;  // user_id -> fold in [0, k)

    std::vector<std::size_t> fold_sizes() const;
};

// Seeded shuffle, then round-robin assignment. Fold sizes differ by at most one.
FoldPlan kfold_split(std::span<const std::string> user_ids, int k = 5, std::uint64_t seed = 0);

struct PrecisionRecallF1 {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

// Positive class is Label::Positive. Zero denominators yield 0.
PrecisionRecallF1 precision_recall_f1(std::span<const Label> predicted, std::span<const Label> actual);

// Harmonic mean, 0 when precision + recall == 0.
double f1_score(double precision, double recall) noexcept;

// Probability that a random positive scores above a random negative, ties
// counting one half. O(n log n).
double roc_auc(std::span<const double> scores, std::span<const Label> actual);

// Sample Pearson correlation. Both inputs must be non-constant with length >= 3.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

// Means, sample standard deviations and pairwise correlations of per-user
// dimension values (Likert responses or 0/1 labels). Correlations involving a
// constant column are NaN.
struct DescriptiveStats {
    std::size_t n = 0;
    PerDimension<double> mean{};
    PerDimension<double> stddev{};
    PerDimension<PerDimension<double>> correlation{};
};

DescriptiveStats describe(std::span<const PerDimension<double>> rows);

std::string format_descriptive_table(const DescriptiveStats& stats);

}  // namespace attitude
