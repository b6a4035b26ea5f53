#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "attitude/dimension.hpp"
#include "attitude/features.hpp"

namespace attitude {

struct Hyperparams {
    double l2_lambda = 1e-3;
    double learning_rate = 0.1;  // decays as 1/sqrt(epoch)
    int epochs = 50;
    int batch_size = 32;
    std::uint64_t seed = 42;
    bool class_weighting = true;  // inverse class frequency example weights

    void validate() const;
    friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// Non-owning view of one dimension's training data.
struct TrainingSet {
    Dimension dimension = Dimension::Favorability;
    std::span<const FeatureVector> rows;
    std::span<const Label> labels;
};

// One retained input column: training-fold mean/stddev and the weight on the
// standardized value.
struct ModelFeature {
    std::string id;
    double mean = 0;
    double stddev = 1;
    double weight = 0;

    friend bool operator==(const ModelFeature&, const ModelFeature&) = default;
};

// L2-regularized logistic regression over standardized sparse features.
class ClassifierModel {
public:
    ClassifierModel() = default;
    ClassifierModel(std::vector<ModelFeature> features, double bias, Hyperparams hyperparams);

    // sigmoid(w . standardize(x) + b). Ids the model has not seen are ignored.
    double predict_proba(const FeatureVector& x) const;
    double linear_score(const FeatureVector& x) const;

    const std::vector<ModelFeature>& features() const noexcept { return features_; }
    double bias() const noexcept { return bias_; }
    const Hyperparams& hyperparams() const noexcept { return hyperparams_; }

    friend bool operator==(const ClassifierModel& a, const ClassifierModel& b) {
        return a.features_ == b.features_ && a.bias_ == b.bias_ && a.hyperparams_ == b.hyperparams_;
    }

private:
    std::vector<ModelFeature> features_;  // sorted by id
    double bias_ = 0;
    Hyperparams hyperparams_;

    std::unordered_map<std::string, double> raw_coef_;  // weight / stddev
    double offset_ = 0;                                 // bias - sum(weight * mean / stddev)
};

// Numerically safe logistic function; the result is strictly inside (0, 1).
double sigmoid(double z) noexcept;

// Training internals, public so the analytic gradient can be checked against
// finite differences.
namespace training {

// Rows restricted to non-constant columns, stored as CSR over raw values.
struct Problem {
    std::vector<std::string> feature_ids;
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> col;
    std::vector<double> val;
    std::vector<double> target;  // 0 or 1
    std::vector<double> weight;  // example weights

    std::size_t rows() const noexcept { return target.size(); }
    std::size_t cols() const noexcept { return feature_ids.size(); }
};

Problem make_problem(const TrainingSet& data, bool class_weighting);

struct State {
    std::vector<double> weights;  // one per Problem column, standardized space
    double bias = 0;
};

// Weighted mean logistic loss over `batch` plus (l2/2)|w|^2. The bias is not
// regularized.
double loss(const Problem& p, const State& s, std::span<const std::size_t> batch, double l2_lambda);

// Analytic gradient of `loss`, same layout as State.
State gradient(const Problem& p, const State& s, std::span<const std::size_t> batch, double l2_lambda);

// Full-data loss after each epoch (index 0 is the initial state).
struct Trace {
    std::vector<double> epoch_loss;
};

}  // namespace training

// Mini-batch gradient descent with a fixed shuffle seed. An epoch that would
// raise the full training loss is rolled back and the step size halved, so the
// recorded loss never increases.
ClassifierModel train(const TrainingSet& data, const Hyperparams& hyperparams = {}, training::Trace* trace = nullptr);

// Versioned text format; doubles use shortest round-trip form so a reload is
// bit-exact.
void save_model(std::ostream& out, const ClassifierModel& model);
ClassifierModel load_model(std::istream& in);
std::string serialize(const ClassifierModel& model);

}  // namespace attitude
