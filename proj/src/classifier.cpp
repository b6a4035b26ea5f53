#include "attitude/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "attitude/detail/numeric_text.hpp"
#include "attitude/error.hpp"

namespace attitude {
namespace {

constexpr std::string_view kModelMagic = "attitude-classifier v1";

double logistic(double z) noexcept {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double softplus(double z) noexcept { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

// Coefficients on raw values plus the constant they imply.
struct RawLinear {
    std::vector<double> coef;
    double offset = 0;
};

RawLinear to_raw(const training::Problem& p, const training::State& s) {
    RawLinear r;
    r.coef.resize(p.cols());
    r.offset = s.bias;
    for (std::size_t j = 0; j < p.cols(); ++j) {
        r.coef[j] = s.weights[j] / p.stddev[j];
        r.offset -= r.coef[j] * p.mean[j];
    }
    return r;
}

double row_score(const training::Problem& p, const RawLinear& r, std::size_t i) {
    double z = r.offset;
    for (std::size_t k = p.row_ptr[i]; k < p.row_ptr[i + 1]; ++k) z += r.coef[p.col[k]] * p.val[k];
    return z;
}

}  // namespace

double sigmoid(double z) noexcept {
    constexpr double lo = std::numeric_limits<double>::min();
    constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
    return std::clamp(logistic(z), lo, hi);
}

void Hyperparams::validate() const {
    if (!(l2_lambda >= 0) || !std::isfinite(l2_lambda)) throw std::invalid_argument("l2_lambda must be >= 0");
    if (!(learning_rate > 0) || !std::isfinite(learning_rate))
        throw std::invalid_argument("learning_rate must be > 0");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
}

ClassifierModel::ClassifierModel(std::vector<ModelFeature> features, double bias, Hyperparams hyperparams)
    : features_(std::move(features)), bias_(bias), hyperparams_(hyperparams) {
    std::sort(features_.begin(), features_.end(),
              [](const ModelFeature& a, const ModelFeature& b) { return a.id < b.id; });
    if (!std::isfinite(bias_)) throw Error("model bias is not finite");
    offset_ = bias_;
    raw_coef_.reserve(features_.size());
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const auto& f = features_[i];
        if (i > 0 && features_[i - 1].id == f.id) throw Error("duplicate model feature '" + f.id + "'");
        if (!std::isfinite(f.weight) || !std::isfinite(f.mean)) throw Error("non-finite parameter for '" + f.id + "'");
        if (!(f.stddev > 0) || !std::isfinite(f.stddev)) throw Error("scaler stddev must be > 0 for '" + f.id + "'");
        const double c = f.weight / f.stddev;
        raw_coef_.emplace(f.id, c);
        offset_ -= c * f.mean;
    }
}

double ClassifierModel::linear_score(const FeatureVector& x) const {
    double z = offset_;
    for (const auto& [id, value] : x.values()) {
        if (auto it = raw_coef_.find(id); it != raw_coef_.end()) z += it->second * value;
    }
    return z;
}

double ClassifierModel::predict_proba(const FeatureVector& x) const { return sigmoid(linear_score(x)); }

namespace training {

Problem make_problem(const TrainingSet& data, bool class_weighting) {
    const std::string dim(to_string(data.dimension));
    if (data.rows.size() != data.labels.size())
        throw Error(dim + ": " + std::to_string(data.rows.size()) + " feature rows but " +
                    std::to_string(data.labels.size()) + " labels");
    if (data.rows.empty()) throw Error(dim + ": empty training set");

    const std::size_t n = data.rows.size();
    std::size_t positives = 0;
    for (Label l : data.labels) positives += (l == Label::Positive);
    if (positives == 0 || positives == n)
        throw Error(dim + ": training data contains a single class; both classes are required");

    std::map<std::string_view, std::pair<double, std::size_t>> column_sums;  // sum, count
    for (const auto& row : data.rows) {
        for (const auto& [id, v] : row.values()) {
            if (!std::isfinite(v)) throw Error(dim + ": non-finite value for feature '" + id + "'");
            auto& [sum, count] = column_sums[id];
            sum += v;
            ++count;
        }
    }

    Problem p;
    std::map<std::string_view, std::uint32_t> kept;
    {
        std::map<std::string_view, double> sq_dev;
        std::map<std::string_view, double> means;
        for (const auto& [id, sc] : column_sums) means[id] = sc.first / static_cast<double>(n);
        for (const auto& row : data.rows)
            for (const auto& [id, v] : row.values()) {
                const double d = v - means[id];
                sq_dev[id] += d * d;
            }
        for (const auto& [id, sc] : column_sums) {
            const double mu = means[id];
            const double implicit_zeros = static_cast<double>(n - sc.second);
            const double var = (sq_dev[id] + implicit_zeros * mu * mu) / static_cast<double>(n);
            const double sd = std::sqrt(var);
            if (!(sd > 1e-12 * std::max(1.0, std::abs(mu)))) continue;
            kept.emplace(id, static_cast<std::uint32_t>(p.feature_ids.size()));
            p.feature_ids.emplace_back(id);
            p.mean.push_back(mu);
            p.stddev.push_back(sd);
        }
    }

    p.row_ptr.reserve(n + 1);
    p.row_ptr.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [id, v] : data.rows[i].values()) {
            if (auto it = kept.find(id); it != kept.end()) {
                p.col.push_back(it->second);
                p.val.push_back(v);
            }
        }
        p.row_ptr.push_back(p.col.size());
        p.target.push_back(data.labels[i] == Label::Positive ? 1.0 : 0.0);
    }

    const double pos_w = class_weighting ? static_cast<double>(n) / (2.0 * static_cast<double>(positives)) : 1.0;
    const double neg_w = class_weighting ? static_cast<double>(n) / (2.0 * static_cast<double>(n - positives)) : 1.0;
    for (double t : p.target) p.weight.push_back(t > 0.5 ? pos_w : neg_w);
    return p;
}

double loss(const Problem& p, const State& s, std::span<const std::size_t> batch, double l2_lambda) {
    const RawLinear r = to_raw(p, s);
    double total = 0, weight_sum = 0;
    for (std::size_t i : batch) {
        const double z = row_score(p, r, i);
        total += p.weight[i] * (softplus(z) - p.target[i] * z);
        weight_sum += p.weight[i];
    }
    double reg = 0;
    for (double w : s.weights) reg += w * w;
    return total / weight_sum + 0.5 * l2_lambda * reg;
}

State gradient(const Problem& p, const State& s, std::span<const std::size_t> batch, double l2_lambda) {
    const RawLinear r = to_raw(p, s);
    std::vector<double> acc(p.cols(), 0.0);
    double residual_sum = 0, weight_sum = 0;
    for (std::size_t i : batch) {
        const double residual = p.weight[i] * (logistic(row_score(p, r, i)) - p.target[i]);
        for (std::size_t k = p.row_ptr[i]; k < p.row_ptr[i + 1]; ++k) acc[p.col[k]] += residual * p.val[k];
        residual_sum += residual;
        weight_sum += p.weight[i];
    }
    State g;
    g.weights.resize(p.cols());
    for (std::size_t j = 0; j < p.cols(); ++j)
        g.weights[j] = (acc[j] - p.mean[j] * residual_sum) / (p.stddev[j] * weight_sum) + l2_lambda * s.weights[j];
    g.bias = residual_sum / weight_sum;
    return g;
}

}  // namespace training

ClassifierModel train(const TrainingSet& data, const Hyperparams& hp, training::Trace* trace) {
    hp.validate();
    const training::Problem p = training::make_problem(data, hp.class_weighting);

    training::State state{std::vector<double>(p.cols(), 0.0), 0.0};
    std::vector<std::size_t> all(p.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> order = all;

    std::mt19937_64 rng(hp.seed);
    double current = training::loss(p, state, all, hp.l2_lambda);
    if (trace) trace->epoch_loss = {current};
    double step_scale = 1.0;
    const auto batch = static_cast<std::size_t>(hp.batch_size);

    for (int epoch = 1; epoch <= hp.epochs; ++epoch) {
        const training::State before = state;
        std::shuffle(order.begin(), order.end(), rng);
        const double lr = hp.learning_rate * step_scale / std::sqrt(static_cast<double>(epoch));
        for (std::size_t start = 0; start < order.size(); start += batch) {
            std::span<const std::size_t> idx(order.data() + start, std::min(batch, order.size() - start));
            const training::State g = training::gradient(p, state, idx, hp.l2_lambda);
            for (std::size_t j = 0; j < p.cols(); ++j) state.weights[j] -= lr * g.weights[j];
            state.bias -= lr * g.bias;
        }
        const double next = training::loss(p, state, all, hp.l2_lambda);
        if (!(next <= current)) {
            state = before;
            step_scale *= 0.5;
        } else {
            current = next;
        }
        if (trace) trace->epoch_loss.push_back(current);
    }

    std::vector<ModelFeature> features;
    features.reserve(p.cols());
    for (std::size_t j = 0; j < p.cols(); ++j)
        features.push_back({p.feature_ids[j], p.mean[j], p.stddev[j], state.weights[j]});
    return ClassifierModel(std::move(features), state.bias, hp);
}

void save_model(std::ostream& out, const ClassifierModel& model) {
    using detail::format_double;
    const auto& hp = model.hyperparams();
    out << kModelMagic << '\n';
    out << "l2_lambda\t" << format_double(hp.l2_lambda) << '\n';
    out << "learning_rate\t" << format_double(hp.learning_rate) << '\n';
    out << "epochs\t" << hp.epochs << '\n';
    out << "batch_size\t" << hp.batch_size << '\n';
    out << "seed\t" << hp.seed << '\n';
    out << "class_weighting\t" << (hp.class_weighting ? 1 : 0) << '\n';
    out << "bias\t" << format_double(model.bias()) << '\n';
    out << "[scaler]\t" << model.features().size() << '\n';
    for (const auto& f : model.features())
        out << f.id << '\t' << format_double(f.mean) << '\t' << format_double(f.stddev) << '\n';
    out << "[weights]\t" << model.features().size() << '\n';
    for (const auto& f : model.features()) out << f.id << '\t' << format_double(f.weight) << '\n';
    out << "[end]\n";
}

std::string serialize(const ClassifierModel& model) {
    std::ostringstream out;
    save_model(out, model);
    return out.str();
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
        if (tab == std::string_view::npos) return out;
        start = tab + 1;
    }
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::vector<std::string_view> fields(std::size_t expected, std::string_view key = {}) {
        if (!std::getline(in_, line_)) throw ParseError("unexpected end of model", line_no_ + 1);
        ++line_no_;
        auto f = split_tabs(line_);
        if (f.size() != expected || (!key.empty() && f[0] != key))
            throw ParseError("expected " + (key.empty() ? std::string("a feature row") : "'" + std::string(key) + "'"),
                             line_no_);
        return f;
    }

    std::string_view line() {
        if (!std::getline(in_, line_)) throw ParseError("unexpected end of model", line_no_ + 1);
        ++line_no_;
        return line_;
    }

    double number(std::string_view s) {
        auto v = detail::parse_double(s);
        if (!v) throw ParseError("bad number '" + std::string(s) + "'", line_no_);
        return *v;
    }

    template <typename Int>
    Int integer(std::string_view s) {
        auto v = detail::parse_int<Int>(s);
        if (!v) throw ParseError("bad integer '" + std::string(s) + "'", line_no_);
        return *v;
    }

private:
    std::istream& in_;
    std::string line_;
    std::size_t line_no_ = 0;
};

}  // namespace

ClassifierModel load_model(std::istream& in) {
    LineReader r(in);
    if (r.line() != kModelMagic) throw ParseError("not a classifier model (bad header)", 1);
    Hyperparams hp;
    hp.l2_lambda = r.number(r.fields(2, "l2_lambda")[1]);
    hp.learning_rate = r.number(r.fields(2, "learning_rate")[1]);
    hp.epochs = r.integer<int>(r.fields(2, "epochs")[1]);
    hp.batch_size = r.integer<int>(r.fields(2, "batch_size")[1]);
    hp.seed = r.integer<std::uint64_t>(r.fields(2, "seed")[1]);
    hp.class_weighting = r.integer<int>(r.fields(2, "class_weighting")[1]) != 0;
    const double bias = r.number(r.fields(2, "bias")[1]);

    const auto n = r.integer<std::size_t>(r.fields(2, "[scaler]")[1]);
    std::vector<ModelFeature> features(n);
    for (auto& f : features) {
        auto row = r.fields(3);
        f.id = std::string(row[0]);
        f.mean = r.number(row[1]);
        f.stddev = r.number(row[2]);
    }
    if (r.integer<std::size_t>(r.fields(2, "[weights]")[1]) != n) throw ParseError("scaler/weight count mismatch");
    for (auto& f : features) {
        auto row = r.fields(2);
        if (row[0] != f.id) throw ParseError("weight row '" + std::string(row[0]) + "' out of order");
        f.weight = r.number(row[1]);
    }
    if (r.line() != "[end]") throw ParseError("missing [end] marker");
    return ClassifierModel(std::move(features), bias, hp);
}

}  // namespace attitude
