#include "streamlab/core.hpp"

#include <cmath>
#include <set>

namespace streamlab {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::categorical_out_of_range: return "categorical-out-of-range";
    case ErrorKind::unknown_class: return "unknown-class";
    case ErrorKind::index_out_of_range: return "index-out-of-range";
    case ErrorKind::empty_matrix: return "empty-matrix";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::frozen_learner: return "frozen-learner";
    case ErrorKind::not_frozen: return "not-frozen";
    case ErrorKind::unlabeled_instance: return "unlabeled-instance";
    case ErrorKind::untrained_learner: return "untrained-learner";
    case ErrorKind::empty_stream: return "empty-stream";
    case ErrorKind::exhausted: return "exhausted";
    case ErrorKind::empty_ensemble: return "empty-ensemble";
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::config: return "config";
    case ErrorKind::budget_exhausted: return "budget-exhausted";
    }
    return "unknown";
}

FeatureSpec FeatureSpec::numeric(std::string name) {
    return FeatureSpec{std::move(name), FeatureKind::numeric, {}};
}

FeatureSpec FeatureSpec::categorical_of(std::string name, std::vector<std::string> values) {
    return FeatureSpec{std::move(name), FeatureKind::categorical, std::move(values)};
}

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features, std::string label_name,
                             std::vector<std::string> classes)
    : features_(std::move(features)), label_name_(std::move(label_name)),
      classes_(std::move(classes)) {}

std::size_t FeatureSchema::num_categorical() const {
    std::size_t n = 0;
    for (const auto& f : features_)
        n += f.categorical() ? 1 : 0;
    return n;
}

std::size_t FeatureSchema::one_hot_width() const {
    std::size_t w = 0;
    for (const auto& f : features_)
        w += f.categorical() ? f.arity() : 1;
    return w;
}

void FeatureSchema::check_well_formed() const {
    std::set<std::string> names;
    for (const auto& f : features_) {
        if (!names.insert(f.name).second)
            throw StreamError(ErrorKind::invalid_argument, "duplicate feature name '" + f.name + "'");
        if (f.categorical() && f.arity() < 2)
            throw StreamError(ErrorKind::invalid_argument,
                              "categorical feature '" + f.name + "' needs arity >= 2");
    }
    if (classes_.size() < 2)
        throw StreamError(ErrorKind::invalid_argument, "schema needs at least 2 classes");
}

const Instance& validate_instance(const Instance& instance, const FeatureSchema& schema) {
    if (static_cast<std::size_t>(instance.x.size()) != schema.dimension())
        throw StreamError(ErrorKind::dimension_mismatch,
                          "instance has " + std::to_string(instance.x.size()) + " features, schema " +
                              std::to_string(schema.dimension()));
    for (std::size_t i = 0; i < schema.dimension(); ++i) {
        const auto& f = schema.feature(i);
        const double v = instance.x[static_cast<Eigen::Index>(i)];
        if (f.categorical()) {
            if (!(v >= 0.0) || v != std::floor(v) || v >= static_cast<double>(f.arity()))
                throw StreamError(ErrorKind::categorical_out_of_range,
                                  "feature '" + f.name + "' value " + std::to_string(v) +
                                      " outside arity " + std::to_string(f.arity()));
        } else if (!std::isfinite(v)) {
            throw StreamError(ErrorKind::invalid_argument, "feature '" + f.name + "' is not finite");
        }
    }
    if (instance.y && (*instance.y < 0 || static_cast<std::size_t>(*instance.y) >= schema.num_classes()))
        throw StreamError(ErrorKind::unknown_class, "class index " + std::to_string(*instance.y) +
                                                        " outside " +
                                                        std::to_string(schema.num_classes()) + " classes");
    return instance;
}

Eigen::VectorXd one_hot(const Eigen::VectorXd& x, const FeatureSchema& schema) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(schema.one_hot_width()));
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < schema.dimension(); ++i) {
        const auto& f = schema.feature(i);
        const double v = x[static_cast<Eigen::Index>(i)];
        if (f.categorical()) {
            const auto idx = static_cast<Eigen::Index>(v);
            if (idx >= 0 && idx < static_cast<Eigen::Index>(f.arity()))
                out[col + idx] = 1.0;
            col += static_cast<Eigen::Index>(f.arity());
        } else {
            out[col++] = v;
        }
    }
    return out;
}

std::string_view to_string(PredictorStatus status) {
    switch (status) {
    case PredictorStatus::stable: return "stable";
    case PredictorStatus::warning: return "warning";
    case PredictorStatus::drift: return "drift";
    }
    return "stable";
}

PredictorStatus parse_status(std::string_view text) {
    if (text == "stable") return PredictorStatus::stable;
    if (text == "warning") return PredictorStatus::warning;
    if (text == "drift") return PredictorStatus::drift;
    throw StreamError(ErrorKind::parse, "unknown status '" + std::string(text) + "'");
}

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes)
    : counts_(Counts::Zero(static_cast<Eigen::Index>(num_classes),
                           static_cast<Eigen::Index>(num_classes))) {}

void ConfusionMatrix::update(int y_true, int y_pred) {
    const auto c = static_cast<int>(counts_.rows());
    if (y_true < 0 || y_true >= c || y_pred < 0 || y_pred >= c)
        throw StreamError(ErrorKind::index_out_of_range,
                          "confusion update (" + std::to_string(y_true) + ", " + std::to_string(y_pred) +
                              ") outside " + std::to_string(c) + " classes");
    ++counts_(y_true, y_pred);
    ++total_;
}

ConfusionMatrix confusion_update(ConfusionMatrix m, int y_true, int y_pred) {
    m.update(y_true, y_pred);
    return m;
}

double accuracy(const ConfusionMatrix& m) {
    if (m.total() == 0)
        throw StreamError(ErrorKind::empty_matrix, "accuracy of an empty confusion matrix");
    return static_cast<double>(m.counts().trace()) / static_cast<double>(m.total());
}

double cohen_kappa(const ConfusionMatrix& m) {
    if (m.total() == 0)
        throw StreamError(ErrorKind::empty_matrix, "kappa of an empty confusion matrix");
    const double n = static_cast<double>(m.total());
    const double p_o = static_cast<double>(m.counts().trace()) / n;
    const Eigen::VectorXd rows = m.counts().rowwise().sum().cast<double>();
    const Eigen::VectorXd cols = m.counts().colwise().sum().transpose().cast<double>();
    const double p_e = rows.dot(cols) / (n * n);
    if (p_e >= 1.0)
        return 0.0;
    return (p_o - p_e) / (1.0 - p_e);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view component) {
    // FNV-1a over the name, then one splitmix64 round.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : component) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::uint64_t z = seed ^ h;
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace streamlab
