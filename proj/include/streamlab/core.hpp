#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace streamlab {

enum class ErrorKind {
    dimension_mismatch,
    categorical_out_of_range,
    unknown_class,
    index_out_of_range,
    empty_matrix,
    invalid_argument,
    frozen_learner,
    not_frozen,
    unlabeled_instance,
    untrained_learner,
    empty_stream,
    exhausted,
    empty_ensemble,
    io,
    parse,
    config,
    budget_exhausted,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-checkable kind.
class StreamError : public std::runtime_error {
public:
    StreamError(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

enum class FeatureKind { numeric, categorical };

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
    /// Category labels; arity() is their count. Empty for numeric features.
    std::vector<std::string> values;

    std::size_t arity() const { return values.size(); }
    bool categorical() const { return kind == FeatureKind::categorical; }

    bool operator==(const FeatureSpec&) const = default;

    static FeatureSpec numeric(std::string name);
    static FeatureSpec categorical_of(std::string name, std::vector<std::string> values);
};

class FeatureSchema {
public:
    FeatureSchema() = default;
    FeatureSchema(std::vector<FeatureSpec> features, std::string label_name,
                  std::vector<std::string> classes);

    const std::vector<FeatureSpec>& features() const { return features_; }
    const FeatureSpec& feature(std::size_t i) const { return features_.at(i); }
    const std::string& label_name() const { return label_name_; }
    const std::vector<std::string>& classes() const { return classes_; }

    std::size_t dimension() const { return features_.size(); }
    std::size_t num_classes() const { return classes_.size(); }
    std::size_t num_categorical() const;

    /// Width of the one-hot expansion: numerics keep one column, categoricals take `arity`.
    std::size_t one_hot_width() const;

    /// Throws invalid_argument if names collide, an arity is < 2 or there are < 2 classes.
    void check_well_formed() const;

    bool operator==(const FeatureSchema&) const = default;

private:
    std::vector<FeatureSpec> features_;
    std::string label_name_ = "class";
    std::vector<std::string> classes_;
};

struct Instance {
    Eigen::VectorXd x;
    std::optional<int> y;
    std::uint64_t seq = 0;

    bool labeled() const { return y.has_value(); }
};

/// Returns the instance unchanged when it conforms to the schema.
const Instance& validate_instance(const Instance& instance, const FeatureSchema& schema);

/// Numeric values copied, categorical index i expanded into a unit column.
Eigen::VectorXd one_hot(const Eigen::VectorXd& x, const FeatureSchema& schema);

enum class PredictorStatus { stable = 0, warning = 1, drift = 2 };

std::string_view to_string(PredictorStatus status);
PredictorStatus parse_status(std::string_view text);

/// Rows are the true class, columns the predicted class.
class ConfusionMatrix {
public:
    using Counts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

    explicit ConfusionMatrix(std::size_t num_classes);

    void update(int y_true, int y_pred);

    std::size_t num_classes() const { return static_cast<std::size_t>(counts_.rows()); }
    std::int64_t total() const { return total_; }
    std::int64_t operator()(int y_true, int y_pred) const { return counts_(y_true, y_pred); }
    const Counts& counts() const { return counts_; }

    bool operator==(const ConfusionMatrix& other) const { return counts_ == other.counts_; }

private:
    Counts counts_;
    std::int64_t total_ = 0;
};

ConfusionMatrix confusion_update(ConfusionMatrix m, int y_true, int y_pred);

double accuracy(const ConfusionMatrix& m);

/// Chance-corrected agreement; defined as 0 when expected agreement is 1.
double cohen_kappa(const ConfusionMatrix& m);

/// Pull-based instance source. Sources assign `seq` starting at 0.
class StreamSource {
public:
    virtual ~StreamSource() = default;
    virtual std::optional<Instance> next() = 0;
    virtual const FeatureSchema& schema() const = 0;
};

/// Mixes a 64-bit seed with a component name so sub-streams stay independent.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view component);

}  // namespace streamlab
